#ifndef TRIJUNCTION_SOLVE_HPP
#define TRIJUNCTION_SOLVE_HPP

// Energy minimization on B_R with Dirichlet triple-junction boundary data:
// safeguarded Barzilai–Borwein gradient descent with a monotone energy log,
// plus the local-minimality probe and the variational maximum principle check.

#include <optional>
#include <string>
#include <vector>

#include "trijunction/construct.hpp"
#include "trijunction/field.hpp"

namespace trijunction {

struct SolveConfig {
  double R = 64.0;
  double h = 0.125;
  int maxIter = 100000;
  enum class StepRule { Fixed, Adaptive } stepRule = StepRule::Adaptive;
  double tolGradient = 1e-5;   // on max |energy gradient| / h^2
  double tolEnergyRate = 0.0;  // optional secondary stop, 0 disables
  std::string seedKind = "triple_competitor";
  int logEvery = 100;
};

struct SolveLogEntry {
  int iter = 0;
  double energy = 0.0;
  double gradNorm = 0.0;  // max residual |g|/h^2
  double step = 0.0;
};

struct SolveResult {
  Field2D field;
  bool converged = false;
  std::string stopReason;
  int iterations = 0;
  double finalResidual = 0.0;
  double finalEnergy = 0.0;
  std::vector<SolveLogEntry> log;
};

// Seed defaults to the angular extension of the trace when none is given.
SolveResult solve(const SolveConfig& cfg, const BoundaryTrace& trace, const WellSystem& ws,
                  const Field2D* seed = nullptr);

struct ProbeReport {
  int trials = 0;
  double minMargin = 0.0;  // min over trials of E(f+v) - E(f)
  bool pass = false;
  // E(f - eps g) - E(f); negative when the field is not a critical point.
  double gradientDirectionMargin = 0.0;
};

// Random smooth compactly supported bumps; margins must stay >= -1e-8 at a
// genuine local minimizer.
ProbeReport local_minimality_probe(const Field2D& f, const WellSystem& ws, int trials,
                                   double radius, std::uint64_t rngSeed = 12345);

struct MaxPrincipleReport {
  double rBoundary = 0.0;
  double rInterior = 0.0;
  double lipschitz = 0.0;
  bool pass = false;
  std::int64_t nodes = 0;
};

// Lemma 2.4 surrogate: max |u - a_i| over the subdomain interior must not
// exceed the discrete-boundary max by more than 2h Lip(u).
MaxPrincipleReport maximum_principle_check(const Field2D& f, const WellSystem& ws,
                                           const RegionPred& subdomain, int wellIndex);

}  // namespace trijunction

#endif
