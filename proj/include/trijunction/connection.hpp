#ifndef TRIJUNCTION_CONNECTION_HPP
#define TRIJUNCTION_CONNECTION_HPP

// 1D minimizing heteroclinic connections U_ij between wells and the action
// sigma = min int ( |U'|^2/2 + W(U) ) deta, plus the Lemma-2.3 truncated
// energy J and an independent Agmon-metric geodesic evaluation of sigma.

#include <span>
#include <vector>

#include "trijunction/potential.hpp"

namespace trijunction {

struct Profile1D {
  int wellFrom = 1;
  int wellTo = 2;
  double L = 0.0;     // samples live on [-L, L]
  double dEta = 0.0;  // uniform step
  std::vector<Vec2> samples;

  double sigma = 0.0;
  double decayK = 0.0;            // |U - a_j| <= decayK * exp(-decayk * eta)
  double decayk = 0.0;
  double decayFitResidual = 0.0;  // rms residual of the log-linear fit
  double equipartitionDefect = 0.0;

  double eta(std::size_t k) const { return -L + dEta * static_cast<double>(k); }
  // Clamped linear interpolation.
  Vec2 valueAt(double eta) const;
  Profile1D reversed() const;
};

struct ConnectionOptions {
  double L = 20.0;
  int n = 4000;  // segment count; n+1 samples
  double tolGradient = 1e-8;
  int maxIter = 400000;
};

// Energy of the piecewise-linear path through the samples: exact kinetic term
// plus 4-point Gauss–Legendre for the potential per segment (exact for the
// degree-6 canonical W).
double path_action(const WellSystem& ws, std::span<const Vec2> samples, double ds);

// Straight-segment initialization, Barzilai–Borwein descent on the discrete
// action, translation fixed by centering |U-a_i| = |U-a_j| at eta = 0.
// Throws NonConverged if descent stagnates above tolGradient.
Profile1D minimize_connection(const WellSystem& ws, int i, int j,
                              const ConnectionOptions& opts = {});

// Lemma 2.3 functional over a sampled path whose endpoints sit on the delta
// spheres of a_i and a_j (same delta, delta < deltaW). Throws InvalidPath.
double j_energy(const WellSystem& ws, std::span<const Vec2> path, double ds, int i, int j);

// max over interior segment midpoints of | |U'|^2/2 - W(U) |.
double equipartition_defect(const WellSystem& ws, const Profile1D& p,
                            double interiorFraction = 0.8);

struct AgmonOptions {
  int gridN = 361;     // nodes per axis of the u-plane graph
  double box = 1.6;    // graph covers [-box, box]^2
  int refineN = 400;   // polyline points for the continuous refinement
  int refineIters = 4000;
};

// inf over paths of int sqrt(2 W) |gamma'| by shortest path on a u-plane graph
// followed by continuous polyline relaxation. Independent of the action
// descent; used as the reference side of the sigma bracket.
double agmon_sigma(const WellSystem& ws, int i, int j, const AgmonOptions& opts = {});

}  // namespace trijunction

#endif
