#ifndef TRIJUNCTION_DIAGNOSE_HPP
#define TRIJUNCTION_DIAGNOSE_HPP

// Measurement pipeline: boundary phase decomposition, diffuse-interface
// localization, slice functionals with y*, the slicing lower bound, and the
// multiscale blow-down trace with junction-direction extraction.

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "trijunction/field.hpp"
#include "trijunction/triod.hpp"

namespace trijunction {

struct AngleInterval {
  double start = 0.0;  // ccw interval [start, start + length)
  double length = 0.0;
};

struct PhaseDecomposition {
  double delta = 0.0;
  double r = 0.0;
  std::array<std::vector<AngleInterval>, 3> Yi;  // threshold sets per phase
  std::array<AngleInterval, 3> phaseArcs;        // I_1, I_2, I_3
  struct TransitionArc {
    AngleInterval arc;
    int phaseBefore = 0, phaseAfter = 0;  // ccw order
  };
  std::array<TransitionArc, 3> transitions;  // the three separating arcs
  double d1 = 0.0, d2 = 0.0;                 // min/max transition arclength
  Vec2 A, B, C;  // midpoints of the 1-2, 1-3, 2-3 transitions, on the circle
  double fittedC = 0.0;  // max over I_i of |u - a_i| / delta (Lemma 4.2 fit)
};

// Throws DecompositionFailed when some Y_i is empty (one- or two-phase trace).
PhaseDecomposition phase_decomposition(const Field2D& f, const WellSystem& ws, double r,
                                       double delta);

struct DecayFit {
  double K = 0.0;
  double k = 0.0;
  double residual = 0.0;  // rms residual of the log-linear fit
  std::int64_t count = 0;
};

struct DiffuseInterfaceReport {
  std::vector<Vec2> points;
  bool empty = false;
  double gamma = 0.0;
  double localizationRadius = 0.0;      // max distance to the triod
  std::array<DecayFit, 3> regionDecay;  // |u - a_i| vs dist(z, boundary of D_i)
};

DiffuseInterfaceReport diffuse_interface(const Field2D& f, const WellSystem& ws, double gamma,
                                         const Triod* triod = nullptr);

struct SliceOptions {
  double amplitudeThreshold = 0.0;  // 0 -> R^(-1/6)
  double slack = 0.0;               // 0 -> R^(2/3)
  double yMin = std::numeric_limits<double>::quiet_NaN();  // default y_C' + d2
  double d2 = 0.0;          // transition-arc allowance entering the default yMin
  double sampleStep = 0.0;  // 0 -> h/2
};

struct SliceProfile {
  std::vector<double> yGrid;
  std::array<std::vector<double>, 3> lambda;
  std::vector<double> chordLength;
  double ystar = 0.0;
  bool found = false;
  double amplitudeThreshold = 0.0;
  double slack = 0.0;
  double yMin = 0.0;
  double frameRotation = 0.0;   // coordinates were rotated by this angle
  Vec2 Aprime, Bprime, Cprime;  // primed anchors in the rotated frame
  Vec2 Dframe;                  // junction in the rotated frame
};

// Rotates the frame so D->A points along +y (the paper's normalization) and
// scans horizontal slices. The primed anchors extend the triod rays to the
// circle of radius R + h.
SliceProfile slice_profile(const Field2D& f, const WellSystem& ws, const Triod& triod,
                           const SliceOptions& opts = {});

// sigma * [ (yA' - y*) + sqrt((xC' - xB')^2 + (2 y* - yB' - yC')^2) ].
double lower_bound_value(const SliceProfile& sp, const Vec2& Ap, const Vec2& Bp, const Vec2& Cp,
                         double sigma);
double lower_bound_value(const SliceProfile& sp, double sigma);  // stored anchors

struct BlowdownRecord {
  double R = 0.0;
  bool ok = false;
  std::string failReason;
  double theta = 0.0;
  Vec2 D;
  double l1Distance = 0.0;
  double energyPerR = 0.0;
  double localizationRadius = 0.0;
};

struct BlowdownTrace {
  std::vector<BlowdownRecord> records;
  std::vector<double> dTheta;  // |theta_{i+1} - theta_i| between ok rungs
  double betaFitLoc = 0.0;     // fitted exponent of localizationRadius vs R
  double betaFitL1 = 0.0;      // fitted exponent of the L1 distance vs R
  double geomRatio = 0.0;      // fitted ratio of consecutive |dTheta|
  double tailSum = 0.0;        // geometric tail estimate
  bool cauchy = false;
  std::array<double, 3> finalAnglesAtD{};  // degrees, between the triod rays
};

BlowdownTrace blowdown(const Field2D& f, const std::vector<double>& ladder, const WellSystem& ws,
                       double delta, double gamma, int rescaleN = 256);

// u(r z) on B_1 for a sub-disk radius r <= f.R (blowdown rungs).
Field2D rescale_disk(const Field2D& f, int targetN, double r);

// Distance from a point to the triod (min over the three segments).
double triod_distance(const Vec2& z, const Triod& t);

}  // namespace trijunction

#endif
