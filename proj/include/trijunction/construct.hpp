#ifndef TRIJUNCTION_CONSTRUCT_HPP
#define TRIJUNCTION_CONSTRUCT_HPP

// Explicit fields used by the energy bounds: smoothed triple-junction boundary
// data, the one-phase radial competitor, the two-phase strip competitor, and
// the diffuse-triod upper-bound competitor.

#include <array>
#include <map>
#include <optional>
#include <string>

#include "trijunction/connection.hpp"
#include "trijunction/field.hpp"
#include "trijunction/triod.hpp"

namespace trijunction {

struct BoundaryTrace {
  double R = 0.0;
  std::function<Vec2(double)> eval;  // angle -> value in the u-plane
  bool smooth = true;
};

// Profiles are keyed by the unordered well pair; orientation handled inside.
using ProfileSet = std::array<Profile1D, 3>;  // {U12, U13, U23}

const Profile1D& profile_for(const ProfileSet& ps, int i, int j, bool& flipped);

// Trace equal to a_i on the phase arcs, traversing the matching connection at
// unit speed across each transition arc (arclength parametrization), with the
// tiny profile end mismatch removed by a linear ramp. Throws InvalidGeometry
// when transitions would overlap.
BoundaryTrace boundary_data(const Triod& triod, double R, const ProfileSet& profiles,
                            double transitionWidth);

struct CompetitorReport {
  Field2D field;
  EnergyBreakdown energy;
  double predictedBound = 0.0;
  double slack = 0.0;
  std::map<std::string, double> parameters;
};

// Lemma 4.1 Case 1: trace at r = R, linear pull to a_target across a unit
// annulus, constant a_target inside. predictedBound is R-independent; without
// a calibrated value it is 1.5x the measured energy.
CompetitorReport radial_competitor(const BoundaryTrace& trace, double R, const WellSystem& ws,
                                   int target, double h,
                                   std::optional<double> calibratedBound = std::nullopt);

// Lemma 4.1 Case 2: U_12(y - y0) on the core strip, linear layers D_+/D_- of
// height hWidth, wells beyond. predictedBound = 2 R sigma + c R^(1/3) with c
// from the measured interpolation-layer energy.
CompetitorReport two_phase_competitor(double R, double y0, const WellSystem& ws,
                                      const Profile1D& u12, double hWidth, double h);

// Prop. 5.1 competitor: transverse connection profiles in half-width R^alpha
// rectangles along the triod segments, wells in the bulk sectors, angular
// interpolation between the two adjacent edge profiles within each sector and
// a radial pull to the well centroid in an O(1) core at the junction.
// An optional trace is glued on over the annulus [R - R^alpha, R].
struct TripleCompetitorOptions {
  double alpha = 0.5;
  double h = 0.125;
  const BoundaryTrace* imposeTrace = nullptr;
  std::optional<double> calibratedC;  // predictedBound = sigma L + C R^alpha
};

CompetitorReport triple_competitor(const Triod& triod, double R, const WellSystem& ws,
                                   const ProfileSet& profiles,
                                   const TripleCompetitorOptions& opts = {});

// The analytic triple-competitor evaluator (used for seeding and tests).
std::function<Vec2(Vec2)> triple_competitor_function(const Triod& triod, double R,
                                                     const WellSystem& ws,
                                                     const ProfileSet& profiles, double alpha,
                                                     const BoundaryTrace* imposeTrace = nullptr,
                                                     double bandEnd = -1.0);

// Materialize any analytic field on a disk grid, freezing the Dirichlet band
// to the given trace when provided.
Field2D materialize(double R, double h, const std::function<Vec2(Vec2)>& fn,
                    const BoundaryTrace* trace = nullptr);

}  // namespace trijunction

#endif
