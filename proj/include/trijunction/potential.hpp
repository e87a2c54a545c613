#ifndef TRIJUNCTION_POTENTIAL_HPP
#define TRIJUNCTION_POTENTIAL_HPP

// Triple-well potentials W : R^2 -> [0, inf) vanishing exactly at three wells
// a_1, a_2, a_3 with nondegenerate Hessians, plus the sampled certification of
// the constants (deltaW, cW, CW) that the lemma-level predicates rely on.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "trijunction/vec.hpp"

namespace trijunction {

enum class PotentialKind { Canonical, Custom };

struct WellSystem {
  std::array<Vec2, 3> wells;
  std::function<double(Vec2)> eval;
  std::function<Vec2(Vec2)> grad;
  std::function<Mat2(Vec2)> hess;

  PotentialKind kind = PotentialKind::Custom;
  double scale = 1.0;  // meaningful for the canonical potential only

  // Hessian eigenvalue bounds at the wells (H1).
  double c1 = 0.0;
  double c2 = 0.0;
  // Outer radius with W_u(u).u > 0 for |u| > M.
  double M = 0.0;
  // Lemma 2.1 style constants, zero until certified.
  double deltaW = 0.0;
  double cW = 0.0;
  double CW = 0.0;
  bool certified = false;

  const Vec2& well(int i) const { return wells[static_cast<std::size_t>(i - 1)]; }
  double minWellSeparation() const;
};

// W(u) = scale * |u-a1|^2 |u-a2|^2 |u-a3|^2 with the wells at the vertices of
// the equilateral triangle of circumradius 1, a1 = (1, 0). The dihedral
// symmetry of the well set makes the three connection actions equal.
WellSystem canonical_wellsystem(double scale);

// User-supplied potential; must be certified before use elsewhere.
WellSystem custom_wellsystem(const std::array<Vec2, 3>& wells,
                             std::function<double(Vec2)> eval,
                             std::function<Vec2(Vec2)> grad,
                             std::function<Mat2(Vec2)> hess, double M);

struct CertificationViolation {
  double delta = 0.0;
  Vec2 sample;
  double value = 0.0;
  double bound = 0.0;
  std::string what;
};

struct CertificationReport {
  double deltaW = 0.0;
  double cW = 0.0;
  double CW = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double M = 0.0;
  std::vector<CertificationViolation> violations;  // rejected candidate deltas
  bool outerRadiusOk = false;                      // W_u(u).u > 0 sampled beyond M
};

// Samples spheres |u - a_i| = delta for each delta in the grid and the far
// region min_i |u - a_i| >= delta, and returns the largest delta_W such that
//   (1/2) cW delta^2 <= W <= (1/2) CW delta^2 on every sampled sphere, and
//   W >= (1/2) cW delta^2 whenever min_i |u - a_i| >= delta.
// Throws CertificationFailed when no grid delta passes.
WellSystem certify_constants(const WellSystem& ws, const std::vector<double>& deltaGrid,
                             int sampleCount, CertificationReport* report = nullptr);

// Fast inlined evaluators for the hot kernels. The canonical potential gets a
// closed-form path; anything else goes through the std::function members.
struct CanonicalPotential {
  double s;
  Vec2 a1, a2, a3;

  explicit CanonicalPotential(const WellSystem& ws)
      : s(ws.scale), a1(ws.wells[0]), a2(ws.wells[1]), a3(ws.wells[2]) {}

  double eval(const Vec2& u) const {
    const Vec2 d1 = u - a1, d2 = u - a2, d3 = u - a3;
    return s * d1.norm2() * d2.norm2() * d3.norm2();
  }
  Vec2 grad(const Vec2& u) const {
    const Vec2 d1 = u - a1, d2 = u - a2, d3 = u - a3;
    const double p1 = d1.norm2(), p2 = d2.norm2(), p3 = d3.norm2();
    return (d1 * (p2 * p3) + d2 * (p1 * p3) + d3 * (p1 * p2)) * (2.0 * s);
  }
};

struct GenericPotential {
  const WellSystem* ws;
  explicit GenericPotential(const WellSystem& w) : ws(&w) {}
  double eval(const Vec2& u) const { return ws->eval(u); }
  Vec2 grad(const Vec2& u) const { return ws->grad(u); }
};

}  // namespace trijunction

#endif
