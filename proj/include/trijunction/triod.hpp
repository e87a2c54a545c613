#ifndef TRIJUNCTION_TRIOD_HPP
#define TRIJUNCTION_TRIOD_HPP

// Fermat–Steiner geometry: the junction point D minimizing |DA|+|DB|+|DC|,
// the triod T_ABC with its three-sector partition of the disk, the closed-form
// one-variable minimization, and the exponent bookkeeping beta(alpha).

#include <array>

#include "trijunction/potential.hpp"
#include "trijunction/vec.hpp"

namespace trijunction {

struct FermatResult {
  Vec2 D;
  bool atVertex = false;     // some triangle angle >= 120 degrees
  bool collinear = false;    // degenerate Steiner tree, middle point returned
};

FermatResult fermat_point(const Vec2& A, const Vec2& B, const Vec2& C);

struct Triod {
  Vec2 A, B, C;  // anchors: A on the 1-2 transition, B on 1-3, C on 2-3
  Vec2 D;        // junction
  double theta = 0.0;  // angle of D->A in (0, 2*pi]
  bool atVertex = false;
  bool collinear = false;

  double lenDA() const { return dist(D, A); }
  double lenDB() const { return dist(D, B); }
  double lenDC() const { return dist(D, C); }
  double totalLength() const { return lenDA() + lenDB() + lenDC(); }

  // Region 1 between DA and DB, region 2 between DA and DC, region 3 between
  // DB and DC. Ties on a segment go to the lower region index.
  int classify(const Vec2& z) const;
};

Triod make_triod(const Vec2& A, const Vec2& B, const Vec2& C);

// f(y*) = (yA - y*) + sqrt((xC - xB)^2 + (2 y* - yB - yC)^2); total function.
double appendix_f(double ystar, double yA, double yB, double yC, double xB, double xC);

struct YstarMin {
  double ystar = 0.0;
  double fmin = 0.0;
  bool degenerate = false;         // xC == xB kink case
  double stationarityResidual = 0.0;  // |3 (2 y* - yB - yC)^2 - (xC - xB)^2|
};

// Closed-form minimizer of appendix_f: ystar = (yB + yC + (xC - xB)/sqrt(3))/2.
YstarMin appendix_ystar_min(double yA, double yB, double yC, double xB, double xC);

// beta = 1 - min(1/6, (1 - alpha)/2); throws on alpha outside (0, 1).
double beta_of_alpha(double alpha);

// Piecewise-constant triple junction map z -> a_{classify(z)}.
struct JunctionMap {
  Triod triod;
  std::array<Vec2, 3> wells;
  Vec2 operator()(const Vec2& z) const {
    return wells[static_cast<std::size_t>(triod.classify(z) - 1)];
  }
};

JunctionMap junction_map(const Triod& triod, const WellSystem& ws);

}  // namespace trijunction

#endif
