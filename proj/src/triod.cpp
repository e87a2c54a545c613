#include "trijunction/triod.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trijunction {

namespace {

double angleAt(const Vec2& v, const Vec2& p, const Vec2& q) {
  // Interior angle at v of triangle v-p-q.
  const Vec2 e1 = p - v, e2 = q - v;
  const double c = std::clamp(dot(e1, e2) / (e1.norm() * e2.norm()), -1.0, 1.0);
  return std::acos(c);
}

// Apex of the equilateral triangle erected on pq, on the side away from opp.
Vec2 outwardApex(const Vec2& p, const Vec2& q, const Vec2& opp) {
  const Vec2 mid = (p + q) * 0.5;
  Vec2 n{-(q - p).y, (q - p).x};
  n = n * (std::sqrt(3.0) / 2.0);
  const Vec2 cand1 = mid + n, cand2 = mid - n;
  return dist(cand1, opp) > dist(cand2, opp) ? cand1 : cand2;
}

bool lineIntersection(const Vec2& p1, const Vec2& d1, const Vec2& p2, const Vec2& d2, Vec2& out) {
  const double den = cross(d1, d2);
  if (std::abs(den) < 1e-14 * d1.norm() * d2.norm()) return false;
  const double t = cross(p2 - p1, d2) / den;
  out = p1 + d1 * t;
  return true;
}

// Newton polish on grad f(P) = sum of unit vectors; quadratic convergence to
// the interior Fermat point.
Vec2 polish(Vec2 P, const Vec2& A, const Vec2& B, const Vec2& C) {
  const Vec2 pts[3] = {A, B, C};
  for (int it = 0; it < 40; ++it) {
    Vec2 g{};
    Mat2 H{};
    for (const auto& X : pts) {
      const Vec2 d = P - X;
      const double r = d.norm();
      if (r < 1e-15) return P;
      g += d / r;
      const double inv = 1.0 / r;
      H.xx += inv * (1.0 - d.x * d.x / (r * r));
      H.yy += inv * (1.0 - d.y * d.y / (r * r));
      H.xy += inv * (-d.x * d.y / (r * r));
    }
    const double det = H.xx * H.yy - H.xy * H.xy;
    if (std::abs(det) < 1e-30) break;
    const Vec2 stepv{(H.yy * g.x - H.xy * g.y) / det, (H.xx * g.y - H.xy * g.x) / det};
    P -= stepv;
    if (stepv.norm() < 1e-14 * (1.0 + P.norm())) break;
  }
  return P;
}

}  // namespace

FermatResult fermat_point(const Vec2& A, const Vec2& B, const Vec2& C) {
  if (A.x == B.x && A.y == B.y && B.x == C.x && B.y == C.y) return {A, true, true};

  const double area2 = std::abs(cross(B - A, C - A));
  const double scale = std::max({dist(A, B), dist(B, C), dist(A, C)});
  if (area2 < 1e-12 * scale * scale) {
    // Collinear: the middle point is the degenerate Steiner hub.
    const Vec2 pts[3] = {A, B, C};
    int mid = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      const double s = dist(pts[k], pts[(k + 1) % 3]) + dist(pts[k], pts[(k + 2) % 3]);
      if (s < best) {
        best = s;
        mid = k;
      }
    }
    return {pts[mid], true, true};
  }

  const double twoPiOver3 = 2.0 * kPi / 3.0;
  if (angleAt(A, B, C) >= twoPiOver3 - 1e-12) return {A, true, false};
  if (angleAt(B, A, C) >= twoPiOver3 - 1e-12) return {B, true, false};
  if (angleAt(C, A, B) >= twoPiOver3 - 1e-12) return {C, true, false};

  // 120-degree construction: D is the intersection of the two Simpson lines.
  const Vec2 apexA = outwardApex(B, C, A);
  const Vec2 apexB = outwardApex(A, C, B);
  Vec2 D;
  if (!lineIntersection(A, apexA - A, B, apexB - B, D)) {
    // Near-degenerate: Weiszfeld iterations as a fallback start.
    D = (A + B + C) / 3.0;
    for (int it = 0; it < 200; ++it) {
      double wsum = 0.0;
      Vec2 num{};
      for (const auto& X : {A, B, C}) {
        const double r = std::max(dist(D, X), 1e-14);
        num += X / r;
        wsum += 1.0 / r;
      }
      D = num / wsum;
    }
  }
  return {polish(D, A, B, C), false, false};
}

Triod make_triod(const Vec2& A, const Vec2& B, const Vec2& C) {
  Triod t;
  t.A = A;
  t.B = B;
  t.C = C;
  const FermatResult f = fermat_point(A, B, C);
  t.D = f.D;
  t.atVertex = f.atVertex;
  t.collinear = f.collinear;
  const Vec2 da = A - t.D;
  double th;
  if (da.norm() > 1e-12 * (1.0 + dist(A, B))) {
    th = std::atan2(da.y, da.x);
  } else {
    // D at the A vertex: the limiting ray direction bisects the reflex angle
    // between DB and DC.
    const Vec2 db = B - t.D, dc = C - t.D;
    Vec2 bis = db / db.norm() + dc / dc.norm();
    if (bis.norm() < 1e-12) bis = Vec2{-(db.y), db.x};
    bis = -bis;
    th = std::atan2(bis.y, bis.x);
  }
  th = wrapAngle(th);
  t.theta = (th == 0.0) ? kTwoPi : th;  // theta lives in (0, 2*pi]
  return t;
}

int Triod::classify(const Vec2& z) const {
  Vec2 dirA = A - D, dirB = B - D, dirC = C - D;
  const double tiny = 1e-12 * (1.0 + dist(A, B));
  if (dirA.norm() < tiny || dirB.norm() < tiny || dirC.norm() < tiny) {
    // Vertex case: replace the vanishing ray by the limiting bisector ray.
    auto fix = [&](Vec2& d, const Vec2& o1, const Vec2& o2) {
      if (d.norm() >= tiny) return;
      Vec2 bis = o1 / o1.norm() + o2 / o2.norm();
      if (bis.norm() < 1e-12) bis = Vec2{-o1.y, o1.x};
      d = -bis;
    };
    fix(dirA, dirB, dirC);
    fix(dirB, dirA, dirC);
    fix(dirC, dirA, dirB);
  }

  const Vec2 w = z - D;
  if (w.norm() == 0.0) return 1;  // the junction itself, lowest index

  // Exact on-ray tests drive the declared tie-breaks.
  auto onRay = [&](const Vec2& d) {
    return std::abs(cross(d, w)) <= 1e-12 * d.norm() * w.norm() && dot(d, w) >= 0.0;
  };
  if (onRay(dirA)) return 1;  // DA borders regions 1, 2
  if (onRay(dirB)) return 1;  // DB borders regions 1, 3
  if (onRay(dirC)) return 2;  // DC borders regions 2, 3

  const double phiA = wrapAngle(std::atan2(dirA.y, dirA.x));
  const double phiB = wrapAngle(std::atan2(dirB.y, dirB.x));
  const double phiC = wrapAngle(std::atan2(dirC.y, dirC.x));
  const double phi = wrapAngle(std::atan2(w.y, w.x));

  // Walk ccw from ray A: z falls in the sector bounded by the pair of rays
  // around it; {A,B} -> 1, {A,C} -> 2, {B,C} -> 3.
  const double gB = ccwGap(phiA, phiB);
  const double gC = ccwGap(phiA, phiC);
  const double gz = ccwGap(phiA, phi);
  if (gB < gC) {
    if (gz < gB) return 1;
    if (gz < gC) return 3;
    return 2;
  }
  if (gz < gC) return 2;
  if (gz < gB) return 3;
  return 1;
}

double appendix_f(double ystar, double yA, double yB, double yC, double xB, double xC) {
  const double dx = xC - xB;
  const double dy = 2.0 * ystar - yB - yC;
  return (yA - ystar) + std::sqrt(dx * dx + dy * dy);
}

YstarMin appendix_ystar_min(double yA, double yB, double yC, double xB, double xC) {
  if (xC < xB) throw std::invalid_argument("appendix_ystar_min: requires xC >= xB");
  YstarMin out;
  if (xC == xB) {
    out.ystar = 0.5 * (yB + yC);
    out.degenerate = true;
    out.fmin = appendix_f(out.ystar, yA, yB, yC, xB, xC);
    out.stationarityResidual = 0.0;
    return out;
  }
  out.ystar = 0.5 * (yB + yC + (xC - xB) / std::sqrt(3.0));
  out.fmin = appendix_f(out.ystar, yA, yB, yC, xB, xC);
  const double lhs = 3.0 * (2.0 * out.ystar - yB - yC) * (2.0 * out.ystar - yB - yC);
  const double rhs = (xC - xB) * (xC - xB);
  out.stationarityResidual = std::abs(lhs - rhs);
  return out;
}

double beta_of_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("beta_of_alpha: alpha must lie in (0, 1)");
  return 1.0 - std::min(1.0 / 6.0, 0.5 * (1.0 - alpha));
}

JunctionMap junction_map(const Triod& triod, const WellSystem& ws) {
  return JunctionMap{triod, ws.wells};
}

}  // namespace trijunction
