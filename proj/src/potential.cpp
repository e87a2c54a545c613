#include "trijunction/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "trijunction/errors.hpp"

namespace trijunction {

double WellSystem::minWellSeparation() const {
  double m = dist(wells[0], wells[1]);
  m = std::min(m, dist(wells[0], wells[2]));
  m = std::min(m, dist(wells[1], wells[2]));
  return m;
}

WellSystem canonical_wellsystem(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("canonical_wellsystem: scale must be > 0");

  WellSystem ws;
  ws.kind = PotentialKind::Canonical;
  ws.scale = scale;
  ws.wells = {Vec2{1.0, 0.0}, Vec2{-0.5, std::sqrt(3.0) / 2.0}, Vec2{-0.5, -std::sqrt(3.0) / 2.0}};

  const auto wells = ws.wells;
  ws.eval = [wells, scale](Vec2 u) {
    const double p1 = (u - wells[0]).norm2();
    const double p2 = (u - wells[1]).norm2();
    const double p3 = (u - wells[2]).norm2();
    return scale * p1 * p2 * p3;
  };
  ws.grad = [wells, scale](Vec2 u) {
    const Vec2 d1 = u - wells[0], d2 = u - wells[1], d3 = u - wells[2];
    const double p1 = d1.norm2(), p2 = d2.norm2(), p3 = d3.norm2();
    return (d1 * (p2 * p3) + d2 * (p1 * p3) + d3 * (p1 * p2)) * (2.0 * scale);
  };
  ws.hess = [wells, scale](Vec2 u) {
    const Vec2 d1 = u - wells[0], d2 = u - wells[1], d3 = u - wells[2];
    const double p1 = d1.norm2(), p2 = d2.norm2(), p3 = d3.norm2();
    const Vec2 g1 = d1 * 2.0, g2 = d2 * 2.0, g3 = d3 * 2.0;
    Mat2 h{2.0 * (p2 * p3 + p1 * p3 + p1 * p2), 0.0, 2.0 * (p2 * p3 + p1 * p3 + p1 * p2)};
    h += symOuter(g1, g2) * p3;
    h += symOuter(g1, g3) * p2;
    h += symOuter(g2, g3) * p1;
    return h * scale;
  };

  // Hessian at each well is 2*scale*|a_i-a_j|^2|a_i-a_k|^2 * Id = 18*scale*Id
  // for the circumradius-1 equilateral triangle.
  ws.c1 = 18.0 * scale;
  ws.c2 = 18.0 * scale;
  // For |u| > 1 every factor of W_u(u).u is positive; 2 leaves a wide margin.
  ws.M = 2.0;
  return ws;
}

WellSystem custom_wellsystem(const std::array<Vec2, 3>& wells, std::function<double(Vec2)> eval,
                             std::function<Vec2(Vec2)> grad, std::function<Mat2(Vec2)> hess,
                             double M) {
  WellSystem ws;
  ws.kind = PotentialKind::Custom;
  ws.wells = wells;
  ws.eval = std::move(eval);
  ws.grad = std::move(grad);
  ws.hess = std::move(hess);
  ws.M = M;
  double lo = 0.0, hi = 0.0;
  ws.c1 = std::numeric_limits<double>::infinity();
  ws.c2 = 0.0;
  for (const auto& a : wells) {
    ws.hess(a).eigenvalues(lo, hi);
    ws.c1 = std::min(ws.c1, lo);
    ws.c2 = std::max(ws.c2, hi);
  }
  return ws;
}

namespace {

struct FarSample {
  double minDist;
  double w;
  Vec2 u;
};

}  // namespace

WellSystem certify_constants(const WellSystem& ws, const std::vector<double>& deltaGrid,
                             int sampleCount, CertificationReport* report) {
  if (deltaGrid.empty()) throw std::invalid_argument("certify_constants: empty delta grid");
  for (std::size_t k = 1; k < deltaGrid.size(); ++k)
    if (!(deltaGrid[k] > deltaGrid[k - 1]))
      throw std::invalid_argument("certify_constants: delta grid must be strictly increasing");
  const double sep = ws.minWellSeparation();
  if (!(deltaGrid.back() < 0.5 * sep))
    throw std::invalid_argument("certify_constants: max delta must be < half well separation");
  if (sampleCount < 8) throw std::invalid_argument("certify_constants: sampleCount too small");

  CertificationReport rep;
  rep.c1 = ws.c1;
  rep.c2 = ws.c2;
  rep.M = ws.M;

  // Per-delta sphere extremes of 2 W / delta^2 over all three wells.
  const std::size_t nd = deltaGrid.size();
  std::vector<double> sphereMin(nd, std::numeric_limits<double>::infinity());
  std::vector<double> sphereMax(nd, 0.0);
  std::vector<Vec2> sphereArgMin(nd);
  for (std::size_t k = 0; k < nd; ++k) {
    const double d = deltaGrid[k];
    for (int i = 0; i < 3; ++i) {
      for (int s = 0; s < sampleCount; ++s) {
        const double th = kTwoPi * (s + 0.5 * (i + 1) / 3.0) / sampleCount;
        const Vec2 u = ws.wells[static_cast<std::size_t>(i)] + Vec2{d * std::cos(th), d * std::sin(th)};
        const double ratio = 2.0 * ws.eval(u) / (d * d);
        if (ratio < sphereMin[k]) {
          sphereMin[k] = ratio;
          sphereArgMin[k] = u;
        }
        sphereMax[k] = std::max(sphereMax[k], ratio);
      }
    }
  }

  // Far-region samples over the box enclosing the wells and the outer radius.
  const int farN = std::max(128, sampleCount / 2);
  const double box = std::max(ws.M, 1.0) + 1.0;
  std::vector<FarSample> far;
  far.reserve(static_cast<std::size_t>(farN) * farN);
  for (int iy = 0; iy < farN; ++iy) {
    for (int ix = 0; ix < farN; ++ix) {
      const Vec2 u{-box + (2.0 * box) * (ix + 0.5) / farN, -box + (2.0 * box) * (iy + 0.5) / farN};
      double md = dist(u, ws.wells[0]);
      md = std::min(md, dist(u, ws.wells[1]));
      md = std::min(md, dist(u, ws.wells[2]));
      far.push_back({md, ws.eval(u), u});
    }
  }
  // Suffix minimum of W over samples sorted by descending min-distance lets us
  // query min{W : minDist >= delta} in O(log n).
  std::sort(far.begin(), far.end(),
            [](const FarSample& a, const FarSample& b) { return a.minDist > b.minDist; });
  std::vector<double> suffixMinW(far.size());
  std::vector<std::size_t> suffixArg(far.size());
  double run = std::numeric_limits<double>::infinity();
  std::size_t runArg = 0;
  for (std::size_t k = 0; k < far.size(); ++k) {
    if (far[k].w < run) {
      run = far[k].w;
      runArg = k;
    }
    suffixMinW[k] = run;
    suffixArg[k] = runArg;
  }
  auto farMin = [&](double delta, std::size_t& arg) {
    // Largest prefix with minDist >= delta.
    std::size_t lo = 0, hi = far.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (far[mid].minDist >= delta)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo == 0) return std::numeric_limits<double>::infinity();
    arg = suffixArg[lo - 1];
    return suffixMinW[lo - 1];
  };

  // Try the largest candidate delta_W first and shrink on violation.
  for (std::size_t cand = nd; cand-- > 0;) {
    double cw = std::numeric_limits<double>::infinity();
    double Cw = 0.0;
    for (std::size_t k = 0; k <= cand; ++k) {
      cw = std::min(cw, sphereMin[k]);
      Cw = std::max(Cw, sphereMax[k]);
    }
    bool ok = true;
    for (std::size_t k = 0; k <= cand && ok; ++k) {
      const double d = deltaGrid[k];
      std::size_t arg = 0;
      const double wmin = farMin(d, arg);
      if (wmin < 0.5 * cw * d * d) {
        ok = false;
        CertificationViolation v;
        v.delta = d;
        v.sample = far[arg].u;
        v.value = wmin;
        v.bound = 0.5 * cw * d * d;
        v.what = "far-region sample below (1/2) cW delta^2";
        rep.violations.push_back(v);
      }
    }
    if (!ok) continue;

    WellSystem out = ws;
    out.deltaW = deltaGrid[cand];
    out.cW = cw;
    out.CW = Cw;
    out.certified = true;

    // Outer radius check, part of (H1): W_u(u).u > 0 on |u| = M (1 + rho).
    rep.outerRadiusOk = true;
    for (double rho : {0.01, 0.1, 1.0}) {
      const double r = ws.M * (1.0 + rho);
      for (int s = 0; s < sampleCount && rep.outerRadiusOk; ++s) {
        const double th = kTwoPi * s / sampleCount;
        const Vec2 u{r * std::cos(th), r * std::sin(th)};
        if (!(dot(ws.grad(u), u) > 0.0)) rep.outerRadiusOk = false;
      }
    }

    rep.deltaW = out.deltaW;
    rep.cW = out.cW;
    rep.CW = out.CW;
    if (report) *report = rep;
    return out;
  }

  std::ostringstream msg;
  msg << "certify_constants: no delta in the grid passes";
  if (!rep.violations.empty()) {
    const auto& v = rep.violations.back();
    msg << "; first violation at delta=" << v.delta << " u=(" << v.sample.x << "," << v.sample.y
        << ") W=" << v.value << " < " << v.bound;
  }
  if (report) *report = rep;
  throw CertificationFailed(msg.str());
}

}  // namespace trijunction
