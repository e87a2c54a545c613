#include "trijunction/connection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "trijunction/errors.hpp"

namespace trijunction {

namespace {

// 4-point Gauss–Legendre on [0, 1].
constexpr double kGaussT[4] = {0.06943184420297371, 0.33000947820757187, 0.6699905217924281,
                               0.9305681557970263};
constexpr double kGaussW[4] = {0.17392742256872693, 0.3260725774312731, 0.3260725774312731,
                               0.17392742256872693};

template <class Pot>
double actionImpl(const Pot& pot, std::span<const Vec2> u, double ds) {
  double kin = 0.0, pen = 0.0;
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const Vec2 d = u[k + 1] - u[k];
    kin += 0.5 * d.norm2() / ds;
    double wq = 0.0;
    for (int q = 0; q < 4; ++q) {
      const Vec2 p = u[k] + d * kGaussT[q];
      wq += kGaussW[q] * pot.eval(p);
    }
    pen += ds * wq;
  }
  return kin + pen;
}

template <class Pot>
void actionGradient(const Pot& pot, std::span<const Vec2> u, double ds, std::span<Vec2> g) {
  for (auto& v : g) v = Vec2{};
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const Vec2 d = u[k + 1] - u[k];
    g[k] -= d / ds;
    g[k + 1] += d / ds;
    for (int q = 0; q < 4; ++q) {
      const Vec2 wu = pot.grad(u[k] + d * kGaussT[q]) * (kGaussW[q] * ds);
      g[k] += wu * (1.0 - kGaussT[q]);
      g[k + 1] += wu * kGaussT[q];
    }
  }
  g[0] = Vec2{};            // clamped endpoints
  g[u.size() - 1] = Vec2{};
}

template <class Fn>
double runAction(const WellSystem& ws, Fn&& fn) {
  if (ws.kind == PotentialKind::Canonical) {
    return fn(CanonicalPotential(ws));
  }
  return fn(GenericPotential(ws));
}

void fitDecay(const WellSystem& ws, Profile1D& p) {
  const Vec2 aj = ws.well(p.wellTo);
  std::vector<double> es, ls;
  for (std::size_t k = 0; k < p.samples.size(); ++k) {
    const double eta = p.eta(k);
    if (eta <= 0.5) continue;
    const double amp = dist(p.samples[k], aj);
    if (amp < 1e-9 || amp > 0.2) continue;
    es.push_back(eta);
    ls.push_back(std::log(amp));
  }
  if (es.size() < 8) {
    p.decayK = p.decayk = 0.0;
    p.decayFitResidual = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(es.size());
  for (std::size_t k = 0; k < es.size(); ++k) {
    sx += es[k];
    sy += ls[k];
    sxx += es[k] * es[k];
    sxy += es[k] * ls[k];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  p.decayk = -slope;
  p.decayK = std::exp(icpt);
  double ss = 0.0;
  for (std::size_t k = 0; k < es.size(); ++k) {
    const double r = ls[k] - (icpt + slope * es[k]);
    ss += r * r;
  }
  p.decayFitResidual = std::sqrt(ss / n);
}

}  // namespace

Vec2 Profile1D::valueAt(double e) const {
  if (samples.empty()) return Vec2{};
  const double t = (e + L) / dEta;
  if (t <= 0.0) return samples.front();
  const double tmax = static_cast<double>(samples.size() - 1);
  if (t >= tmax) return samples.back();
  const std::size_t k = static_cast<std::size_t>(t);
  const double f = t - static_cast<double>(k);
  return samples[k] * (1.0 - f) + samples[k + 1] * f;
}

Profile1D Profile1D::reversed() const {
  Profile1D r = *this;
  std::swap(r.wellFrom, r.wellTo);
  std::reverse(r.samples.begin(), r.samples.end());
  return r;
}

double path_action(const WellSystem& ws, std::span<const Vec2> samples, double ds) {
  if (samples.size() < 2) return 0.0;
  return runAction(ws, [&](const auto& pot) { return actionImpl(pot, samples, ds); });
}

Profile1D minimize_connection(const WellSystem& ws, int i, int j, const ConnectionOptions& opts) {
  if (i == j || i < 1 || i > 3 || j < 1 || j > 3)
    throw std::invalid_argument("minimize_connection: need distinct well indices in 1..3");
  if (opts.n < 200) throw std::invalid_argument("minimize_connection: n must be >= 200");
  const double width = 1.0 / std::sqrt(ws.c1);
  if (opts.L < 10.0 * width)
    throw std::invalid_argument("minimize_connection: L below 10 interface widths");

  const Vec2 ai = ws.well(i), aj = ws.well(j);
  const std::size_t nn = static_cast<std::size_t>(opts.n) + 1;
  const double ds = 2.0 * opts.L / opts.n;

  std::vector<Vec2> u(nn), g(nn), uPrev, gPrev(nn);
  for (std::size_t k = 0; k < nn; ++k) {
    const double t = static_cast<double>(k) / opts.n;
    u[k] = ai * (1.0 - t) + aj * t;
  }

  double step = 0.0, res = 0.0;
  int it = 0;
  runAction(ws, [&](const auto& pot) {
    double S = actionImpl(pot, u, ds);
    actionGradient(pot, u, ds, g);
    step = 0.5 * ds / (1.0 + ws.c2);  // conservative first step
    uPrev = u;
    for (it = 0; it < opts.maxIter; ++it) {
      res = 0.0;
      for (const auto& gv : g) res = std::max(res, std::max(std::abs(gv.x), std::abs(gv.y)));
      if (res < opts.tolGradient) break;

      std::vector<Vec2> uNew(nn);
      for (std::size_t k = 0; k < nn; ++k) uNew[k] = u[k] - g[k] * step;
      const double SNew = actionImpl(pot, uNew, ds);
      if (SNew > S + 1e-14 * (1.0 + std::abs(S))) {
        step *= 0.5;
        if (step < 1e-18) break;
        continue;
      }
      uPrev = u;
      gPrev = g;
      u = std::move(uNew);
      S = SNew;
      actionGradient(pot, u, ds, g);
      // BB2 step from the last accepted move.
      double sy = 0.0, yy = 0.0;
      for (std::size_t k = 0; k < nn; ++k) {
        const Vec2 sk = u[k] - uPrev[k];
        const Vec2 yk = g[k] - gPrev[k];
        sy += dot(sk, yk);
        yy += dot(yk, yk);
      }
      if (sy > 0.0 && yy > 0.0) step = std::clamp(sy / yy, 1e-6 * ds, 1e4 * ds);
    }
    return S;
  });

  if (res >= opts.tolGradient) {
    std::ostringstream msg;
    msg << "minimize_connection(" << i << "," << j << "): stagnated after " << it
        << " iterations, max gradient " << res << " > " << opts.tolGradient;
    throw NonConverged(msg.str());
  }

  // Center: the eta with |U - a_i| = |U - a_j| moves to 0.
  double eta0 = 0.0;
  for (std::size_t k = 0; k + 1 < nn; ++k) {
    const double s0 = dist(u[k], ai) - dist(u[k], aj);
    const double s1 = dist(u[k + 1], ai) - dist(u[k + 1], aj);
    if (s0 <= 0.0 && s1 > 0.0) {
      const double f = (0.0 - s0) / (s1 - s0);
      eta0 = -opts.L + ds * (static_cast<double>(k) + f);
      break;
    }
  }

  Profile1D p;
  p.wellFrom = i;
  p.wellTo = j;
  p.L = opts.L;
  p.dEta = ds;
  p.samples.resize(nn);
  {
    // Shift by linear interpolation; the vacated end keeps the exact well.
    Profile1D raw;
    raw.L = opts.L;
    raw.dEta = ds;
    raw.samples = u;
    for (std::size_t k = 0; k < nn; ++k) {
      const double e = -opts.L + ds * static_cast<double>(k) + eta0;
      p.samples[k] = (e <= -opts.L) ? ai : (e >= opts.L ? aj : raw.valueAt(e));
    }
    p.samples.front() = ai;
    p.samples.back() = aj;
  }
  p.sigma = path_action(ws, p.samples, ds);
  p.equipartitionDefect = equipartition_defect(ws, p);
  fitDecay(ws, p);
  return p;
}

double j_energy(const WellSystem& ws, std::span<const Vec2> path, double ds, int i, int j) {
  if (path.size() < 2) throw InvalidPath("j_energy: need at least two samples");
  if (!ws.certified) throw InvalidPath("j_energy: wellsystem must be certified (needs deltaW)");
  const double dFrom = dist(path.front(), ws.well(i));
  const double dTo = dist(path.back(), ws.well(j));
  if (std::abs(dFrom - dTo) > 1e-6)
    throw InvalidPath("j_energy: endpoint distances to the wells differ");
  if (!(dFrom < ws.deltaW)) throw InvalidPath("j_energy: endpoint delta not below deltaW");
  return path_action(ws, path, ds);
}

double equipartition_defect(const WellSystem& ws, const Profile1D& p, double interiorFraction) {
  double defect = 0.0;
  for (std::size_t k = 0; k + 1 < p.samples.size(); ++k) {
    const double etaMid = p.eta(k) + 0.5 * p.dEta;
    if (std::abs(etaMid) > interiorFraction * p.L) continue;
    const Vec2 d = p.samples[k + 1] - p.samples[k];
    const double kin = 0.5 * d.norm2() / (p.dEta * p.dEta);
    const double w = ws.eval((p.samples[k] + p.samples[k + 1]) * 0.5);
    defect = std::max(defect, std::abs(kin - w));
  }
  return defect;
}

namespace {

double polylineCost(const WellSystem& ws, const std::vector<Vec2>& pts) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double r0 = std::sqrt(2.0 * ws.eval(pts[k]));
    const double r1 = std::sqrt(2.0 * ws.eval(pts[k + 1]));
    total += dist(pts[k], pts[k + 1]) * 0.5 * (r0 + r1);
  }
  return total;
}

std::vector<Vec2> resampleByArclength(const std::vector<Vec2>& pts, int n) {
  std::vector<double> s(pts.size(), 0.0);
  for (std::size_t k = 1; k < pts.size(); ++k) s[k] = s[k - 1] + dist(pts[k], pts[k - 1]);
  std::vector<Vec2> out(static_cast<std::size_t>(n));
  std::size_t seg = 0;
  for (int m = 0; m < n; ++m) {
    const double target = s.back() * m / (n - 1);
    while (seg + 2 < pts.size() && s[seg + 1] < target) ++seg;
    const double len = s[seg + 1] - s[seg];
    const double f = len > 0 ? (target - s[seg]) / len : 0.0;
    out[static_cast<std::size_t>(m)] = pts[seg] * (1.0 - f) + pts[seg + 1] * f;
  }
  return out;
}

}  // namespace

double agmon_sigma(const WellSystem& ws, int i, int j, const AgmonOptions& opts) {
  if (i == j) throw std::invalid_argument("agmon_sigma: need distinct wells");
  const int N = opts.gridN;
  const double b = opts.box;
  const double hg = 2.0 * b / (N - 1);
  auto nodeOf = [&](int ix, int iy) { return iy * N + ix; };
  auto posOf = [&](int idx) {
    return Vec2{-b + hg * (idx % N), -b + hg * (idx / N)};
  };
  std::vector<double> rho(static_cast<std::size_t>(N) * N);
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix)
      rho[static_cast<std::size_t>(nodeOf(ix, iy))] =
          std::sqrt(2.0 * ws.eval(Vec2{-b + hg * ix, -b + hg * iy}));

  auto nearestNode = [&](Vec2 p) {
    const int ix = std::clamp(static_cast<int>(std::lround((p.x + b) / hg)), 0, N - 1);
    const int iy = std::clamp(static_cast<int>(std::lround((p.y + b) / hg)), 0, N - 1);
    return nodeOf(ix, iy);
  };
  const int src = nearestNode(ws.well(i));
  const int dst = nearestNode(ws.well(j));

  // 16-neighborhood (axis, diagonal, knight moves) keeps the metric error low.
  const int dx[16] = {1, -1, 0, 0, 1, 1, -1, -1, 2, 2, -2, -2, 1, 1, -1, -1};
  const int dy[16] = {0, 0, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 2, -2, 2, -2};

  std::vector<double> distTo(static_cast<std::size_t>(N) * N,
                             std::numeric_limits<double>::infinity());
  std::vector<int> prev(static_cast<std::size_t>(N) * N, -1);
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<>> q;
  distTo[static_cast<std::size_t>(src)] = 0.0;
  q.push({0.0, src});
  while (!q.empty()) {
    auto [d0, v] = q.top();
    q.pop();
    if (d0 > distTo[static_cast<std::size_t>(v)]) continue;
    if (v == dst) break;
    const int ix = v % N, iy = v / N;
    const Vec2 pv = posOf(v);
    for (int e = 0; e < 16; ++e) {
      const int jx = ix + dx[e], jy = iy + dy[e];
      if (jx < 0 || jx >= N || jy < 0 || jy >= N) continue;
      const int w = nodeOf(jx, jy);
      const Vec2 pw = posOf(w);
      const double rm = std::sqrt(2.0 * ws.eval((pv + pw) * 0.5));
      const double cost = dist(pv, pw) *
                          (rho[static_cast<std::size_t>(v)] + 4.0 * rm +
                           rho[static_cast<std::size_t>(w)]) /
                          6.0;
      if (distTo[static_cast<std::size_t>(v)] + cost < distTo[static_cast<std::size_t>(w)]) {
        distTo[static_cast<std::size_t>(w)] = distTo[static_cast<std::size_t>(v)] + cost;
        prev[static_cast<std::size_t>(w)] = v;
        q.push({distTo[static_cast<std::size_t>(w)], w});
      }
    }
  }

  std::vector<Vec2> path;
  for (int v = dst; v != -1; v = prev[static_cast<std::size_t>(v)]) path.push_back(posOf(v));
  std::reverse(path.begin(), path.end());
  path.front() = ws.well(i);
  path.back() = ws.well(j);

  // Continuous relaxation of the geodesic length functional on the polyline.
  std::vector<Vec2> pts = resampleByArclength(path, opts.refineN);
  const std::size_t n = pts.size();
  double step = 0.05 * hg;
  double cost = polylineCost(ws, pts);
  std::vector<Vec2> g(n);
  for (int it = 0; it < opts.refineIters; ++it) {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const Vec2 dm = pts[k] - pts[k - 1];
      const Vec2 dp = pts[k + 1] - pts[k];
      const double lm = dm.norm(), lp = dp.norm();
      const double rhom = std::sqrt(2.0 * ws.eval(pts[k - 1]));
      const double rhok = std::sqrt(2.0 * ws.eval(pts[k]));
      const double rhop = std::sqrt(2.0 * ws.eval(pts[k + 1]));
      Vec2 gk{};
      if (lm > 0) gk += dm * (0.5 * (rhom + rhok) / lm);
      if (lp > 0) gk -= dp * (0.5 * (rhok + rhop) / lp);
      if (rhok > 1e-14) gk += ws.grad(pts[k]) * ((lm + lp) * 0.5 / (2.0 * rhok));
      g[k] = gk;
    }
    std::vector<Vec2> cand(n);
    cand[0] = pts[0];
    cand[n - 1] = pts[n - 1];
    for (std::size_t k = 1; k + 1 < n; ++k) cand[k] = pts[k] - g[k] * step;
    const double cNew = polylineCost(ws, cand);
    if (cNew <= cost) {
      pts = std::move(cand);
      cost = cNew;
      step *= 1.1;
    } else {
      step *= 0.5;
      if (step < 1e-14) break;
    }
    if (it % 200 == 199) {
      pts = resampleByArclength(pts, opts.refineN);
      cost = polylineCost(ws, pts);
    }
  }
  pts = resampleByArclength(pts, opts.refineN);
  return polylineCost(ws, pts);
}

}  // namespace trijunction
