#include "trijunction/solve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "trijunction/kernels.hpp"
#include "trijunction/parallel.hpp"

namespace trijunction {

namespace {

double supHessNorm(const WellSystem& ws) {
  // Sampled sup of ||W_uu|| over the range the clipped field can visit.
  double rmax = 0.0;
  for (const auto& a : ws.wells) rmax = std::max(rmax, a.norm());
  const double box = rmax + 0.25;
  double s = 0.0;
  const int n = 32;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const Vec2 u{-box + 2.0 * box * i / n, -box + 2.0 * box * j / n};
      if (u.norm() > box) continue;
      s = std::max(s, ws.hess(u).opNorm());
    }
  return s;
}

double maxResidual(const Field2D& f, const std::vector<Vec2>& g) {
  const double inv = 1.0 / (f.h * f.h);
  return deterministicMax(
      static_cast<std::int64_t>(f.freeList.size()),
      [&](std::int64_t k) {
        const Vec2 gv = g[static_cast<std::size_t>(f.freeList[static_cast<std::size_t>(k)])];
        return std::max(std::abs(gv.x), std::abs(gv.y)) * inv;
      },
      0.0);
}

}  // namespace

SolveResult solve(const SolveConfig& cfg, const BoundaryTrace& trace, const WellSystem& ws,
                  const Field2D* seed) {
  SolveResult res;
  Field2D& f = res.field;
  if (seed) {
    f = *seed;
    if (std::abs(f.R - cfg.R) > 1e-12 || std::abs(f.h - cfg.h) > 1e-15)
      throw std::invalid_argument("solve: seed grid does not match the config");
  } else {
    // Angular extension of the trace.
    f = make_disk_field(cfg.R, cfg.h);
    fill_field(f, [&trace](Vec2 z) { return trace.eval(std::atan2(z.y, z.x)); });
  }
  // Freeze the Dirichlet band to the trace.
  for (std::int64_t idx : f.activeList) {
    if (!f.dirichlet[static_cast<std::size_t>(idx)]) continue;
    const Vec2 p = f.pos(idx);
    f.values[static_cast<std::size_t>(idx)] = trace.eval(std::atan2(p.y, p.x));
  }

  const double h2 = cfg.h * cfg.h;
  const double sBase = 1.0 / (4.0 + h2 * supHessNorm(ws));
  double step = sBase;

  std::vector<Vec2> g, gNew;
  auto sums = kernels::par::gradientAndEnergy(f, ws, g);
  double E = sums.dirichlet + sums.potential;
  double res0 = maxResidual(f, g);

  std::vector<Vec2> trialValues(f.values.size());
  const auto& freeList = f.freeList;
  const std::int64_t nFree = static_cast<std::int64_t>(freeList.size());

  int it = 0;
  res.log.push_back({0, E, res0, step});
  for (it = 0; it < cfg.maxIter; ++it) {
    if (res0 <= cfg.tolGradient) {
      res.converged = true;
      res.stopReason = "gradient";
      break;
    }
    // Trial move on the free nodes.
    trialValues = f.values;
    parallelFor(nFree, [&](std::int64_t k) {
      const std::size_t idx = static_cast<std::size_t>(freeList[static_cast<std::size_t>(k)]);
      trialValues[idx] = f.values[idx] - g[idx] * step;
    });
    std::swap(f.values, trialValues);
    const auto s2 = kernels::par::gradientAndEnergy(f, ws, gNew);
    const double ENew = s2.dirichlet + s2.potential;
    if (ENew > E) {
      std::swap(f.values, trialValues);  // revert
      step *= 0.5;
      if (step < 1e-12 * sBase) {
        res.stopReason = "step-collapse";
        break;
      }
      continue;
    }
    // Accepted: BB2 step from the accepted move.
    if (cfg.stepRule == SolveConfig::StepRule::Adaptive) {
      double sy = 0.0, yy = 0.0;
      deterministicSum2(
          nFree,
          [&](std::int64_t k, double& a0, double& a1) {
            const std::size_t idx =
                static_cast<std::size_t>(freeList[static_cast<std::size_t>(k)]);
            const Vec2 sk = f.values[idx] - trialValues[idx];
            const Vec2 yk = gNew[idx] - g[idx];
            a0 += dot(sk, yk);
            a1 += dot(yk, yk);
          },
          sy, yy);
      if (sy > 0.0 && yy > 0.0) step = std::clamp(sy / yy, 0.05 * sBase, 200.0 * sBase);
    }
    const double dE = E - ENew;
    E = ENew;
    std::swap(g, gNew);
    res0 = maxResidual(f, g);
    if ((it + 1) % cfg.logEvery == 0) res.log.push_back({it + 1, E, res0, step});
    if (cfg.tolEnergyRate > 0.0 && dE < cfg.tolEnergyRate && it > 10) {
      res.converged = true;
      res.stopReason = "energy-rate";
      break;
    }
  }
  if (res.stopReason.empty()) res.stopReason = "iteration-cap";

  res.iterations = it;
  res.finalResidual = res0;
  res.finalEnergy = E;
  res.log.push_back({it, E, res0, step});

  // Amplitude diagnostic (never silently applied): coercivity keeps
  // minimizers inside |u| <= M + 1.
  const double bound = ws.M + 1.0;
  for (std::int64_t idx : f.activeList) {
    if (f.values[static_cast<std::size_t>(idx)].norm() > bound) {
      res.converged = false;
      res.stopReason = "amplitude-bound-violated";
      break;
    }
  }
  return res;
}

ProbeReport local_minimality_probe(const Field2D& f, const WellSystem& ws, int trials,
                                   double radius, std::uint64_t rngSeed) {
  ProbeReport rep;
  rep.trials = trials;
  rep.minMargin = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(rngSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Field2D work = f;
  const double maxCenter = f.R - radius - 3.0 * f.h;
  for (int t = 0; t < trials; ++t) {
    Vec2 c;
    do {
      c = Vec2{(2.0 * unit(rng) - 1.0) * maxCenter, (2.0 * unit(rng) - 1.0) * maxCenter};
    } while (c.norm() > maxCenter);
    const double amp = 0.02 + 0.18 * unit(rng);
    const double ang = kTwoPi * unit(rng);
    const Vec2 dir{std::cos(ang), std::sin(ang)};

    // Energy difference over the affected terms only; every term touching a
    // perturbed node has its site within radius + h of the center.
    const double reach = radius + f.h;
    RegionPred region = [c, reach](Vec2 z) { return dist(z, c) <= reach; };
    const double before = energy(work, ws, &region).total;
    std::vector<std::pair<std::int64_t, Vec2>> touched;
    for (std::int64_t idx : f.activeList) {
      const Vec2 p = f.pos(idx);
      const double r = dist(p, c);
      if (r >= radius) continue;
      if (f.dirichlet[static_cast<std::size_t>(idx)]) continue;
      const double s = r / radius;
      const double bump = std::exp(1.0 - 1.0 / (1.0 - s * s));
      touched.push_back({idx, work.values[static_cast<std::size_t>(idx)]});
      work.values[static_cast<std::size_t>(idx)] += dir * (amp * bump);
    }
    const double after = energy(work, ws, &region).total;
    for (const auto& [idx, v] : touched) work.values[static_cast<std::size_t>(idx)] = v;
    rep.minMargin = std::min(rep.minMargin, after - before);
  }
  rep.pass = rep.minMargin >= -1e-8;

  // Descent-direction probe: strictly negative unless f is critical.
  std::vector<Vec2> g;
  kernels::par::gradient(work, ws, g);
  double gmax = 0.0;
  for (std::int64_t idx : f.freeList)
    gmax = std::max(gmax,
                    std::max(std::abs(g[static_cast<std::size_t>(idx)].x),
                             std::abs(g[static_cast<std::size_t>(idx)].y)));
  if (gmax > 0.0) {
    const double eps = 0.05 * f.h * f.h / gmax;
    const double beforeAll = energy(work, ws).total;
    for (std::int64_t idx : f.freeList)
      work.values[static_cast<std::size_t>(idx)] -= g[static_cast<std::size_t>(idx)] * eps;
    rep.gradientDirectionMargin = energy(work, ws).total - beforeAll;
  }
  return rep;
}

MaxPrincipleReport maximum_principle_check(const Field2D& f, const WellSystem& ws,
                                           const RegionPred& subdomain, int wellIndex) {
  MaxPrincipleReport rep;
  const Vec2 a = ws.well(wellIndex);
  std::vector<std::uint8_t> inSub(f.values.size(), 0);
  for (std::int64_t idx : f.activeList)
    if (subdomain(f.pos(idx))) inSub[static_cast<std::size_t>(idx)] = 1;

  double lip = 0.0;
  for (std::int64_t idx : f.activeList) {
    const std::size_t i = static_cast<std::size_t>(idx);
    if (f.wx[i] > 0.0) lip = std::max(lip, (f.values[i + 1] - f.values[i]).norm() / f.h);
    if (f.wy[i] > 0.0)
      lip = std::max(lip,
                     (f.values[i + static_cast<std::size_t>(f.nSide)] - f.values[i]).norm() / f.h);
  }
  rep.lipschitz = lip;

  for (std::int64_t idx : f.activeList) {
    const std::size_t k = static_cast<std::size_t>(idx);
    if (!inSub[k]) continue;
    ++rep.nodes;
    const int i = static_cast<int>(idx % f.nSide), j = static_cast<int>(idx / f.nSide);
    const double d = (f.values[k] - a).norm();
    const bool maskEdge = !f.isActive(i + 1, j) || !f.isActive(i - 1, j) ||
                          !f.isActive(i, j + 1) || !f.isActive(i, j - 1);
    auto outside = [&](int ii, int jj) {
      return f.isActive(ii, jj) && !inSub[static_cast<std::size_t>(f.index(ii, jj))];
    };
    const bool bd = maskEdge || outside(i + 1, j) || outside(i - 1, j) || outside(i, j + 1) ||
                    outside(i, j - 1);
    if (bd)
      rep.rBoundary = std::max(rep.rBoundary, d);
    else
      rep.rInterior = std::max(rep.rInterior, d);
  }
  if (rep.nodes == 0)
    throw std::invalid_argument("maximum_principle_check: empty subdomain");
  rep.pass = rep.rInterior <= rep.rBoundary + 2.0 * f.h * lip;
  return rep;
}

}  // namespace trijunction
