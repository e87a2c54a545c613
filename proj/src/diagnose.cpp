#include "trijunction/diagnose.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trijunction/errors.hpp"

namespace trijunction {

namespace {

double segmentDistance(const Vec2& z, const Vec2& p, const Vec2& q) {
  const Vec2 e = q - p;
  const double l2 = e.norm2();
  if (l2 == 0.0) return dist(z, p);
  const double t = std::clamp(dot(z - p, e) / l2, 0.0, 1.0);
  return dist(z, p + e * t);
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, residual = 0.0;
  std::int64_t n = 0;
};

LineFit fitLine(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  f.n = static_cast<std::int64_t>(x.size());
  if (f.n < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double n = static_cast<double>(f.n);
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-30) return f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (f.intercept + f.slope * x[k]);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

// Extend the ray D->X to the circle |z| = rOut (centered at the origin).
Vec2 extendRay(const Vec2& D, const Vec2& X, double rOut) {
  const Vec2 e = (X - D) / dist(X, D);
  const double b = dot(D, e);
  const double t = -b + std::sqrt(std::max(0.0, b * b + rOut * rOut - D.norm2()));
  return D + e * t;
}

double minWellDist(const Vec2& u, const std::array<Vec2, 3>& wells) {
  double md = dist(u, wells[0]);
  md = std::min(md, dist(u, wells[1]));
  return std::min(md, dist(u, wells[2]));
}

}  // namespace

double triod_distance(const Vec2& z, const Triod& t) {
  return std::min({segmentDistance(z, t.D, t.A), segmentDistance(z, t.D, t.B),
                   segmentDistance(z, t.D, t.C)});
}

PhaseDecomposition phase_decomposition(const Field2D& f, const WellSystem& ws, double r,
                                       double delta) {
  const auto& wells = ws.wells;
  if (!(delta < 0.5 * ws.minWellSeparation()))
    throw std::invalid_argument("phase_decomposition: delta must be below half well separation");
  if (r > f.R) throw std::invalid_argument("phase_decomposition: r exceeds the disk");
  if (r < 4.0 * f.h) throw std::invalid_argument("phase_decomposition: r too small");

  const int n = std::max(720, static_cast<int>(std::ceil(kTwoPi * r / (0.5 * f.h))));
  const double dth = kTwoPi / n;
  std::vector<Vec2> u(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    u[static_cast<std::size_t>(k)] = f.interp(Vec2{r * std::cos(dth * k), r * std::sin(dth * k)});

  PhaseDecomposition pd;
  pd.delta = delta;
  pd.r = r;

  std::array<std::vector<char>, 3> member;
  std::array<int, 3> argmin{};
  for (int i = 0; i < 3; ++i) {
    auto& mem = member[static_cast<std::size_t>(i)];
    mem.assign(static_cast<std::size_t>(n), 0);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      const double d = dist(u[static_cast<std::size_t>(k)], wells[static_cast<std::size_t>(i)]);
      if (d <= delta) mem[static_cast<std::size_t>(k)] = 1;
      if (d < best) {
        best = d;
        argmin[static_cast<std::size_t>(i)] = k;
      }
    }
    if (std::find(mem.begin(), mem.end(), 1) == mem.end()) {
      std::ostringstream msg;
      msg << "phase_decomposition: Y_" << (i + 1) << " empty at r=" << r << ", delta=" << delta;
      throw DecompositionFailed(msg.str());
    }
    // Y_i as maximal circular runs.
    for (int k = 0; k < n; ++k) {
      if (!mem[static_cast<std::size_t>(k)]) continue;
      if (mem[static_cast<std::size_t>((k + n - 1) % n)] && k != 0) continue;
      if (k == 0 && mem[static_cast<std::size_t>(n - 1)]) {
        // Run wrapping through zero: find its true start.
        int lo = n - 1;
        while (lo > 0 && mem[static_cast<std::size_t>(lo - 1)]) --lo;
        int len = 0;
        while (len < n && mem[static_cast<std::size_t>((lo + len) % n)]) ++len;
        pd.Yi[static_cast<std::size_t>(i)].push_back({wrapAngle(dth * lo), dth * len});
        if (len >= n) break;
        continue;
      }
      int len = 0;
      while (len < n && mem[static_cast<std::size_t>((k + len) % n)]) ++len;
      pd.Yi[static_cast<std::size_t>(i)].push_back({wrapAngle(dth * k), dth * len});
    }
  }

  // I_i: the maximal run containing the per-phase trace-distance minimizer.
  std::array<int, 3> arcStart{}, arcLen{};
  for (int i = 0; i < 3; ++i) {
    const auto& mem = member[static_cast<std::size_t>(i)];
    int lo = argmin[static_cast<std::size_t>(i)];
    int guard = 0;
    while (mem[static_cast<std::size_t>((lo + n - 1) % n)] && guard++ < n) lo = (lo + n - 1) % n;
    int len = 1;
    while (len < n && mem[static_cast<std::size_t>((lo + len) % n)]) ++len;
    arcStart[static_cast<std::size_t>(i)] = lo;
    arcLen[static_cast<std::size_t>(i)] = len;
    pd.phaseArcs[static_cast<std::size_t>(i)] = {wrapAngle(dth * lo), dth * len};
  }

  double fitted = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < arcLen[static_cast<std::size_t>(i)]; ++k) {
      const int idx = (arcStart[static_cast<std::size_t>(i)] + k) % n;
      fitted = std::max(
          fitted, dist(u[static_cast<std::size_t>(idx)], wells[static_cast<std::size_t>(i)]) / delta);
    }
  pd.fittedC = fitted;

  // Order the phase arcs ccw; the gaps between consecutive arcs separate them.
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return arcStart[static_cast<std::size_t>(a)] < arcStart[static_cast<std::size_t>(b)];
  });
  for (int s = 0; s < 3; ++s) {
    const int iPhase = order[static_cast<std::size_t>(s)];
    const int jPhase = order[static_cast<std::size_t>((s + 1) % 3)];
    const int endI = (arcStart[static_cast<std::size_t>(iPhase)] +
                      arcLen[static_cast<std::size_t>(iPhase)]) %
                     n;
    const int gap = (arcStart[static_cast<std::size_t>(jPhase)] - endI + n) % n;
    PhaseDecomposition::TransitionArc ta;
    ta.arc = {wrapAngle(dth * endI), dth * gap};
    ta.phaseBefore = iPhase + 1;
    ta.phaseAfter = jPhase + 1;
    pd.transitions[static_cast<std::size_t>(s)] = ta;
  }
  pd.d1 = std::numeric_limits<double>::infinity();
  pd.d2 = 0.0;
  for (const auto& t : pd.transitions) {
    const double len = t.arc.length * r;
    pd.d1 = std::min(pd.d1, len);
    pd.d2 = std::max(pd.d2, len);
  }

  // Midpoints: A for the 1-2 transition, B for 1-3, C for 2-3 (Section 5).
  for (const auto& t : pd.transitions) {
    const double mid = wrapAngle(t.arc.start + 0.5 * t.arc.length);
    const Vec2 p{r * std::cos(mid), r * std::sin(mid)};
    const int lo = std::min(t.phaseBefore, t.phaseAfter);
    const int hi = std::max(t.phaseBefore, t.phaseAfter);
    if (lo == 1 && hi == 2)
      pd.A = p;
    else if (lo == 1 && hi == 3)
      pd.B = p;
    else
      pd.C = p;
  }
  return pd;
}

DiffuseInterfaceReport diffuse_interface(const Field2D& f, const WellSystem& ws, double gamma,
                                         const Triod* triod) {
  if (!(gamma < 0.5 * ws.minWellSeparation()))
    throw std::invalid_argument("diffuse_interface: gamma must be below half well separation");

  DiffuseInterfaceReport rep;
  rep.gamma = gamma;
  for (std::int64_t idx : f.activeList) {
    if (minWellDist(f.values[static_cast<std::size_t>(idx)], ws.wells) >= gamma)
      rep.points.push_back(f.pos(idx));
  }
  rep.empty = rep.points.empty();
  if (triod && !rep.empty) {
    double loc = 0.0;
    for (const Vec2& z : rep.points) loc = std::max(loc, triod_distance(z, *triod));
    rep.localizationRadius = loc;
  }

  if (triod) {
    for (int reg = 1; reg <= 3; ++reg) {
      std::vector<double> xs, ys;
      const Vec2 a = ws.well(reg);
      const Vec2 s1 = (reg == 3) ? triod->B : triod->A;
      const Vec2 s2 = (reg == 1) ? triod->B : triod->C;
      for (std::int64_t idx : f.activeList) {
        const Vec2 z = f.pos(idx);
        if (triod->classify(z) != reg) continue;
        const double amp = dist(f.values[static_cast<std::size_t>(idx)], a);
        if (amp < 1e-10 || amp > gamma) continue;
        const double dTriod =
            std::min(segmentDistance(z, triod->D, s1), segmentDistance(z, triod->D, s2));
        xs.push_back(std::min(dTriod, f.R - z.norm()));
        ys.push_back(std::log(amp));
      }
      const LineFit fit = fitLine(xs, ys);
      DecayFit& df = rep.regionDecay[static_cast<std::size_t>(reg - 1)];
      df.k = -fit.slope;
      df.K = std::exp(fit.intercept);
      df.residual = fit.residual;
      df.count = fit.n;
    }
  }
  return rep;
}

SliceProfile slice_profile(const Field2D& f, const WellSystem& ws, const Triod& triod,
                           const SliceOptions& opts) {
  SliceProfile sp;
  const double R = f.R;
  sp.amplitudeThreshold =
      opts.amplitudeThreshold > 0.0 ? opts.amplitudeThreshold : std::pow(R, -1.0 / 6.0);
  sp.slack = opts.slack > 0.0 ? opts.slack : std::pow(R, 2.0 / 3.0);
  const double step = opts.sampleStep > 0.0 ? opts.sampleStep : 0.5 * f.h;

  // Rotate so D->A points along +y; sampling pulls back to original coords.
  const double phi0 = triod.theta - 0.5 * kPi;
  sp.frameRotation = phi0;
  sp.Dframe = rotate(triod.D, -phi0);
  sp.Aprime = rotate(extendRay(triod.D, triod.A, R + f.h), -phi0);
  sp.Bprime = rotate(extendRay(triod.D, triod.B, R + f.h), -phi0);
  sp.Cprime = rotate(extendRay(triod.D, triod.C, R + f.h), -phi0);

  sp.yMin = std::isnan(opts.yMin) ? (sp.Cprime.y + opts.d2) : opts.yMin;

  for (double y = -R + 2.0 * f.h; y <= R - 2.0 * f.h + 1e-12; y += f.h) {
    sp.yGrid.push_back(y);
    const double half = std::sqrt(std::max(0.0, R * R - y * y));
    std::array<double, 3> lam{0.0, 0.0, 0.0};
    double chord = 0.0;
    for (double x = -half; x <= half; x += step) {
      const Vec2 z = rotate(Vec2{x, y}, phi0);
      if (z.norm() > R) continue;
      const Vec2 u = f.interp(z);
      chord += step;
      for (int i = 0; i < 3; ++i)
        if (dist(u, ws.wells[static_cast<std::size_t>(i)]) <= sp.amplitudeThreshold)
          lam[static_cast<std::size_t>(i)] += step;
    }
    sp.chordLength.push_back(chord);
    for (int i = 0; i < 3; ++i)
      sp.lambda[static_cast<std::size_t>(i)].push_back(lam[static_cast<std::size_t>(i)]);
  }

  sp.found = false;
  for (std::size_t k = 0; k < sp.yGrid.size(); ++k) {
    if (sp.yGrid[k] < sp.yMin) continue;
    if (sp.lambda[0][k] + sp.lambda[1][k] >= sp.chordLength[k] - sp.slack) {
      sp.ystar = sp.yGrid[k];
      sp.found = true;
      break;
    }
  }
  return sp;
}

double lower_bound_value(const SliceProfile& sp, const Vec2& Ap, const Vec2& Bp, const Vec2& Cp,
                         double sigma) {
  return sigma * appendix_f(sp.ystar, Ap.y, Bp.y, Cp.y, Bp.x, Cp.x);
}

double lower_bound_value(const SliceProfile& sp, double sigma) {
  return lower_bound_value(sp, sp.Aprime, sp.Bprime, sp.Cprime, sigma);
}

Field2D rescale_disk(const Field2D& f, int targetN, double r) {
  if (targetN < 64) throw std::invalid_argument("rescale_disk: targetN must be >= 64");
  if (r > f.R * (1.0 + 1e-12)) throw std::invalid_argument("rescale_disk: r exceeds the disk");
  Field2D out = make_disk_field(1.0, 2.0 / targetN);
  for (std::int64_t idx : out.activeList)
    out.values[static_cast<std::size_t>(idx)] = f.interp(out.pos(idx) * r);
  return out;
}

BlowdownTrace blowdown(const Field2D& f, const std::vector<double>& ladder, const WellSystem& ws,
                       double delta, double gamma, int rescaleN) {
  BlowdownTrace bt;
  for (double Ri : ladder) {
    BlowdownRecord rec;
    rec.R = Ri;
    const double rEff = std::min(Ri, f.R - 2.0 * f.h);
    try {
      const PhaseDecomposition pd = phase_decomposition(f, ws, rEff, delta);
      const Triod triod = make_triod(pd.A, pd.B, pd.C);
      rec.theta = triod.theta;
      rec.D = triod.D;

      // Rescaled field against the rescaled junction map on B_1.
      const Field2D uR = rescale_disk(f, rescaleN, rEff);
      Triod unitTriod = triod;
      unitTriod.A = triod.A / rEff;
      unitTriod.B = triod.B / rEff;
      unitTriod.C = triod.C / rEff;
      unitTriod.D = triod.D / rEff;
      const JunctionMap um{unitTriod, ws.wells};
      rec.l1Distance = l1_distance(uR, [&um](Vec2 z) { return um(z); });

      RegionPred ball = [rEff](Vec2 z) { return z.norm() <= rEff; };
      rec.energyPerR = energy(f, ws, &ball).total / rEff;

      double loc = 0.0;
      for (std::int64_t idx : f.activeList) {
        const Vec2 z = f.pos(idx);
        if (z.norm() > rEff) continue;
        if (minWellDist(f.values[static_cast<std::size_t>(idx)], ws.wells) >= gamma)
          loc = std::max(loc, triod_distance(z, triod));
      }
      rec.localizationRadius = loc;
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.failReason = e.what();
    }
    bt.records.push_back(rec);
  }

  std::vector<double> lr, lloc, ll1;
  for (const auto& rec : bt.records) {
    if (!rec.ok) continue;
    lr.push_back(std::log(rec.R));
    lloc.push_back(std::log(std::max(rec.localizationRadius, 1e-300)));
    ll1.push_back(std::log(std::max(rec.l1Distance, 1e-300)));
  }
  bt.betaFitLoc = fitLine(lr, lloc).slope;
  bt.betaFitL1 = fitLine(lr, ll1).slope;

  for (std::size_t k = 0; k + 1 < bt.records.size(); ++k) {
    if (!bt.records[k].ok || !bt.records[k + 1].ok) continue;
    double d = std::abs(bt.records[k + 1].theta - bt.records[k].theta);
    if (d > kPi) d = kTwoPi - d;
    bt.dTheta.push_back(d);
  }
  if (bt.dTheta.size() >= 2) {
    std::vector<double> idx, ld;
    for (std::size_t k = 0; k < bt.dTheta.size(); ++k) {
      idx.push_back(static_cast<double>(k));
      ld.push_back(std::log(std::max(bt.dTheta[k], 1e-300)));
    }
    const LineFit fit = fitLine(idx, ld);
    bt.geomRatio = std::exp(fit.slope);
    if (bt.geomRatio < 1.0) bt.tailSum = bt.dTheta.back() * bt.geomRatio / (1.0 - bt.geomRatio);
    bt.cauchy = bt.geomRatio < 1.0;
  }

  for (std::size_t k = bt.records.size(); k-- > 0;) {
    if (!bt.records[k].ok) continue;
    const double rEff = std::min(bt.records[k].R, f.R - 2.0 * f.h);
    const PhaseDecomposition pd = phase_decomposition(f, ws, rEff, delta);
    const Triod t = make_triod(pd.A, pd.B, pd.C);
    auto angleBetween = [&](const Vec2& p, const Vec2& q) {
      const Vec2 e1 = p - t.D, e2 = q - t.D;
      const double c = std::clamp(dot(e1, e2) / (e1.norm() * e2.norm()), -1.0, 1.0);
      return std::acos(c) * 180.0 / kPi;
    };
    bt.finalAnglesAtD = {angleBetween(t.A, t.B), angleBetween(t.A, t.C), angleBetween(t.B, t.C)};
    break;
  }
  return bt;
}

}  // namespace trijunction
