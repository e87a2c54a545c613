#include "trijunction/construct.hpp"

#include <algorithm>
#include <cmath>

#include "trijunction/errors.hpp"

namespace trijunction {

const Profile1D& profile_for(const ProfileSet& ps, int i, int j, bool& flipped) {
  const int lo = std::min(i, j), hi = std::max(i, j);
  flipped = (i > j);
  if (lo == 1 && hi == 2) return ps[0];
  if (lo == 1 && hi == 3) return ps[1];
  return ps[2];
}

namespace {

// Signed angular difference in (-pi, pi].
double angDiff(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d <= -kPi) d += kTwoPi;
  return d;
}

struct Transition {
  double anchorAngle;
  int before, after;  // phases on the two sides, ccw order
};

// Transverse profile of one triod edge: the connection in the core, a linear
// ramp onto the exact wells across [w, 2w], wells beyond.
struct EdgeProfile {
  const Profile1D* prof = nullptr;
  bool flip = false;
  Vec2 aMinus, aPlus;  // wells on the d<0 / d>0 sides
  double w = 0.0;

  Vec2 core(double d) const { return flip ? prof->valueAt(-d) : prof->valueAt(d); }
  Vec2 value(double d) const {
    if (d >= 2.0 * w) return aPlus;
    if (d <= -2.0 * w) return aMinus;
    if (d >= w) {
      const double t = (d - w) / w;
      return core(w) * (1.0 - t) + aPlus * t;
    }
    if (d <= -w) {
      const double t = (-d - w) / w;
      return core(-w) * (1.0 - t) + aMinus * t;
    }
    return core(d);
  }
};

struct Edge {
  Vec2 from, to;  // D -> anchor
  Vec2 dir, nrm;
  double len = 0.0;
  double phi = 0.0;  // ray angle
  EdgeProfile profile;

  double signedDist(const Vec2& z) const {
    const Vec2 rel = z - from;
    const double s = dot(rel, dir);
    const double side = dot(rel, nrm) >= 0.0 ? 1.0 : -1.0;
    if (s < 0.0) return side * rel.norm();
    if (s > len) return side * dist(z, to);
    return dot(rel, nrm);
  }
};

Vec2 projectToTriangle(Vec2 u, const std::array<Vec2, 3>& tri) {
  // Inside test via sign of cross products; project to nearest edge if outside.
  bool inside = true;
  double ref = 0.0;
  for (int k = 0; k < 3 && inside; ++k) {
    const Vec2 e = tri[static_cast<std::size_t>((k + 1) % 3)] - tri[static_cast<std::size_t>(k)];
    const double c = cross(e, u - tri[static_cast<std::size_t>(k)]);
    if (k == 0)
      ref = c;
    else if (c * ref < 0.0)
      inside = false;
  }
  if (inside) return u;
  double best = std::numeric_limits<double>::infinity();
  Vec2 out = u;
  for (int k = 0; k < 3; ++k) {
    const Vec2 p = tri[static_cast<std::size_t>(k)];
    const Vec2 q = tri[static_cast<std::size_t>((k + 1) % 3)];
    const Vec2 e = q - p;
    const double t = std::clamp(dot(u - p, e) / e.norm2(), 0.0, 1.0);
    const Vec2 cand = p + e * t;
    const double d = dist(u, cand);
    if (d < best) {
      best = d;
      out = cand;
    }
  }
  return out;
}

struct TripleCompetitor {
  Triod triod;
  std::array<Vec2, 3> wells;
  std::array<Edge, 3> edges;  // to A, B, C
  // Per region (1..3): indices of the two bounding edges in ccw order and the
  // sector angular span.
  struct Sector {
    int first, second;
    double phiFirst, span;
  };
  std::array<Sector, 3> sectors;
  double w = 0.0;
  double coreRadius = 2.0;
  double R = 0.0;
  double blendStart = 0.0, blendEnd = 0.0;
  const BoundaryTrace* trace = nullptr;

  Vec2 formula(const Vec2& z) const {
    const int reg = triod.classify(z);
    const Sector& sec = sectors[static_cast<std::size_t>(reg - 1)];
    const Vec2 rel = z - triod.D;
    double t = 0.5;
    if (rel.norm() > 1e-14) {
      const double phi = wrapAngle(std::atan2(rel.y, rel.x));
      t = std::clamp(ccwGap(sec.phiFirst, phi) / sec.span, 0.0, 1.0);
    }
    const Edge& e1 = edges[static_cast<std::size_t>(sec.first)];
    const Edge& e2 = edges[static_cast<std::size_t>(sec.second)];
    Vec2 u = e1.profile.value(e1.signedDist(z)) * (1.0 - t) +
             e2.profile.value(e2.signedDist(z)) * t;
    // O(1) radial pull to the well centroid removes the angular-blend
    // singularity at the junction.
    const double rho = rel.norm();
    if (rho < coreRadius) {
      const Vec2 centroid = (wells[0] + wells[1] + wells[2]) / 3.0;
      const double lam = rho / coreRadius;
      u = u * lam + centroid * (1.0 - lam);
    }
    return projectToTriangle(u, wells);
  }

  Vec2 operator()(const Vec2& z) const {
    Vec2 u = formula(z);
    if (trace) {
      const double r = z.norm();
      if (r >= blendEnd) return trace->eval(std::atan2(z.y, z.x));
      if (r > blendStart) {
        const double t = (r - blendStart) / (blendEnd - blendStart);
        return u * (1.0 - t) + trace->eval(std::atan2(z.y, z.x)) * t;
      }
    }
    return u;
  }
};

TripleCompetitor buildTriple(const Triod& triod, double R, const WellSystem& ws,
                             const ProfileSet& profiles, double alpha,
                             const BoundaryTrace* imposeTrace, double bandEnd) {
  TripleCompetitor tc;
  tc.triod = triod;
  tc.wells = ws.wells;
  tc.R = R;
  tc.w = std::pow(R, alpha);
  tc.trace = imposeTrace;
  tc.blendStart = R - tc.w;
  tc.blendEnd = bandEnd > 0.0 ? bandEnd : R;

  const double minLen = std::min({triod.lenDA(), triod.lenDB(), triod.lenDC()});
  if (!(tc.w < 0.5 * minLen))
    throw InvalidGeometry("triple_competitor: rectangle half-width exceeds half a segment");

  const Vec2 anchors[3] = {triod.A, triod.B, triod.C};
  const int pairs[3][2] = {{1, 2}, {1, 3}, {2, 3}};  // edge DA | DB | DC
  for (int e = 0; e < 3; ++e) {
    Edge& ed = tc.edges[static_cast<std::size_t>(e)];
    ed.from = triod.D;
    ed.to = anchors[e];
    const Vec2 d = ed.to - ed.from;
    ed.len = d.norm();
    ed.dir = d / ed.len;
    ed.nrm = Vec2{-ed.dir.y, ed.dir.x};
    ed.phi = wrapAngle(std::atan2(ed.dir.y, ed.dir.x));

    // Orient the transverse profile: probe which region sits on the +normal.
    const Vec2 probe = ed.from + ed.dir * (0.5 * ed.len) + ed.nrm * (1e-6 * ed.len);
    const int regPlus = triod.classify(probe);
    const int i = pairs[e][0], j = pairs[e][1];
    const int plusWell = (regPlus == i) ? i : j;
    const int minusWell = (plusWell == i) ? j : i;
    bool flipped = false;
    const Profile1D& p = profile_for(profiles, minusWell, plusWell, flipped);
    ed.profile.prof = &p;
    ed.profile.flip = flipped;
    ed.profile.aMinus = ws.well(minusWell);
    ed.profile.aPlus = ws.well(plusWell);
    ed.profile.w = tc.w;
  }

  const int regionEdges[3][2] = {{0, 1}, {0, 2}, {1, 2}};  // region r bounded by
  for (int r = 0; r < 3; ++r) {
    const int p = regionEdges[r][0], q = regionEdges[r][1];
    const double phiP = tc.edges[static_cast<std::size_t>(p)].phi;
    const double phiQ = tc.edges[static_cast<std::size_t>(q)].phi;
    // ccw from one ray into the sector interior identifies the ordering.
    const Vec2 probeDir = rotate(Vec2{std::cos(phiP), std::sin(phiP)}, 1e-4);
    const int regProbe = triod.classify(triod.D + probeDir * (0.5 * tc.edges[0].len + 1.0));
    TripleCompetitor::Sector sec{};
    if (regProbe == r + 1) {
      sec.first = p;
      sec.phiFirst = phiP;
      sec.second = q;
      sec.span = ccwGap(phiP, phiQ);
    } else {
      sec.first = q;
      sec.phiFirst = phiQ;
      sec.second = p;
      sec.span = ccwGap(phiQ, phiP);
    }
    tc.sectors[static_cast<std::size_t>(r)] = sec;
  }
  return tc;
}

}  // namespace

BoundaryTrace boundary_data(const Triod& triod, double R, const ProfileSet& profiles,
                            double transitionWidth) {
  if (transitionWidth < 4.0)
    throw InvalidGeometry("boundary_data: transitionWidth must be at least 4");
  for (const Vec2& p : {triod.A, triod.B, triod.C})
    if (std::abs(p.norm() - R) > 1e-9 * R)
      throw InvalidGeometry("boundary_data: triod anchors must lie on the circle of radius R");

  std::array<Transition, 3> trans;
  const Vec2 anchors[3] = {triod.A, triod.B, triod.C};
  for (int k = 0; k < 3; ++k) {
    const double phi = wrapAngle(std::atan2(anchors[k].y, anchors[k].x));
    const double eps = 0.25 * transitionWidth / R;
    const Vec2 before{R * std::cos(phi - eps), R * std::sin(phi - eps)};
    const Vec2 after{R * std::cos(phi + eps), R * std::sin(phi + eps)};
    trans[static_cast<std::size_t>(k)] =
        Transition{phi, triod.classify(before), triod.classify(after)};
  }
  // Transition arcs must not overlap the neighbouring anchors.
  for (int k = 0; k < 3; ++k)
    for (int m = k + 1; m < 3; ++m) {
      const double gap = std::abs(angDiff(trans[static_cast<std::size_t>(k)].anchorAngle,
                                          trans[static_cast<std::size_t>(m)].anchorAngle)) * R;
      if (gap < transitionWidth)
        throw InvalidGeometry("boundary_data: transition arcs overlap (anchors too close)");
    }

  const Triod triodCopy = triod;
  // Profile endpoints are clamped exactly to the wells.
  const std::array<Vec2, 3> wells = {profiles[0].samples.front(), profiles[0].samples.back(),
                                     profiles[1].samples.back()};

  auto psCopy = std::make_shared<ProfileSet>(profiles);
  std::array<Transition, 3> trCopy = trans;
  const double tw = transitionWidth;

  BoundaryTrace out;
  out.R = R;
  out.smooth = true;
  out.eval = [triodCopy, psCopy, trCopy, wells, tw, R](double theta) -> Vec2 {
    for (const Transition& t : trCopy) {
      const double s = angDiff(theta, t.anchorAngle) * R;  // arclength offset
      if (std::abs(s) <= 0.5 * tw) {
        bool flipped = false;
        const Profile1D& p = profile_for(*psCopy, t.before, t.after, flipped);
        auto val = [&](double x) { return flipped ? p.valueAt(-x) : p.valueAt(x); };
        // Linear ramp removes the exponentially small end mismatch so the
        // trace meets the wells exactly at the arc ends.
        const Vec2 endLo = val(-0.5 * tw) - wells[static_cast<std::size_t>(t.before - 1)];
        const Vec2 endHi = val(0.5 * tw) - wells[static_cast<std::size_t>(t.after - 1)];
        const double lam = (s + 0.5 * tw) / tw;
        return val(s) - endLo * (1.0 - lam) - endHi * lam;
      }
    }
    const int reg = triodCopy.classify(Vec2{R * std::cos(theta), R * std::sin(theta)});
    return wells[static_cast<std::size_t>(reg - 1)];
  };
  return out;
}

Field2D materialize(double R, double h, const std::function<Vec2(Vec2)>& fn,
                    const BoundaryTrace* trace) {
  Field2D f = make_disk_field(R, h);
  for (std::int64_t idx : f.activeList) {
    const Vec2 p = f.pos(idx);
    if (trace && f.dirichlet[static_cast<std::size_t>(idx)])
      f.values[static_cast<std::size_t>(idx)] = trace->eval(std::atan2(p.y, p.x));
    else
      f.values[static_cast<std::size_t>(idx)] = fn(p);
  }
  return f;
}

CompetitorReport radial_competitor(const BoundaryTrace& trace, double R, const WellSystem& ws,
                                   int target, double h, std::optional<double> calibratedBound) {
  const Vec2 a = ws.well(target);
  const double bandR = R - 2.0 * h;
  auto fn = [&trace, a, R, bandR](Vec2 z) -> Vec2 {
    const double r = z.norm();
    if (r >= bandR) return trace.eval(std::atan2(z.y, z.x));
    if (r <= R - 1.0) return a;
    const double t = (r - (R - 1.0)) / (bandR - (R - 1.0));
    return trace.eval(std::atan2(z.y, z.x)) * t + a * (1.0 - t);
  };
  CompetitorReport rep;
  rep.field = materialize(R, h, fn, &trace);
  rep.energy = energy(rep.field, ws);
  rep.predictedBound = calibratedBound ? *calibratedBound : 1.5 * rep.energy.total;
  rep.slack = rep.predictedBound - rep.energy.total;
  rep.parameters = {{"R", R}, {"h", h}, {"target", static_cast<double>(target)},
                    {"selfCalibrated", calibratedBound ? 0.0 : 1.0}};
  return rep;
}

CompetitorReport two_phase_competitor(double R, double y0, const WellSystem& ws,
                                      const Profile1D& u12, double hWidth, double h) {
  if (!(std::abs(y0) < R - 3.0 * hWidth))
    throw std::invalid_argument("two_phase_competitor: need |y0| < R - 3 hWidth");
  const Vec2 aLow = ws.well(u12.wellFrom);   // below the strip
  const Vec2 aHigh = ws.well(u12.wellTo);    // above the strip
  auto vProfile = [&](double t) -> Vec2 {
    if (t >= 2.0 * hWidth) return aHigh;
    if (t <= -2.0 * hWidth) return aLow;
    if (t >= hWidth) {
      const double lam = (t - hWidth) / hWidth;
      return u12.valueAt(hWidth) * (1.0 - lam) + aHigh * lam;
    }
    if (t <= -hWidth) {
      const double lam = (-t - hWidth) / hWidth;
      return u12.valueAt(-hWidth) * (1.0 - lam) + aLow * lam;
    }
    return u12.valueAt(t);
  };
  auto fn = [&](Vec2 z) -> Vec2 { return vProfile(z.y - y0); };

  CompetitorReport rep;
  rep.field = materialize(R, h, fn, nullptr);
  rep.energy = energy(rep.field, ws);

  RegionPred core = [y0, hWidth](Vec2 z) { return std::abs(z.y - y0) < hWidth; };
  const double coreEnergy = energy(rep.field, ws, &core).total;
  const double interpEnergy = rep.energy.total - coreEnergy;
  const double sigma = u12.sigma;
  rep.predictedBound = 2.0 * R * sigma + 1.5 * interpEnergy;
  rep.slack = rep.predictedBound - rep.energy.total;
  rep.parameters = {{"R", R},
                    {"h", h},
                    {"y0", y0},
                    {"hWidth", hWidth},
                    {"sigma", sigma},
                    {"coreEnergy", coreEnergy},
                    {"interpLayerEnergy", interpEnergy},
                    {"chordLength", 2.0 * std::sqrt(std::max(0.0, R * R - y0 * y0))}};
  return rep;
}

std::function<Vec2(Vec2)> triple_competitor_function(const Triod& triod, double R,
                                                     const WellSystem& ws,
                                                     const ProfileSet& profiles, double alpha,
                                                     const BoundaryTrace* imposeTrace,
                                                     double bandEnd) {
  auto tc = std::make_shared<TripleCompetitor>(
      buildTriple(triod, R, ws, profiles, alpha, imposeTrace, bandEnd));
  return [tc](Vec2 z) { return (*tc)(z); };
}

CompetitorReport triple_competitor(const Triod& triod, double R, const WellSystem& ws,
                                   const ProfileSet& profiles,
                                   const TripleCompetitorOptions& opts) {
  const double bandEnd = R - 2.0 * opts.h;
  auto fn = triple_competitor_function(triod, R, ws, profiles, opts.alpha, opts.imposeTrace,
                                       bandEnd);
  CompetitorReport rep;
  rep.field = materialize(R, opts.h, fn, opts.imposeTrace);
  rep.energy = energy(rep.field, ws);

  const double w = std::pow(R, opts.alpha);
  const Vec2 D = triod.D;
  RegionPred ball = [D, w](Vec2 z) { return dist(z, D) <= 2.0 * w; };
  const double ballEnergy = energy(rep.field, ws, &ball).total;
  const double sigma = (profiles[0].sigma + profiles[1].sigma + profiles[2].sigma) / 3.0;
  const double sigmaLen = sigma * triod.totalLength();

  if (opts.calibratedC) {
    rep.predictedBound = sigmaLen + *opts.calibratedC * std::pow(R, opts.alpha);
  } else {
    rep.predictedBound = std::max(sigmaLen + 1.5 * (rep.energy.total - sigmaLen),
                                  rep.energy.total * (1.0 + 1e-9));
  }
  rep.slack = rep.predictedBound - rep.energy.total;
  rep.parameters = {{"R", R},
                    {"h", opts.h},
                    {"alpha", opts.alpha},
                    {"halfWidth", w},
                    {"sigma", sigma},
                    {"sigmaTimesLength", sigmaLen},
                    {"junctionBallEnergy", ballEnergy},
                    {"excessOverSigmaLength", rep.energy.total - sigmaLen},
                    {"selfCalibrated", opts.calibratedC ? 0.0 : 1.0}};
  return rep;
}

}  // namespace trijunction
