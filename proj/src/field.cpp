#include "trijunction/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "trijunction/kernels.hpp"
#include "trijunction/triod.hpp"

namespace trijunction {

namespace {

// Antiderivative of sqrt(R^2 - t^2), clamped outside [-R, R].
double circArea(double t, double R) {
  if (t <= -R) return -0.25 * kPi * R * R;
  if (t >= R) return 0.25 * kPi * R * R;
  return 0.5 * (t * std::sqrt(R * R - t * t) + R * R * std::asin(t / R));
}

// Area of disk(R) intersected with the quadrant {X <= x, Y <= y}.
double quadrantArea(double x, double y, double R) {
  if (x <= -R || y <= -R) return 0.0;
  const double xb = std::min(x, R);
  const double yb = std::min(y, R);
  const double ty = std::sqrt(std::max(0.0, R * R - yb * yb));
  if (yb >= 0.0) {
    double area = 2.0 * (circArea(std::min(xb, -ty), R) - circArea(-R, R));
    if (xb > -ty) {
      const double hi = std::min(xb, ty);
      area += yb * (hi + ty) + (circArea(hi, R) - circArea(-ty, R));
      if (xb > ty) area += 2.0 * (circArea(xb, R) - circArea(ty, R));
    }
    return area;
  }
  const double hi = std::min(xb, ty);
  if (hi <= -ty) return 0.0;
  return yb * (hi + ty) + (circArea(hi, R) - circArea(-ty, R));
}

}  // namespace

double rect_disk_area(double x0, double x1, double y0, double y1, double R) {
  return quadrantArea(x1, y1, R) - quadrantArea(x0, y1, R) - quadrantArea(x1, y0, R) +
         quadrantArea(x0, y0, R);
}

Field2D make_disk_field(double R, double h) {
  if (!(R > 0.0) || !(h > 0.0)) throw std::invalid_argument("make_disk_field: R, h must be > 0");
  Field2D f;
  f.R = R;
  f.h = h;
  f.nSide = static_cast<int>(std::lround(2.0 * R / h)) + 1;
  const std::size_t n2 = static_cast<std::size_t>(f.nSide) * f.nSide;
  const std::size_t padded = n2 + static_cast<std::size_t>(f.nSide) + 1;
  f.values.assign(padded, Vec2{});
  f.active.assign(padded, 0);
  f.dirichlet.assign(padded, 0);
  f.weight.assign(padded, 0.0);
  f.wx.assign(padded, 0.0);
  f.wy.assign(padded, 0.0);

  const double rTol = R * (1.0 + 1e-12);
  const double bandR = R - 2.0 * h;
  for (int j = 0; j < f.nSide; ++j) {
    for (int i = 0; i < f.nSide; ++i) {
      const Vec2 p{-R + h * i, -R + h * j};
      if (p.norm() <= rTol) {
        const std::size_t idx = static_cast<std::size_t>(f.index(i, j));
        f.active[idx] = 1;
        if (p.norm() >= bandR) f.dirichlet[idx] = 1;
      }
    }
  }
  const double half = 0.5 * h;
  const double cell = h * h;
  for (int j = 0; j < f.nSide; ++j) {
    for (int i = 0; i < f.nSide; ++i) {
      const std::size_t idx = static_cast<std::size_t>(f.index(i, j));
      if (!f.active[idx]) continue;
      const Vec2 p = f.pos(static_cast<std::int64_t>(idx));
      f.weight[idx] = rect_disk_area(p.x - half, p.x + half, p.y - half, p.y + half, R) / cell;
      f.activeList.push_back(static_cast<std::int64_t>(idx));
      if (!f.dirichlet[idx]) f.freeList.push_back(static_cast<std::int64_t>(idx));
      if (f.isActive(i + 1, j))
        f.wx[idx] = rect_disk_area(p.x, p.x + h, p.y - half, p.y + half, R) / cell;
      if (f.isActive(i, j + 1))
        f.wy[idx] = rect_disk_area(p.x - half, p.x + half, p.y, p.y + h, R) / cell;
    }
  }

  // Mask-edge nodes ordered by angle form the boundary ring.
  for (int j = 0; j < f.nSide; ++j) {
    for (int i = 0; i < f.nSide; ++i) {
      const std::size_t idx = static_cast<std::size_t>(f.index(i, j));
      if (!f.active[idx]) continue;
      const bool edge = !f.isActive(i + 1, j) || !f.isActive(i - 1, j) || !f.isActive(i, j + 1) ||
                        !f.isActive(i, j - 1);
      if (!edge) continue;
      const Vec2 p = f.pos(static_cast<std::int64_t>(idx));
      f.boundaryRing.push_back({static_cast<std::int64_t>(idx), wrapAngle(std::atan2(p.y, p.x))});
    }
  }
  std::sort(f.boundaryRing.begin(), f.boundaryRing.end(),
            [](const Field2D::RingNode& a, const Field2D::RingNode& b) { return a.angle < b.angle; });
  f.boundaryRing.erase(std::unique(f.boundaryRing.begin(), f.boundaryRing.end(),
                                   [](const Field2D::RingNode& a, const Field2D::RingNode& b) {
                                     return a.angle == b.angle;
                                   }),
                       f.boundaryRing.end());
  return f;
}

void fill_field(Field2D& f, const std::function<Vec2(Vec2)>& fn) {
  for (std::int64_t idx : f.activeList)
    f.values[static_cast<std::size_t>(idx)] = fn(f.pos(idx));
}

Vec2 Field2D::interp(const Vec2& z) const {
  const double gx = (z.x + R) / h;
  const double gy = (z.y + R) / h;
  int i = static_cast<int>(std::floor(gx));
  int j = static_cast<int>(std::floor(gy));
  i = std::clamp(i, 0, nSide - 2);
  j = std::clamp(j, 0, nSide - 2);
  const double fx = std::clamp(gx - i, 0.0, 1.0);
  const double fy = std::clamp(gy - j, 0.0, 1.0);
  const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  const std::int64_t ids[4] = {index(i, j), index(i + 1, j), index(i, j + 1), index(i + 1, j + 1)};
  double wsum = 0.0;
  Vec2 acc{};
  for (int k = 0; k < 4; ++k) {
    if (!active[static_cast<std::size_t>(ids[k])]) continue;
    acc += values[static_cast<std::size_t>(ids[k])] * w[k];
    wsum += w[k];
  }
  if (wsum <= 0.0) {
    // All corners outside the mask: fall back to the nearest active node.
    double best = std::numeric_limits<double>::infinity();
    Vec2 v{};
    for (int dj = 0; dj <= 1; ++dj)
      for (int di = 0; di <= 1; ++di) {
        const std::int64_t id = index(i + di, j + dj);
        if (!active[static_cast<std::size_t>(id)]) continue;
        const double d = dist(pos(id), z);
        if (d < best) {
          best = d;
          v = values[static_cast<std::size_t>(id)];
        }
      }
    return v;
  }
  return acc / wsum;
}

EnergyBreakdown energy(const Field2D& f, const WellSystem& ws, const RegionPred* region) {
  EnergyBreakdown out;
  if (!region) {
    const auto s = kernels::par::energy(f, ws);
    out.dirichletPart = s.dirichlet;
    out.potentialPart = s.potential;
    out.total = s.dirichlet + s.potential;
    return out;
  }

  // Region-restricted quadrature: every term is attributed to its own site
  // (node or edge midpoint), so region plus complement recovers the total.
  const double cell = f.h * f.h;
  double dir = 0.0, pen = 0.0;
  std::size_t hits = 0;
  for (std::int64_t idx : f.activeList) {
    const std::size_t i = static_cast<std::size_t>(idx);
    const Vec2 p = f.pos(idx);
    const Vec2 u = f.values[i];
    if ((*region)(p)) {
      pen += f.weight[i] * cell * ws.eval(u);
      ++hits;
    }
    if (f.wx[i] > 0.0 && (*region)(Vec2{p.x + 0.5 * f.h, p.y}))
      dir += 0.5 * f.wx[i] * (f.values[i + 1] - u).norm2();
    if (f.wy[i] > 0.0 && (*region)(Vec2{p.x, p.y + 0.5 * f.h}))
      dir += 0.5 * f.wy[i] * (f.values[i + static_cast<std::size_t>(f.nSide)] - u).norm2();
  }
  out.dirichletPart = dir;
  out.potentialPart = pen;
  out.total = dir + pen;
  out.flaggedEmpty = (hits == 0);
  return out;
}

EnergyBreakdown energy_by_region(const Field2D& f, const WellSystem& ws, const Triod& triod) {
  EnergyBreakdown out = energy(f, ws, nullptr);
  for (int r = 1; r <= 3; ++r) {
    RegionPred pred = [&triod, r](Vec2 z) { return triod.classify(z) == r; };
    out.perRegion[r] = energy(f, ws, &pred).total;
  }
  return out;
}

std::vector<Vec2> energy_gradient(const Field2D& f, const WellSystem& ws) {
  std::vector<Vec2> g;
  kernels::par::gradient(f, ws, g);
  return g;
}

LineEnergy boundary_line_energy_parts(const Field2D& f, const WellSystem& ws, double r) {
  if (!(r >= 4.0 * f.h)) throw std::invalid_argument("boundary_line_energy: r must be >= 4h");
  if (r > f.R) throw std::invalid_argument("boundary_line_energy: r exceeds the disk");
  const int n = std::max(256, static_cast<int>(std::ceil(kTwoPi * r / (0.5 * f.h))));
  const double dth = kTwoPi / n;
  std::vector<Vec2> trace(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    trace[static_cast<std::size_t>(k)] = f.interp(Vec2{r * std::cos(dth * k), r * std::sin(dth * k)});

  LineEnergy out;
  const double jumpThresh = 0.5 * ws.minWellSeparation();
  for (int k = 0; k < n; ++k) {
    const Vec2 um = trace[static_cast<std::size_t>((k + n - 1) % n)];
    const Vec2 u0 = trace[static_cast<std::size_t>(k)];
    const Vec2 up = trace[static_cast<std::size_t>((k + 1) % n)];
    if ((up - u0).norm() > jumpThresh) out.nonSmooth = true;
    const Vec2 dT = (up - um) / (2.0 * r * dth);
    out.dirichletPart += 0.5 * dT.norm2() * r * dth;
    out.potentialPart += ws.eval(u0) * r * dth;
  }
  out.total = out.dirichletPart + out.potentialPart;
  if (out.nonSmooth) out.total = std::numeric_limits<double>::infinity();
  return out;
}

double boundary_line_energy(const Field2D& f, const WellSystem& ws, double r) {
  return boundary_line_energy_parts(f, ws, r).total;
}

LineEnergy trace_line_energy(const std::function<Vec2(double)>& trace, const WellSystem& ws,
                             double r, int nAngles) {
  const double dth = kTwoPi / nAngles;
  LineEnergy out;
  const double jumpThresh = 0.5 * ws.minWellSeparation();
  std::vector<Vec2> tr(static_cast<std::size_t>(nAngles));
  for (int k = 0; k < nAngles; ++k) tr[static_cast<std::size_t>(k)] = trace(dth * k);
  for (int k = 0; k < nAngles; ++k) {
    const Vec2 um = tr[static_cast<std::size_t>((k + nAngles - 1) % nAngles)];
    const Vec2 u0 = tr[static_cast<std::size_t>(k)];
    const Vec2 up = tr[static_cast<std::size_t>((k + 1) % nAngles)];
    if ((up - u0).norm() > jumpThresh) out.nonSmooth = true;
    const Vec2 dT = (up - um) / (2.0 * r * dth);
    out.dirichletPart += 0.5 * dT.norm2() * r * dth;
    out.potentialPart += ws.eval(u0) * r * dth;
  }
  out.total = out.dirichletPart + out.potentialPart;
  if (out.nonSmooth) out.total = std::numeric_limits<double>::infinity();
  return out;
}

Field2D rescale_to_unit(const Field2D& f, int targetN) {
  if (targetN < 64) throw std::invalid_argument("rescale_to_unit: targetN must be >= 64");
  Field2D out = make_disk_field(1.0, 2.0 / targetN);
  for (std::int64_t idx : out.activeList) {
    const Vec2 z = out.pos(idx);
    out.values[static_cast<std::size_t>(idx)] = f.interp(z * f.R);
  }
  return out;
}

double l1_distance(const Field2D& f, const Field2D& g) {
  if (std::abs(f.R - g.R) > 1e-12 * std::max(1.0, f.R))
    throw std::invalid_argument("l1_distance: disk radii differ");
  if (f.nSide == g.nSide && f.h == g.h) return kernels::par::l1(f, g);
  // Different grids on the same disk: sample g at f's nodes.
  const double cell = f.h * f.h;
  double acc = 0.0;
  for (std::int64_t idx : f.activeList) {
    const std::size_t i = static_cast<std::size_t>(idx);
    acc += f.weight[i] * cell * (f.values[i] - g.interp(f.pos(idx))).norm();
  }
  return acc;
}

double l1_distance(const Field2D& f, const std::function<Vec2(Vec2)>& g) {
  const double cell = f.h * f.h;
  double acc = 0.0;
  for (std::int64_t idx : f.activeList) {
    const std::size_t i = static_cast<std::size_t>(idx);
    acc += f.weight[i] * cell * (f.values[i] - g(f.pos(idx))).norm();
  }
  return acc;
}

void write_field_csv(const Field2D& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
  out.precision(17);
  out << f.R << " " << f.h << " " << f.nSide << "\n";
  for (std::int64_t idx : f.activeList) {
    const Vec2 p = f.pos(idx);
    const Vec2 u = f.values[static_cast<std::size_t>(idx)];
    out << p.x << " " << p.y << " " << u.x << " " << u.y << "\n";
  }
}

Field2D read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_field_csv: cannot open " + path);
  double R = 0, h = 0;
  int n = 0;
  in >> R >> h >> n;
  if (!in || R <= 0 || h <= 0) throw std::runtime_error("read_field_csv: bad header in " + path);
  Field2D f = make_disk_field(R, h);
  if (f.nSide != n) throw std::runtime_error("read_field_csv: header n inconsistent with R, h");
  double x, y, u1, u2;
  while (in >> x >> y >> u1 >> u2) {
    const int i = static_cast<int>(std::lround((x + R) / h));
    const int j = static_cast<int>(std::lround((y + R) / h));
    if (i < 0 || j < 0 || i >= n || j >= n) continue;
    f.values[static_cast<std::size_t>(f.index(i, j))] = Vec2{u1, u2};
  }
  return f;
}

}  // namespace trijunction
