#ifndef TRIJUNCTION_FIELD_HPP
#define TRIJUNCTION_FIELD_HPP

// Discrete vector fields on masked disk grids. The energy is a fixed-order
// quadrature: each axis edge carries (w/2)|du|^2, each node carries w h^2 W(u),
// with w the exact in-disk area fraction of the h-cell centered on the site.
// Interior weights are 1, so the energy gradient at interior nodes reduces to
// (-Lap_h u + W_u(u)) h^2.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "trijunction/potential.hpp"
#include "trijunction/vec.hpp"

namespace trijunction {

using RegionPred = std::function<bool(Vec2)>;

struct Field2D {
  double R = 0.0;
  double h = 0.0;
  int nSide = 0;  // nodes per side; node (i, j) sits at (-R + i h, -R + j h)

  // Arrays are padded by nSide + 1 trailing zeros so stencils can read
  // right/up neighbors without bounds checks.
  std::vector<Vec2> values;
  std::vector<std::uint8_t> active;
  std::vector<std::uint8_t> dirichlet;  // 2-cell boundary band
  std::vector<double> weight;           // node-cell in-disk area fraction
  std::vector<double> wx;               // edge (i,j)-(i+1,j) weight, 0 if absent
  std::vector<double> wy;               // edge (i,j)-(i,j+1) weight, 0 if absent
  std::vector<std::int64_t> activeList;
  std::vector<std::int64_t> freeList;   // active and not Dirichlet

  struct RingNode {
    std::int64_t idx;
    double angle;
  };
  std::vector<RingNode> boundaryRing;  // mask-edge nodes, angles increasing

  std::int64_t index(int i, int j) const { return static_cast<std::int64_t>(j) * nSide + i; }
  Vec2 pos(std::int64_t idx) const {
    const int i = static_cast<int>(idx % nSide), j = static_cast<int>(idx / nSide);
    return {-R + h * i, -R + h * j};
  }
  bool isActive(int i, int j) const {
    if (i < 0 || j < 0 || i >= nSide || j >= nSide) return false;
    return active[static_cast<std::size_t>(index(i, j))] != 0;
  }

  // Bilinear interpolation, renormalized over active corners near the mask.
  Vec2 interp(const Vec2& z) const;
};

Field2D make_disk_field(double R, double h);

// Exact area of [x0,x1] x [y0,y1] intersected with the origin-centered disk.
double rect_disk_area(double x0, double x1, double y0, double y1, double R);

void fill_field(Field2D& f, const std::function<Vec2(Vec2)>& fn);

struct EnergyBreakdown {
  double total = 0.0;
  double dirichletPart = 0.0;
  double potentialPart = 0.0;
  std::map<int, double> perRegion;
  double boundaryLineEnergy = std::numeric_limits<double>::quiet_NaN();
  bool flaggedEmpty = false;  // set when a region predicate selects nothing
};

EnergyBreakdown energy(const Field2D& f, const WellSystem& ws, const RegionPred* region = nullptr);

// perRegion filled with the three triod sector energies (keyed 1..3).
struct Triod;
EnergyBreakdown energy_by_region(const Field2D& f, const WellSystem& ws, const Triod& triod);

// Exact gradient of the discrete energy; zero at Dirichlet and inactive nodes.
std::vector<Vec2> energy_gradient(const Field2D& f, const WellSystem& ws);

struct LineEnergy {
  double total = 0.0;
  double dirichletPart = 0.0;  // tangential derivative part
  double potentialPart = 0.0;
  bool nonSmooth = false;  // jump detected; total reported as +inf surrogate
};

// Circle integral of |d_T u|^2/2 + W(u) at radius r (bilinear trace, trapezoid
// in angle). r must be at least 4h.
LineEnergy boundary_line_energy_parts(const Field2D& f, const WellSystem& ws, double r);
double boundary_line_energy(const Field2D& f, const WellSystem& ws, double r);

// Same functional evaluated on an analytic angular trace (no grid).
LineEnergy trace_line_energy(const std::function<Vec2(double)>& trace, const WellSystem& ws,
                             double r, int nAngles = 8192);

// u_R(z) = u(R z) sampled onto a unit-disk grid with targetN cells per side.
Field2D rescale_to_unit(const Field2D& f, int targetN);

// int |f - g| dz by midpoint quadrature; fields must share the disk radius.
double l1_distance(const Field2D& f, const Field2D& g);
double l1_distance(const Field2D& f, const std::function<Vec2(Vec2)>& g);

// Text format: header "R h n", then "x y u1 u2" per active node.
void write_field_csv(const Field2D& f, const std::string& path);
Field2D read_field_csv(const std::string& path);

}  // namespace trijunction

#endif
