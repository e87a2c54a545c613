#ifndef TRIJUNCTION_KERNELS_HPP
#define TRIJUNCTION_KERNELS_HPP

// Hot loops behind the field operations. The par:: versions are OpenMP
// parallel with the fixed chunked reduction from parallel.hpp; the ref::
// versions are plain serial loops kept as the reference for testing and for
// the kernel benchmark.

#include <vector>

#include "trijunction/field.hpp"

namespace trijunction::kernels {

struct EnergySums {
  double dirichlet = 0.0;
  double potential = 0.0;
};

namespace par {
EnergySums energy(const Field2D& f, const WellSystem& ws);
void gradient(const Field2D& f, const WellSystem& ws, std::vector<Vec2>& g);
// One sweep computing both; used by the solver inner loop.
EnergySums gradientAndEnergy(const Field2D& f, const WellSystem& ws, std::vector<Vec2>& g);
double l1(const Field2D& f, const Field2D& g);
}  // namespace par

namespace ref {
EnergySums energy(const Field2D& f, const WellSystem& ws);
void gradient(const Field2D& f, const WellSystem& ws, std::vector<Vec2>& g);
double l1(const Field2D& f, const Field2D& g);
}  // namespace ref

}  // namespace trijunction::kernels

#endif
