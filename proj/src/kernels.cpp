#include "trijunction/kernels.hpp"

#include "trijunction/parallel.hpp"

namespace trijunction::kernels {

namespace {

template <class Pot>
inline void nodeEnergyTerms(const Field2D& f, const Pot& pot, std::int64_t idx, double& dir,
                            double& pen) {
  const Vec2 u = f.values[static_cast<std::size_t>(idx)];
  const double wR = f.wx[static_cast<std::size_t>(idx)];
  if (wR > 0.0) dir += 0.5 * wR * (f.values[static_cast<std::size_t>(idx + 1)] - u).norm2();
  const double wU = f.wy[static_cast<std::size_t>(idx)];
  if (wU > 0.0) dir += 0.5 * wU * (f.values[static_cast<std::size_t>(idx + f.nSide)] - u).norm2();
  pen += f.weight[static_cast<std::size_t>(idx)] * f.h * f.h * pot.eval(u);
}

template <class Pot>
EnergySums energyPar(const Field2D& f, const Pot& pot) {
  EnergySums s;
  deterministicSum2(
      static_cast<std::int64_t>(f.activeList.size()),
      [&](std::int64_t k, double& dir, double& pen) {
        nodeEnergyTerms(f, pot, f.activeList[static_cast<std::size_t>(k)], dir, pen);
      },
      s.dirichlet, s.potential);
  return s;
}

template <class Pot>
EnergySums energyRef(const Field2D& f, const Pot& pot) {
  EnergySums s;
  for (std::int64_t idx : f.activeList) nodeEnergyTerms(f, pot, idx, s.dirichlet, s.potential);
  return s;
}

template <class Pot>
inline Vec2 nodeGradient(const Field2D& f, const Pot& pot, std::int64_t idx) {
  const std::size_t i = static_cast<std::size_t>(idx);
  const Vec2 u = f.values[i];
  Vec2 g{};
  const double wR = f.wx[i];
  if (wR > 0.0) g += (u - f.values[i + 1]) * wR;
  const double wL = f.wx[i - 1];
  if (wL > 0.0) g += (u - f.values[i - 1]) * wL;
  const double wU = f.wy[i];
  if (wU > 0.0) g += (u - f.values[i + static_cast<std::size_t>(f.nSide)]) * wU;
  const double wD = f.wy[i - static_cast<std::size_t>(f.nSide)];
  if (wD > 0.0) g += (u - f.values[i - static_cast<std::size_t>(f.nSide)]) * wD;
  g += pot.grad(u) * (f.weight[i] * f.h * f.h);
  return g;
}

template <class Pot>
void gradientPar(const Field2D& f, const Pot& pot, std::vector<Vec2>& g) {
  g.assign(f.values.size(), Vec2{});
  parallelFor(static_cast<std::int64_t>(f.freeList.size()), [&](std::int64_t k) {
    const std::int64_t idx = f.freeList[static_cast<std::size_t>(k)];
    g[static_cast<std::size_t>(idx)] = nodeGradient(f, pot, idx);
  });
}

template <class Pot>
EnergySums gradientAndEnergyPar(const Field2D& f, const Pot& pot, std::vector<Vec2>& g) {
  g.assign(f.values.size(), Vec2{});
  parallelFor(static_cast<std::int64_t>(f.freeList.size()), [&](std::int64_t k) {
    const std::int64_t idx = f.freeList[static_cast<std::size_t>(k)];
    g[static_cast<std::size_t>(idx)] = nodeGradient(f, pot, idx);
  });
  return energyPar(f, pot);
}

template <class Fn>
auto dispatch(const WellSystem& ws, Fn&& fn) {
  if (ws.kind == PotentialKind::Canonical) return fn(CanonicalPotential(ws));
  return fn(GenericPotential(ws));
}

}  // namespace

namespace par {

EnergySums energy(const Field2D& f, const WellSystem& ws) {
  return dispatch(ws, [&](const auto& pot) { return energyPar(f, pot); });
}

void gradient(const Field2D& f, const WellSystem& ws, std::vector<Vec2>& g) {
  if (ws.kind == PotentialKind::Canonical)
    gradientPar(f, CanonicalPotential(ws), g);
  else
    gradientPar(f, GenericPotential(ws), g);
}

EnergySums gradientAndEnergy(const Field2D& f, const WellSystem& ws, std::vector<Vec2>& g) {
  return dispatch(ws, [&](const auto& pot) { return gradientAndEnergyPar(f, pot, g); });
}

double l1(const Field2D& f, const Field2D& g) {
  const double cell = f.h * f.h;
  return deterministicSum(static_cast<std::int64_t>(f.activeList.size()), [&](std::int64_t k) {
    const std::size_t idx = static_cast<std::size_t>(f.activeList[static_cast<std::size_t>(k)]);
    return f.weight[idx] * cell * (f.values[idx] - g.values[idx]).norm();
  });
}

}  // namespace par

namespace ref {

EnergySums energy(const Field2D& f, const WellSystem& ws) {
  return dispatch(ws, [&](const auto& pot) { return energyRef(f, pot); });
}

void gradient(const Field2D& f, const WellSystem& ws, std::vector<Vec2>& g) {
  g.assign(f.values.size(), Vec2{});
  dispatch(ws, [&](const auto& pot) {
    for (std::int64_t idx : f.freeList)
      g[static_cast<std::size_t>(idx)] = nodeGradient(f, pot, idx);
    return 0;
  });
}

double l1(const Field2D& f, const Field2D& g) {
  double acc = 0.0;
  const double cell = f.h * f.h;
  for (std::int64_t idx : f.activeList) {
    const std::size_t i = static_cast<std::size_t>(idx);
    acc += f.weight[i] * cell * (f.values[i] - g.values[i]).norm();
  }
  return acc;
}

}  // namespace ref

}  // namespace trijunction::kernels
