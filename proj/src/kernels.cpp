#include "modlab/kernels.hpp"

#include <algorithm>
#include <exception>
#include <memory>
#include <vector>

#include "modlab/poissoncheck.hpp"
#include "modlab/repmoduli.hpp"

namespace modlab {

std::uint64_t sample_seed(std::uint64_t seed, int i) {
  // splitmix64 of (seed, i)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(i) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double serial_max_residual(int n, std::uint64_t seed, const SampleResidual& f) {
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 rng(sample_seed(seed, i));
    worst = std::max(worst, f(i, rng));
  }
  return worst;
}

double parallel_max_residual(int n, std::uint64_t seed, const SampleResidual& f) {
  std::vector<double> r(std::max(n, 0), 0.0);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      std::mt19937_64 rng(sample_seed(seed, i));
      r[i] = f(i, rng);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

SampleResidual equivariance_kernel(const MatrixGroup& G, int n) {
  MatrixAlgebra ma = lie_algebra(G);
  AlgPtr d = std::make_shared<QuadLieAlgebra>(double_algebra(*ma.alg));
  Decoration deco;
  deco.edges.assign(n, hs_full());
  deco.vertices.assign(n, diagonal(d));
  auto spec = std::make_shared<const ModuliSpec>(polygon_moduli(new_polygon(n), G, deco));
  return [spec, G, n](int, std::mt19937_64& rng) {
    RepPoint rep = sample_constrained(*spec, rng);
    GaugeElement g = sample_gauge(G, spec->K, rng);
    const RepPoint moved = gauge_act(spec->surface, g, rep);
    auto mu = moment(moved);
    double r = relation_residual(spec->surface, moved);
    for (int e = 0; e < n; ++e) {
      const Mat expect = g[spec->surface.graph.tgt[e]] * rep.edges[e] * g[spec->surface.graph.src[e]].inverse();
      r = std::max(r, max_abs(mu[e] - expect));
    }
    return r;
  };
}

SampleResidual multiplicativity_kernel(const MatrixGroup& G) {
  MatrixAlgebra ma = lie_algebra(G);
  auto pi = std::make_shared<const BivectorField>(
      poisson_lie_bivector(ma, standard_r_matrix(*ma.alg, sl_root_data(G.n))));
  return [pi, G](int, std::mt19937_64& rng) {
    Mat g = sample(G, hs_full(), rng), h = sample(G, hs_full(), rng);
    Mat Ad = pi->ma.Ad(g);
    return max_abs((*pi)({Mat(g * h)}) - (*pi)({g}) - Ad * (*pi)({h}) * Ad.transpose());
  };
}

}  // namespace modlab
