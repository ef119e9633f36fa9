#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "modlab/matgroups.hpp"

namespace modlab {

// residual of sample i drawn from its own generator; must be safe to call concurrently
using SampleResidual = std::function<double(int, std::mt19937_64&)>;

std::uint64_t sample_seed(std::uint64_t seed, int i);

// max over i in [0, n); both versions return identical values for the same seed
double serial_max_residual(int n, std::uint64_t seed, const SampleResidual& f);
double parallel_max_residual(int n, std::uint64_t seed, const SampleResidual& f);

// mu(g.rho)_e = g_T(e) mu(rho)_e g_S(e)^{-1} on a random free polygon(n) representation, together with
// the relation residual of g.rho
SampleResidual equivariance_kernel(const MatrixGroup& G, int n);
// P(gh) = P(g) + Ad_g P(h) Ad_g^T for the standard pi_G
SampleResidual multiplicativity_kernel(const MatrixGroup& G);

}  // namespace modlab
