#include <gtest/gtest.h>

#include <omp.h>

#include "modlab/kernels.hpp"

using namespace modlab;

TEST(Kernels, SerialAndParallelAgree) {
  omp_set_num_threads(4);
  for (const char* key : {"sl2r", "sl2c", "sl3"}) {
    const MatrixGroup G = group_by_key(key);
    for (int n = 3; n <= 5; ++n) {
      auto k = equivariance_kernel(G, n);
      const double s = serial_max_residual(40, 21, k), p = parallel_max_residual(40, 21, k);
      EXPECT_EQ(s, p) << key << " " << n;
      EXPECT_LE(s, 1e-10);
    }
    auto m = multiplicativity_kernel(G);
    const double s = serial_max_residual(40, 22, m), p = parallel_max_residual(40, 22, m);
    EXPECT_EQ(s, p) << key;
    EXPECT_LE(s, 1e-9);
  }
}

TEST(Kernels, ExceptionsPropagate) {
  SampleResidual f = [](int i, std::mt19937_64&) -> double {
    if (i == 7) throw std::runtime_error("boom");
    return 0;
  };
  EXPECT_THROW(parallel_max_residual(20, 1, f), std::runtime_error);
  EXPECT_THROW(serial_max_residual(20, 1, f), std::runtime_error);
}

TEST(Kernels, SeedsDiffer) {
  EXPECT_NE(sample_seed(1, 0), sample_seed(1, 1));
  EXPECT_NE(sample_seed(1, 0), sample_seed(2, 0));
  EXPECT_EQ(sample_seed(5, 3), sample_seed(5, 3));
}
