#include <gtest/gtest.h>

#include "modlab/linalg.hpp"
#include "test_util.hpp"

using namespace modlab;

TEST(Linalg, RankAndNullSpace) {
  Mat a(2, 3);
  a << 1, 2, 3, 2, 4, 6;
  EXPECT_EQ(numeric_rank(a), 1);
  Mat ns = null_space(a);
  EXPECT_EQ(ns.cols(), 2);
  EXPECT_LT(max_abs(a * ns), 1e-12);
  EXPECT_EQ(numeric_rank(Mat::Zero(3, 3)), 0);
}

TEST(Linalg, IntersectionOfPlanes) {
  Mat a(3, 2), b(3, 2);
  a << 1, 0, 0, 1, 0, 0;  // xy-plane
  b << 0, 0, 1, 0, 0, 1;  // yz-plane
  Mat i = intersect(a, b);
  ASSERT_EQ(i.cols(), 1);
  EXPECT_NEAR(std::abs(i(1, 0)), 1.0, 1e-12);
  EXPECT_LT(containment_residual(i, a), 1e-12);
  EXPECT_GT(containment_residual(b, a), 0.5);
}

TEST(Linalg, StackingAndRealify) {
  Mat a = Mat::Identity(2, 2), b = 2.0 * Mat::Identity(1, 1);
  Mat d = block_diag({a, b});
  EXPECT_EQ(d.rows(), 3);
  EXPECT_EQ(d(2, 2), cd(2));
  EXPECT_EQ(hstack({a, a}).cols(), 4);
  EXPECT_EQ(vstack({a, a}).rows(), 4);
  Mat c(1, 1);
  c(0, 0) = cd(1, 2);
  RVec r = realify(c);
  EXPECT_EQ(r(0), 1);
  EXPECT_EQ(r(1), 2);
}
