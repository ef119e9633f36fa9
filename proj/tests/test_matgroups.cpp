#include <gtest/gtest.h>

#include "modlab/matgroups.hpp"
#include "test_util.hpp"

using namespace modlab;

TEST(MatGroups, ExpLogRoundTrip) {
  auto G = group_by_key("sl3c");
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    Mat x = sample_algebra(G, subalgebra_basis(G, hs_full()), rng, 0.4);
    EXPECT_LT(max_abs(logm(expm(x)) - x), 1e-12);
  }
  Mat x(2, 2);
  x << 0, 1, -1, 0;
  Mat r = expm(0.7 * x);
  EXPECT_NEAR(r(0, 0).real(), std::cos(0.7), 1e-15);
  EXPECT_NEAR(r(0, 1).real(), std::sin(0.7), 1e-15);
}

TEST(MatGroups, SamplesAreMembers) {
  for (const char* key : {"sl2r", "sl2c", "sl3r"}) {
    auto G = group_by_key(key);
    for (auto h : {hs_full(), hs_borel_upper(), hs_borel_lower(), hs_nil_upper(), hs_nil_lower(), hs_torus(), hs_trivial()}) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Mat g = sample(G, h, seed);
        EXPECT_TRUE(contains(G, h, g)) << key << " " << h.key();
      }
    }
  }
  auto D = pair_group(group_by_key("sl2r"));
  for (auto h : {hs_full(), hs_diagonal(), hs_dual()})
    for (std::uint64_t seed = 0; seed < 10; ++seed) EXPECT_TRUE(contains(D, h, sample(D, h, seed))) << h.key();
}

TEST(MatGroups, BorelUpperAndDualShape) {
  auto G = group_by_key("sl2r");
  Mat b = sample(G, hs_borel_upper(), 1);
  EXPECT_LT(std::abs(b(1, 0)), 1e-15);
  EXPECT_LT(std::abs(b.determinant() - cd(1)), 1e-12);
  auto D = pair_group(G);
  Mat bs = sample(D, hs_dual(), 2);
  Mat lo = block(D, bs, 0), up = block(D, bs, 1);
  EXPECT_LT(std::abs(lo(0, 1)), 1e-15);
  EXPECT_LT(std::abs(up(1, 0)), 1e-15);
  for (int i = 0; i < 2; ++i) EXPECT_LT(std::abs(lo(i, i) * up(i, i) - cd(1)), 1e-12);
}

TEST(MatGroups, SeedDeterminism) {
  auto G = group_by_key("sl3c");
  EXPECT_EQ(max_abs(sample(G, hs_full(), 77) - sample(G, hs_full(), 77)), 0.0);
  EXPECT_GT(max_abs(sample(G, hs_full(), 77) - sample(G, hs_full(), 78)), 0.0);
}

TEST(MatGroups, SubgroupClosureProperty) {
  auto G = group_by_key("sl2r");
  auto D = pair_group(G);
  std::mt19937_64 rng(9);
  struct Case {
    MatrixGroup grp;
    HSpec h;
  };
  std::vector<Case> cases = {{G, hs_borel_upper()}, {G, hs_borel_lower()}, {G, hs_torus()}, {G, hs_nil_upper()},
                             {D, hs_diagonal()},    {D, hs_dual()},        {D, hs_full()}};
  for (const auto& c : cases)
    for (int t = 0; t < 200; ++t) {
      Mat a = sample(c.grp, c.h, rng), b = sample(c.grp, c.h, rng);
      EXPECT_LE(membership_residual(c.grp, c.h, a * b), 1e-10);
      EXPECT_LE(membership_residual(c.grp, c.h, a.inverse()), 1e-10);
    }
}

TEST(MatGroups, MembershipRejects) {
  auto G = group_by_key("sl2r");
  Mat g = sample(G, hs_full(), 3);
  EXPECT_FALSE(contains(G, hs_borel_upper(), g));
  EXPECT_FALSE(contains(G, hs_full(), 2.0 * g));
  auto D = pair_group(G);
  EXPECT_FALSE(contains(D, hs_diagonal(), sample(D, hs_dual(), 4)));
  EXPECT_FALSE(contains(D, hs_dual(), sample(D, hs_diagonal(), 4)));
}

TEST(MatGroups, GeneratedSubgroup) {
  auto D = pair_group(group_by_key("sl2r"));
  HSpec h = hs_generated(D, subalgebra_basis(D, hs_diagonal()));
  EXPECT_EQ(h.kind, HSpec::Kind::Generated);
  for (std::uint64_t s = 0; s < 5; ++s) {
    EXPECT_TRUE(contains(D, h, sample(D, hs_diagonal(), s)));
    EXPECT_TRUE(contains(D, hs_diagonal(), sample(D, h, s)));
  }
  EXPECT_FALSE(contains(D, h, sample(D, hs_dual(), 1)));
  EXPECT_EQ(hs_generated(D, subalgebra_basis(D, hs_full())).kind, HSpec::Kind::Full);
  EXPECT_EQ(hs_generated(D, {}).kind, HSpec::Kind::Trivial);
}

TEST(MatGroups, ConjugacyClass) {
  auto G = group_by_key("sl2r");
  Mat rep(2, 2);
  rep << 2, 0, 0, 0.5;
  HSpec c = hs_conj_class(rep);
  EXPECT_FALSE(is_subgroup(c));
  EXPECT_TRUE(inverse_closed(G, c));
  for (std::uint64_t s = 0; s < 10; ++s) EXPECT_TRUE(contains(G, c, sample(G, c, s)));
  EXPECT_FALSE(contains(G, c, sample(G, hs_full(), 1)));
  auto G3 = group_by_key("sl3r");
  Mat rep3 = Mat::Zero(3, 3);
  rep3.diagonal() << 2, 3, 1.0 / 6.0;
  EXPECT_FALSE(inverse_closed(G3, hs_conj_class(rep3)));
  EXPECT_THROW(subalgebra_basis(G, c), std::invalid_argument);
}

TEST(MatGroups, InvertedSpec) {
  auto G = group_by_key("sl2r");
  Mat rep(2, 2);
  rep << 2, 1, 0, 0.5;
  HSpec ci = hs_inverse(hs_conj_class(rep));
  EXPECT_TRUE(contains(G, ci, rep.inverse()));
  EXPECT_TRUE(contains(G, ci, sample(G, ci, 3)));
}

TEST(MatGroups, GaussFactorization) {
  auto D = pair_group(group_by_key("sl2r"));
  auto I = Mat::Identity(4, 4);
  auto f = gauss_factorize(D, I);
  EXPECT_LT(max_abs(f.a - Mat::Identity(2, 2)), 1e-14);
  EXPECT_LT(max_abs(f.dual_part() - I), 1e-14);
  Mat a = sample(D, hs_diagonal(), 1);
  f = gauss_factorize(D, a);
  EXPECT_LT(max_abs(f.diag_part() - a), 1e-10);
  EXPECT_LT(max_abs(f.dual_part() - I), 1e-10);
  Mat b = sample(D, hs_dual(), 2);
  f = gauss_factorize(D, b);
  EXPECT_LT(max_abs(f.diag_part() - I), 1e-10);
  EXPECT_LT(max_abs(f.dual_part() - b), 1e-10);
  int ok = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Mat g = sample(D, hs_full(), s);
    try {
      f = gauss_factorize(D, g);
    } catch (const OffCellError&) {
      continue;  // real big cell is only dense
    }
    ++ok;
    EXPECT_LE(f.residual, 1e-9);
    EXPECT_TRUE(contains(D, hs_dual(), f.dual_part()));
    EXPECT_TRUE(contains(D, hs_diagonal(), f.diag_part()));
  }
  EXPECT_GE(ok, 40);
  Mat w = Mat::Zero(4, 4);
  w(0, 0) = w(1, 1) = 1;
  w(2, 3) = 1;
  w(3, 2) = -1;
  EXPECT_THROW(gauss_factorize(D, w), OffCellError);
  auto Dc = pair_group(group_by_key("sl3c"));
  for (std::uint64_t s = 0; s < 20; ++s) {
    f = gauss_factorize(Dc, sample(Dc, hs_full(), s));
    EXPECT_LE(f.residual, 1e-9);
    EXPECT_TRUE(contains(Dc, hs_dual(), f.dual_part()));
  }
}

TEST(MatGroups, AdjointMatrix) {
  auto G = group_by_key("sl2c");
  auto ma = lie_algebra(G);
  Mat g = sample(G, hs_full(), 4), h = sample(G, hs_full(), 5);
  EXPECT_LT(max_abs(ma.Ad(g * h) - ma.Ad(g) * ma.Ad(h)), 1e-12);
  // Ad preserves the trace form
  Mat A = ma.Ad(g);
  EXPECT_LT(max_abs(A.transpose() * ma.alg->form * A - ma.alg->form), 1e-12);
}

TEST(MatGroups, TwoGroups) {
  auto G = group_by_key("sl2r");
  auto pair = pair_two_group(G);
  auto r = check_group_crossed_module(pair.cm, 50, 1);
  EXPECT_LE(r.cm1, 1e-12);
  EXPECT_LE(r.cm2, 1e-12);
  EXPECT_LE(two_group_interchange_residual(pair, 50, 2), 1e-10);
  Mat a = sample(G, hs_full(), 1), x = sample(G, hs_full(), 2);
  EXPECT_LT(max_abs(pair.target({a, x}) - a * x), 1e-15);
  auto aut = automorphism_two_group(G);
  r = check_group_crossed_module(aut.cm, 50, 3);
  EXPECT_LE(r.cm1, 1e-12);
  EXPECT_LE(r.cm2, 1e-12);
  EXPECT_LE(two_group_interchange_residual(aut, 30, 4), 1e-10);
}
