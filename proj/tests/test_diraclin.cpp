#include <gtest/gtest.h>

#include <random>

#include "modlab/diraclin.hpp"
#include "test_util.hpp"

using namespace modlab;

namespace {

Mat random_orthogonal(int n, std::mt19937_64& rng) {
  Mat a = modlab::testing::random_real(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ() * Mat::Identity(n, n);
}

// boost in R^2 with form diag(1, -1)
Mat boost(double t) {
  Mat b(2, 2);
  b << std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t);
  return b;
}

std::vector<Mat> polygon_point(const MatrixGroup& G, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Mat> pt;
  Mat prod = Mat::Identity(G.size(), G.size());
  for (int k = 0; k + 1 < n; ++k) {
    pt.push_back(sample(G, hs_full(), rng));
    prod = pt.back() * prod;
  }
  pt.push_back(prod.inverse());
  return pt;
}

}  // namespace

TEST(DiracLin, GraphCompositionIsGraphOfComposite) {
  std::mt19937_64 rng(1);
  MetricVS E = metric_vs(Mat::Identity(3, 3));
  for (int t = 0; t < 10; ++t) {
    Mat f = random_orthogonal(3, rng), g = random_orthogonal(3, rng);
    auto c = compose(graph_relation(E, E, g), graph_relation(E, E, f));
    EXPECT_TRUE(c.clean);
    EXPECT_EQ(c.kernel_dim, 0);
    EXPECT_TRUE(same_span(c.rel.basis, graph_relation(E, E, f * g).basis, 1e-10));
    auto id = compose(graph_relation(E, E, f), identity_relation(E));
    EXPECT_TRUE(same_span(id.rel.basis, graph_relation(E, E, f).basis, 1e-10));
  }
}

TEST(DiracLin, SplitPlaneCompositionMatchesEliminationOracle) {
  MetricVS E = metric_vs(Mat(Eigen::Vector2cd(1, -1).asDiagonal()));
  auto r = graph_relation(E, E, boost(0.3));
  auto s = graph_relation(E, E, boost(-0.7));
  auto c = compose(r, s);
  // oracle: kernel of [R_E'; -S_E'] via a real full-pivot LU
  RMat M(2, 4);
  M << r.basis.bottomRows(2).real(), -s.basis.topRows(2).real();
  Eigen::FullPivLU<RMat> lu(M);
  EXPECT_EQ(c.fiber_dim, static_cast<int>(lu.dimensionOfKernel()));
  EXPECT_EQ(c.rel.dim(), 2);
  EXPECT_TRUE(c.clean);
  EXPECT_TRUE(same_span(c.rel.basis, graph_relation(E, E, boost(-0.4)).basis, 1e-10));
}

TEST(DiracLin, KernelDiagnosticsForLagrangianPairs) {
  MetricVS E = metric_vs(Mat(Eigen::Vector4cd(1, 1, -1, -1).asDiagonal()));
  Mat L1(4, 2), L2(4, 2);
  L1 << 1, 0, 0, 1, 1, 0, 0, 1;   // diagonal
  L2 << 1, 0, 0, 1, 1, 0, 0, -1;  // meets the diagonal in a line
  LagRelation in{zero_space(), E, L1};
  auto c = compose(in, subspace_relation(E, L2));
  EXPECT_EQ(c.fiber_dim, 1);
  EXPECT_EQ(c.kernel_dim, 1);
  EXPECT_EQ(c.rel.dim(), 0);
  EXPECT_TRUE(c.clean);
}

TEST(DiracLin, CompositionAssociativityProperty) {
  std::mt19937_64 rng(2);
  MetricVS E = metric_vs(Mat::Identity(4, 4));
  for (int t = 0; t < 20; ++t) {
    auto a = graph_relation(E, E, random_orthogonal(4, rng));
    auto b = graph_relation(E, E, random_orthogonal(4, rng));
    auto c = graph_relation(E, E, random_orthogonal(4, rng));
    auto left = compose(compose(a, b).rel, c);
    auto right = compose(a, compose(b, c).rel);
    EXPECT_TRUE(left.clean && right.clean);
    EXPECT_TRUE(same_span(left.rel.basis, right.rel.basis, 1e-9));
  }
}

TEST(DiracLin, LoopAnchorAtIdentity) {
  auto ma = lie_algebra(group_by_key("sl2r"));
  auto p = new_polygon(1);
  auto cf = cartan_fiber(p.graph, ma, {Mat::Identity(2, 2)});
  Mat expect = hstack({Mat(-Mat::Identity(3, 3)), Mat(Mat::Identity(3, 3))});
  EXPECT_LT(max_abs(cf.anchor - expect), 1e-14);
}

TEST(DiracLin, AnchorMatchesFiniteDifferenceOfGaugeAction) {
  auto G = group_by_key("sl2r");
  auto ma = lie_algebra(G);
  auto p = new_polygon(3);
  std::mt19937_64 rng(3);
  std::vector<Mat> pt;
  for (int e = 0; e < 3; ++e) pt.push_back(sample(G, hs_full(), rng));
  auto cf = cartan_fiber(p.graph, ma, pt);
  const double h = 1e-5;
  double worst = 0;
  for (int v = 0; v < 3; ++v)
    for (int i = 0; i < 3; ++i) {
      Vec col = Vec::Zero(18);
      col(6 * v + i) = 1;
      col(6 * v + 3 + i) = 1;
      Vec an = cf.anchor * col;
      for (int e = 0; e < 3; ++e) {
        auto act = [&](double t) {
          Mat gT = p.graph.tgt[e] == v ? expm(t * ma.basis[i]) : Mat::Identity(2, 2);
          Mat gS = p.graph.src[e] == v ? expm(t * ma.basis[i]) : Mat::Identity(2, 2);
          return Mat(gT * pt[e] * gS.inverse());
        };
        Mat deriv = (act(h) - act(-h)) / (2 * h);
        Vec fd = ma.coords(deriv * pt[e].inverse());
        worst = std::max(worst, max_abs(fd - an.segment(3 * e, 3)));
      }
    }
  EXPECT_LE(worst, 1e-6);
}

TEST(DiracLin, SignPatternForTriangle) {
  // edge e1 runs v3 -> v1: its row carries +1 at Y_{v1} and -Ad at X_{v3}
  auto ma = lie_algebra(group_by_key("sl2r"));
  auto p = new_polygon(3);
  std::vector<Mat> pt(3, Mat::Identity(2, 2));
  auto cf = cartan_fiber(p.graph, ma, pt);
  EXPECT_LT(max_abs(cf.anchor.block(0, 2 * 3 * 0 + 3, 3, 3) - Mat::Identity(3, 3)), 1e-15);
  EXPECT_LT(max_abs(cf.anchor.block(0, 2 * 3 * 2, 3, 3) + Mat::Identity(3, 3)), 1e-15);
  EXPECT_LT(max_abs(cf.anchor.block(0, 2 * 3 * 1, 3, 6)), 1e-15);
}

TEST(DiracLin, DiagonalFiberAndAnchorRank) {
  auto G = group_by_key("sl2r");
  auto ma = lie_algebra(G);
  auto p = new_polygon(3);
  Mat form = dV_form(ma, 3);
  Mat L = diagonal_fiber(ma, 3);
  EXPECT_LT(max_abs(L.transpose() * form * L), 1e-14);
  std::mt19937_64 rng(4);
  std::vector<Mat> generic;
  for (int e = 0; e < 3; ++e) generic.push_back(sample(G, hs_full(), rng));
  // stabilizer of a generic point is the centralizer of its holonomy: dimension 1
  EXPECT_EQ(numeric_rank(cartan_fiber(p.graph, ma, generic).anchor * L), 9 - 1);
  auto onM = polygon_point(G, 3, 5);
  EXPECT_EQ(numeric_rank(cartan_fiber(p.graph, ma, onM).anchor * L), 9 - 3);
  // stabilizers are coisotropic: a a^* = 0
  Mat A = cartan_fiber(p.graph, ma, generic).anchor;
  EXPECT_LT(max_abs(A * form.inverse() * A.transpose()), 1e-12);
}

TEST(DiracLin, ComplementFiber) {
  auto ma = lie_algebra(group_by_key("sl2r"));
  for (int n = 1; n <= 3; ++n) {
    auto p = new_polygon(n);
    Mat A = lagrangian_complement_fiber(p.graph, ma);
    Mat form = dV_form(ma, n);
    EXPECT_LT(max_abs(A.transpose() * form * A), 1e-14);
    EXPECT_EQ(2 * A.cols(), form.rows());
    EXPECT_EQ(numeric_rank(hstack({A, diagonal_fiber(ma, n)})), form.rows());
  }
}

TEST(DiracLin, PolygonFiberAtIdentity) {
  auto ma = lie_algebra(group_by_key("sl2r"));
  auto p = new_polygon(3);
  auto pf = polygon_morphism_fiber(p, ma, std::vector<Mat>(3, Mat::Identity(2, 2)));
  auto cert = certify(pf.R);
  EXPECT_TRUE(cert.pass);
  EXPECT_EQ(pf.R.dim(), (2 * 6 + 18) / 2);
  std::vector<Mat> bad(3, Mat::Identity(2, 2));
  bad[0](0, 1) = 1;
  EXPECT_THROW(polygon_morphism_fiber(p, ma, bad), std::invalid_argument);
}

TEST(DiracLin, PolygonFiberCompositions) {
  for (const char* key : {"sl2r", "sl2c"})
    for (int n = 3; n <= 5; ++n) {
      auto G = group_by_key(key);
      auto ma = lie_algebra(G);
      auto p = new_polygon(n);
      auto pt = polygon_point(G, n, 10 + n);
      auto pf = polygon_morphism_fiber(p, ma, pt);
      EXPECT_TRUE(certify(pf.R).pass);
      EXPECT_LT(pf.chart_residual, 1e-12);
      const int m = (n - 1) * 3;
      auto L = compose(pf.R, subspace_relation(pf.cartan.space, diagonal_fiber(ma, n)));
      EXPECT_TRUE(L.clean);
      Mat ker = dirac_kernel(L.rel);
      EXPECT_EQ(ker.cols(), m);  // the gauge orbit is open in M
      auto A = compose(pf.R, subspace_relation(pf.cartan.space, lagrangian_complement_fiber(p.graph, ma)));
      EXPECT_TRUE(A.clean);
      auto bv = extract_bivector(A.rel);
      EXPECT_LE(bv.antisymmetry, 1e-10);
    }
}

TEST(DiracLin, BivectorGaugeEquivariance) {
  auto G = group_by_key("sl2c");
  auto ma = lie_algebra(G);
  auto p = new_polygon(4);
  auto pt = polygon_point(G, 4, 21);
  auto pi_at = [&](const std::vector<Mat>& x) {
    auto pf = polygon_morphism_fiber(p, ma, x);
    auto A = compose(pf.R, subspace_relation(pf.cartan.space, lagrangian_complement_fiber(p.graph, ma)));
    return extract_bivector(A.rel).P;
  };
  Mat P = pi_at(pt);
  std::mt19937_64 rng(22);
  for (int t = 0; t < 5; ++t) {
    std::vector<Mat> k;
    for (int v = 0; v < 4; ++v) k.push_back(sample(G, hs_full(), rng));
    std::vector<Mat> moved;
    for (int e = 0; e < 4; ++e) moved.push_back(k[p.graph.tgt[e]] * pt[e] * k[p.graph.src[e]].inverse());
    std::vector<Mat> blocks;
    for (int e = 0; e < 3; ++e) blocks.push_back(ma.Ad(k[p.graph.tgt[e]]));
    Mat D = block_diag(blocks);
    EXPECT_LT(max_abs(pi_at(moved) - D * P * D.transpose()), 1e-8);
  }
}

TEST(DiracLin, ZeroBivector) {
  MetricVS T = tangent_cotangent(2);
  Mat basis = Mat::Zero(4, 2);
  basis.bottomRows(2) = Mat::Identity(2, 2);
  auto bv = extract_bivector(LagRelation{T, zero_space(), basis});
  EXPECT_EQ(max_abs(bv.P), 0.0);
  Mat tangent = Mat::Zero(4, 2);
  tangent.topRows(2) = Mat::Identity(2, 2);
  EXPECT_THROW(extract_bivector(LagRelation{T, zero_space(), tangent}), std::domain_error);
}

TEST(DiracLin, KernelRankIsScaledByTheWholeRelation) {
  MetricVS T = tangent_cotangent(2);
  Mat basis = Mat::Zero(4, 2);
  basis.topRows(2) = Mat::Identity(2, 2);
  basis(2, 0) = 3e-13;
  basis(3, 1) = -2e-13;
  // roundoff-sized cotangent part: the relation is TM up to noise
  EXPECT_EQ(dirac_kernel(LagRelation{T, zero_space(), basis}).cols(), 2);
  basis(2, 0) = 0.5;
  EXPECT_EQ(dirac_kernel(LagRelation{T, zero_space(), basis}).cols(), 1);
}
