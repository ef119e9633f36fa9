#include <gtest/gtest.h>

#include <random>

#include "modlab/fixtures.hpp"
#include "modlab/repmoduli.hpp"

using namespace modlab;

namespace {

ModuliSpec free_polygon(int n, const MatrixGroup& G) {
  MarkedSurface s = new_polygon(n);
  MatrixAlgebra ma = lie_algebra(G);
  AlgPtr d = std::make_shared<QuadLieAlgebra>(double_algebra(*ma.alg));
  Decoration deco;
  deco.edges.assign(n, hs_full());
  deco.vertices.assign(n, diagonal(d));
  return polygon_moduli(s, G, deco);
}

GluedModuliSpec glued(const GluedExample& ex) { return glued_moduli(ex.gm, ex.G, ex.deco); }

bool in_hat(const GluedModuliSpec& spec, const std::vector<Mat>& phi) {
  Decoration hat = symmetric_decoration(spec.deco, spec.gm);
  for (std::size_t e = 0; e < phi.size(); ++e)
    if (!contains(spec.G, hat.edges[e], phi[e])) return false;
  return true;
}

}  // namespace

TEST(RepModuli, MomentIsRestriction) {
  const MatrixGroup G = group_by_key("sl2r");
  const Mat g1 = sample(G, hs_full(), 1), g2 = sample(G, hs_full(), 2);
  RepPoint rep{{g1, g2, (g2 * g1).inverse()}, {}};
  EXPECT_LE(relation_residual(new_polygon(3), rep), 1e-12);
  auto mu = moment(rep);
  ASSERT_EQ(mu.size(), 3u);
  EXPECT_LE(max_abs(mu[0] - g1) + max_abs(mu[1] - g2), 0.0);
  RepPoint id{{Mat::Identity(2, 2), Mat::Identity(2, 2)}, {}};
  for (const auto& m : moment(id)) EXPECT_LE(max_abs(m - Mat::Identity(2, 2)), 0.0);
}

TEST(RepModuli, GluedMomentAgreesOnS) {
  auto spec = glued(example_poigro0(group_by_key("sl2r")));
  std::mt19937_64 rng(3);
  auto pt = sample_constrained(spec, rng);
  auto [ma, mb] = moment(pt);
  EXPECT_LE(max_abs(ma[3] - mb[3]), 1e-12);
}

TEST(RepModuli, GaugeActionPattern) {
  const MatrixGroup G = group_by_key("sl2r");
  auto spec = free_polygon(3, G);
  std::mt19937_64 rng(4);
  RepPoint rep = sample_constrained(spec, rng);
  GaugeElement one(3, Mat::Identity(2, 2));
  auto same = gauge_act(spec.surface, one, rep);
  for (int e = 0; e < 3; ++e) EXPECT_LE(max_abs(same.edges[e] - rep.edges[e]), 0.0);
  GaugeElement g = sample_gauge(G, spec.K, rng);
  auto moved = gauge_act(spec.surface, g, rep);
  // e1: v3 -> v1, e2: v1 -> v2, e3: v2 -> v3
  EXPECT_LE(max_abs(moved.edges[0] - g[0] * rep.edges[0] * g[2].inverse()), 1e-12);
  EXPECT_LE(max_abs(moved.edges[1] - g[1] * rep.edges[1] * g[0].inverse()), 1e-12);
  EXPECT_LE(max_abs(moved.edges[2] - g[2] * rep.edges[2] * g[1].inverse()), 1e-12);
  EXPECT_LE(relation_residual(spec.surface, moved), 1e-12);
}

TEST(RepModuli, MomentEquivarianceProperty) {
  for (const char* key : {"sl2r", "sl2c", "sl3r"}) {
    const MatrixGroup G = group_by_key(key);
    for (int n = 2; n <= 6; ++n) {
      auto spec = free_polygon(n, G);
      std::mt19937_64 rng(100 + n);
      for (int t = 0; t < 5; ++t) {
        RepPoint rep = sample_constrained(spec, rng);
        GaugeElement g = sample_gauge(G, spec.K, rng);
        auto mu = moment(gauge_act(spec.surface, g, rep));
        for (int e = 0; e < n; ++e) {
          const Mat expect = g[spec.surface.graph.tgt[e]] * rep.edges[e] * g[spec.surface.graph.src[e]].inverse();
          EXPECT_LE(max_abs(mu[e] - expect), 1e-12);
        }
      }
    }
  }
}

TEST(RepModuli, PolygonSamplerRespectsDecoration) {
  const MatrixGroup simple = group_by_key("sl2r");
  ManinTriple m = manin_triple(simple);
  Decoration d;
  d.edges = {m.A(), m.B(), hs_full(), m.B()};
  d.vertices.assign(4, m.diag());
  auto spec = polygon_moduli(new_polygon(4), m.G, d);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    RepPoint rep = sample_constrained(spec, rng);
    EXPECT_TRUE(satisfies(spec, rep));
  }
  std::mt19937_64 r1(9), r2(9);
  RepPoint x = sample_constrained(spec, r1), y = sample_constrained(spec, r2);
  for (int e = 0; e < 4; ++e) EXPECT_TRUE(x.edges[e] == y.edges[e]);
  d.edges[2] = m.A();
  auto rigid = polygon_moduli(new_polygon(4), m.G, d);
  std::mt19937_64 rng(1);
  EXPECT_THROW(sample_constrained(rigid, rng), std::invalid_argument);
}

TEST(RepModuli, Poigro0SamplerConstraints) {
  auto spec = glued(example_poigro0(group_by_key("sl2r")));
  ManinTriple m = manin_triple(group_by_key("sl2r"));
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    auto pt = sample_constrained(spec, rng);
    EXPECT_LE(constraint_residual(spec, pt), 1e-9);
    EXPECT_LE(membership_residual(m.G, m.A(), pt.a.edges[1]), 1e-9);
    EXPECT_LE(membership_residual(m.G, m.A(), pt.b.edges[1]), 1e-9);
    EXPECT_LE(max_abs(pt.a.edges[3] - pt.b.edges[3]), 1e-12);
    EXPECT_LE(membership_residual(m.G, m.B(), chart_poigro0(pt)), 1e-9);
  }
  std::mt19937_64 r1(5), r2(5);
  auto x = sample_constrained(spec, r1), y = sample_constrained(spec, r2);
  for (int e = 0; e < 4; ++e) EXPECT_TRUE(x.a.edges[e] == y.a.edges[e] && x.b.edges[e] == y.b.edges[e]);
}

TEST(RepModuli, ConditionalSamplersKeepGivenCopy) {
  auto spec = glued(example_poigro0(group_by_key("sl2r")));
  std::mt19937_64 rng(12);
  auto pt = sample_constrained(spec, rng);
  auto f = sample_with_first(spec, pt.b, rng);
  auto s = sample_with_second(spec, pt.a, rng);
  EXPECT_LE(constraint_residual(spec, f), 1e-9);
  EXPECT_LE(constraint_residual(spec, s), 1e-9);
  for (int e = 0; e < 4; ++e) {
    EXPECT_TRUE(f.a.edges[e] == pt.b.edges[e]);
    EXPECT_TRUE(s.b.edges[e] == pt.a.edges[e]);
  }
}

TEST(RepModuli, KernelGaugeOfPoigro0) {
  auto spec = glued(example_poigro0(group_by_key("sl2r")));
  EXPECT_EQ(subalgebra_basis(spec.G, spec.K.K[0]).size(), 3u);
  EXPECT_EQ(spec.K.K[1].kind, HSpec::Kind::Trivial);
  EXPECT_TRUE(spec.K.shared[2] && spec.K.shared[3]);
  EXPECT_FALSE(spec.K.shared[0] || spec.K.shared[1]);
  std::mt19937_64 rng(1);
  auto g = sample_gauge(spec, rng);
  EXPECT_TRUE(contains(spec.G, hs_diagonal(), g.a[0]));
}

TEST(RepModuli, ChartsAreGaugeInvariant) {
  const MatrixGroup simple = group_by_key("sl2r");
  std::mt19937_64 rng(21);
  auto bigon = glued(example_poigr(simple));
  auto square = glued(example_poigro0(simple));
  for (int t = 0; t < 20; ++t) {
    auto pt = sample_constrained(bigon, rng);
    auto moved = gauge_act(bigon.gm, sample_gauge(bigon, rng), pt);
    EXPECT_LE(max_abs(chart_poigr(moved) - chart_poigr(pt)), 1e-9);
    auto q = sample_constrained(square, rng);
    auto qm = gauge_act(square.gm, sample_gauge(square, rng), q);
    EXPECT_LE(max_abs(chart_poigro0(qm) - chart_poigro0(q)), 1e-9);
  }
  auto pt = sample_constrained(bigon, rng);
  GluedRepPoint diag{pt.a, pt.a};
  EXPECT_LE(constraint_residual(bigon, diag), 1e-9);
  EXPECT_LE(max_abs(chart_poigr(diag) - Mat::Identity(4, 4)), 1e-12);
}

TEST(RepModuli, BruhatChartInvariance) {
  auto spec = glued(example_brucel());
  EXPECT_EQ(subalgebra_basis(spec.G, spec.K.K[0]).size(), 2u);
  EXPECT_TRUE(contains(spec.G, spec.K.K[0], sample(spec.G, hs_borel_upper(), 7)));
  EXPECT_EQ(spec.K.K[3].kind, HSpec::Kind::Trivial);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    auto pt = sample_constrained(spec, rng);
    EXPECT_LE(constraint_residual(spec, pt), 1e-9);
    auto moved = gauge_act(spec.gm, sample_gauge(spec, rng), pt);
    auto x = chart_brucel_psi(pt), y = chart_brucel_psi(moved);
    EXPECT_TRUE(same_coset_upper(x.coset, y.coset));
    EXPECT_LE(coset_chart_distance(x, y), 1e-8);
  }
  Mat u = Mat::Identity(2, 2);
  u(0, 1) = 3;
  Mat l = Mat::Identity(2, 2);
  l(1, 0) = 1;
  EXPECT_TRUE(same_coset_upper(Mat::Identity(2, 2), u));
  EXPECT_FALSE(same_coset_upper(Mat::Identity(2, 2), l));
}

TEST(RepModuli, PhiMapMatchesGluedConstraints) {
  for (const auto& ex : {example_poigr(group_by_key("sl2r")), example_poigro0(group_by_key("sl2r")), example_brucel()}) {
    auto spec = glued(ex);
    std::mt19937_64 rng(41);
    for (int t = 0; t < 10; ++t) {
      auto pt = sample_constrained(spec, rng);
      auto phi = phi_map(pt, spec.gm);
      EXPECT_TRUE(in_hat(spec, phi));
      EXPECT_TRUE(satisfies(spec, pt));
      EXPECT_LE(relation_residual(spec.gm.hat, RepPoint{phi, {}}), 1e-9);
    }
  }
  // violating fixture: perturb a constrained edge of the square off its subgroup
  auto spec = glued(example_poigro0(group_by_key("sl2r")));
  std::mt19937_64 rng(42);
  for (int t = 0; t < 10; ++t) {
    auto pt = sample_constrained(spec, rng);
    Mat off = sample(spec.G, hs_full(), rng);
    pt.b.edges[2] = pt.b.edges[2] * off;
    EXPECT_FALSE(satisfies(spec, pt));
    EXPECT_FALSE(in_hat(spec, phi_map(pt, spec.gm)));
  }
}

TEST(RepModuli, BigonPhiIsChartInvariant) {
  auto spec = glued(example_poigr(group_by_key("sl2r")));
  std::mt19937_64 rng(43);
  auto pt = sample_constrained(spec, rng);
  auto phi = phi_map(pt, spec.gm);
  ASSERT_EQ(phi.size(), 2u);
  const Mat c = chart_poigr(pt);
  EXPECT_TRUE(max_abs(phi[0] - c) <= 1e-12 || max_abs(phi[1] - c) <= 1e-12);
  GluedRepPoint same{pt.a, pt.a};
  for (const auto& m : phi_map(same, spec.gm)) EXPECT_LE(max_abs(m - Mat::Identity(4, 4)), 1e-12);
}

TEST(RepModuli, SameOrbitTiers) {
  auto spec = glued(example_poigro0(group_by_key("sl2r")));
  const GaugeProblem p = gauge_problem(spec);
  std::mt19937_64 rng(51);
  for (int t = 0; t < 5; ++t) {
    auto pt = sample_constrained(spec, rng);
    auto moved = gauge_act(spec.gm, sample_gauge(spec, rng), pt);
    auto v = same_orbit(p, flatten(pt), flatten(moved));
    EXPECT_EQ(v.verdict, Verdict::True);
    EXPECT_EQ(v.tier, 2);
    EXPECT_LE(v.residual, 1e-8);
  }
  const int ne = spec.gm.base.graph.ne();
  ChartDistance chart = [&](const std::vector<Mat>& x, const std::vector<Mat>& y) {
    return max_abs(chart_poigro0(unflatten(x, ne)) - chart_poigro0(unflatten(y, ne)));
  };
  auto x = sample_constrained(spec, rng), y = sample_constrained(spec, rng);
  auto v = same_orbit(p, flatten(x), flatten(y), chart);
  EXPECT_EQ(v.verdict, Verdict::False);
  EXPECT_EQ(v.tier, 1);
  auto w = same_orbit(p, flatten(x), flatten(y));
  EXPECT_EQ(w.verdict, Verdict::Unknown);
  EXPECT_EQ(w.tier, 3);
}

TEST(RepModuli, TangentTierSeparatesTransverseMoves) {
  const MatrixGroup G = group_by_key("sl2r");
  auto spec = free_polygon(3, G);
  // a torus at each vertex has 3-dimensional orbits inside the 6-dimensional space
  const GaugeProblem p = gauge_problem(spec.surface, G, GaugeSpec{std::vector<HSpec>(3, hs_torus())});
  std::mt19937_64 rng(61);
  RepPoint rep = sample_constrained(spec, rng);
  MatrixAlgebra ma = lie_algebra(G);
  std::vector<Mat> y = rep.edges;
  y[0] = y[0] * expm(1e-5 * ma.basis[1]);
  y[2] = (y[1] * y[0]).inverse();
  auto v = same_orbit(p, rep.edges, y);
  EXPECT_EQ(v.tier, 3);
  EXPECT_EQ(v.verdict, Verdict::False);
}

TEST(RepModuli, OrbitTangentDimensions) {
  for (const char* key : {"sl2r", "sl3r"}) {
    const MatrixGroup G = group_by_key(key);
    MatrixAlgebra ma = lie_algebra(G);
    for (int n = 2; n <= 5; ++n) {
      auto spec = free_polygon(n, G);
      std::mt19937_64 rng(70 + n);
      RepPoint rep = sample_constrained(spec, rng);
      const Mat T = orbit_tangent(gauge_problem(spec.surface, G, spec.K), ma, rep.edges);
      EXPECT_EQ(numeric_rank(T), n * ma.dim() - ma.dim()) << key << " n=" << n;
    }
  }
  const MatrixGroup G = group_by_key("sl2r");
  GaugeSpec none{std::vector<HSpec>(3, hs_trivial())};
  auto spec = free_polygon(3, G);
  std::mt19937_64 rng(1);
  RepPoint rep = sample_constrained(spec, rng);
  EXPECT_EQ(orbit_tangent(gauge_problem(spec.surface, G, none), lie_algebra(G), rep.edges).cols(), 0);

  auto sq = glued(example_poigro0(G));
  MatrixAlgebra ma = lie_algebra(sq.G);
  for (int t = 0; t < 5; ++t) {
    auto pt = sample_constrained(sq, rng);
    EXPECT_EQ(numeric_rank(orbit_tangent(gauge_problem(sq), ma, flatten(pt))), 2 * 6 + 2 * 3);
  }
}

TEST(RepModuli, Dousym2SamplerAndChart) {
  Dousym2Spec spec{pair_group(group_by_key("sl2r"))};
  std::mt19937_64 rng(81);
  int drawn = 0;
  for (int t = 0; t < 50; ++t) {
    QuadRepPoint q;
    try {
      q = sample_dousym2(spec, rng);
    } catch (const OffCellError&) {
      continue;
    }
    ++drawn;
    EXPECT_LE(dousym2_constraint_residual(spec, q), 1e-9);
    auto c = chart_dousym2(q);
    EXPECT_LE(max_abs(c[1] * c[2] - c[0] * c[3]), 1e-9);
    EXPECT_LE(membership_residual(spec.G, hs_dual(), c[0]), 1e-9);
    EXPECT_LE(membership_residual(spec.G, hs_diagonal(), c[1]), 1e-9);
  }
  EXPECT_GE(drawn, 45);
}

TEST(RepModuli, JsonRoundTrip) {
  const MatrixGroup G = group_by_key("sl2c");
  auto spec = free_polygon(3, G);
  std::mt19937_64 rng(91);
  RepPoint rep = sample_constrained(spec, rng);
  RepPoint back = rep_from_json(rep_to_json(rep));
  ASSERT_EQ(back.edges.size(), 3u);
  for (int e = 0; e < 3; ++e) EXPECT_LE(max_abs(back.edges[e] - rep.edges[e]), 1e-15);
  EXPECT_THROW(rep_from_json("{\"edges\": [[[1, 2], [3]]]}"), std::invalid_argument);
}
