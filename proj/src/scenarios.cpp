#include "modlab/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "modlab/fixtures.hpp"
#include "modlab/groupoids.hpp"
#include "modlab/kernels.hpp"
#include "modlab/poissoncheck.hpp"

#ifndef MODLAB_VERSION
#define MODLAB_VERSION "0.0.0"
#endif

namespace modlab {

namespace {

struct Spec {
  std::string name;
  double tol = 0;
  bool control = false;
  std::function<CheckReport(int samples, std::uint64_t seed)> run;
};
using Suite = std::vector<Spec>;

struct Recipe {
  std::string default_group;
  std::vector<std::string> groups;
  int default_samples = 20;
  std::function<Suite(const MatrixGroup&)> suite;
};

AlgPtr share(QuadLieAlgebra g) { return std::make_shared<QuadLieAlgebra>(std::move(g)); }

CheckReport single(double residual) {
  CheckReport r;
  r.samples = 1;
  r.max_residual = residual;
  return r;
}

CheckReport sampled(int n, std::uint64_t seed, const std::function<double(std::mt19937_64&)>& f) {
  CheckReport r;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n; ++i) {
    r.max_residual = std::max(r.max_residual, f(rng));
    ++r.samples;
  }
  return r;
}

// controls report the smallest residual so that every sample must be rejected
CheckReport sampled_min(int n, std::uint64_t seed, const std::function<double(std::mt19937_64&)>& f) {
  CheckReport r;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n; ++i) {
    const double v = f(rng);
    r.max_residual = r.samples == 0 ? v : std::min(r.max_residual, v);
    ++r.samples;
  }
  return r;
}

CheckReport part(const CheckReport& src, const std::string& key) {
  CheckReport r;
  r.samples = src.samples;
  r.discarded = src.discarded;
  r.max_residual = src.parts.count(key) ? src.parts.at(key) : 0.0;
  return r;
}

BivectorField pi_g(const MatrixAlgebra& ma) {
  return poisson_lie_bivector(ma, standard_r_matrix(*ma.alg, sl_root_data(ma.grp.n)));
}

std::vector<GroupPoint> group_points(const MatrixAlgebra& ma, int factors, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GroupPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back(sample_point(ma, factors, rng));
  return pts;
}

GluedModuliSpec glued(const GluedExample& ex) { return glued_moduli(ex.gm, ex.G, ex.deco); }

// chart(m(x, y)) = chart(x) chart(y) and chart(u(x)) = 1
using GluedChart = std::function<Mat(const GluedRepPoint&)>;
CheckReport chart_intertwines(const GluedGroupoid& gg, const GluedChart& chart, int n, std::uint64_t seed) {
  return sampled(n, seed, [&](std::mt19937_64& rng) {
    Arrow x = gg.sampler.arrow(rng, nullptr);
    const int ne = static_cast<int>(x.size()) / 2;
    Object sx = gg.handle.s(x);
    Arrow y = gg.sampler.arrow(rng, &sx);
    const Mat cx = chart(unflatten(x, ne)), cy = chart(unflatten(y, ne));
    const Mat one = Mat::Identity(cx.rows(), cx.cols());
    return std::max(max_abs(chart(unflatten(gg.handle.m(x, y), ne)) - cx * cy),
                    max_abs(chart(unflatten(gg.handle.u(sx), ne)) - one));
  });
}

CheckReport chart_gauge_invariance(const GluedModuliSpec& spec, const GluedChart& chart, int n, std::uint64_t seed) {
  return sampled(n, seed, [&](std::mt19937_64& rng) {
    auto pt = sample_constrained(spec, rng);
    return max_abs(chart(gauge_act(spec.gm, sample_gauge(spec, rng), pt)) - chart(pt));
  });
}

GroupoidHandle perturbed_unit(GroupoidHandle h) {
  auto u = h.u;
  h.u = [u](const Object& x) {
    Arrow a = u(x);
    a[0] = 2.0 * a[0];
    return a;
  };
  return h;
}

double verdict_residual(const SubspaceVerdict& v) {
  return std::max({v.isotropy, v.closure, v.containment, v.pass ? 0.0 : 1.0});
}

Mat borel_coords(const MatrixAlgebra& ma) {
  std::vector<Mat> basis = subalgebra_basis(ma.grp, hs_borel_upper());
  Mat b(ma.dim(), static_cast<int>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) b.col(static_cast<int>(k)) = ma.coords(basis[k]);
  return b;
}

Suite glued_suite(const GluedExample& ex, const GluedChart& chart) {
  auto gg = std::make_shared<GluedGroupoid>(glued_moduli_groupoid(glued(ex)));
  return {
      {"groupoid-axioms", 1e-9, false,
       [gg](int n, std::uint64_t seed) { return check_axioms(gg->handle, gg->sampler, n, seed); }},
      {"chart-intertwines-multiplication", 1e-9, false,
       [gg, chart](int n, std::uint64_t seed) { return chart_intertwines(*gg, chart, n, seed); }},
      {"chart-gauge-invariance", 1e-9, false,
       [gg, chart](int n, std::uint64_t seed) { return chart_gauge_invariance(gg->spec, chart, n, seed); }},
      {"control-perturbed-unit", 1e-9, true,
       [gg](int n, std::uint64_t seed) { return check_axioms(perturbed_unit(gg->handle), gg->sampler, n, seed); }},
  };
}

Suite poisson_group_suite(const MatrixGroup& G) {
  const MatrixAlgebra ma = lie_algebra(G);
  return {
      {"poisson-group-multiplicative", 1e-9, false,
       [ma](int n, std::uint64_t seed) { return check_multiplicative_group(pi_g(ma), n, seed); }},
      {"poisson-group-jacobi", 1e-6, false,
       [ma](int n, std::uint64_t seed) { return check_jacobi(pi_g(ma), group_points(ma, 1, std::min(n, 20), seed)); }},
      {"poisson-group-identity", 0.0, false,
       [ma](int, std::uint64_t) {
         return single(max_abs(pi_g(ma)(GroupPoint{Mat::Identity(ma.grp.size(), ma.grp.size())})));
       }},
      {"control-shifted-bivector", 1e-9, true,
       [ma](int n, std::uint64_t seed) {
         std::mt19937_64 rng(seed);
         std::normal_distribution<double> nd;
         Mat C = Mat::NullaryExpr(ma.dim(), ma.dim(), [&]() { return cd(nd(rng), 0); });
         return check_multiplicative_group(shifted(pi_g(ma), C - C.transpose()), n, seed);
       }},
  };
}

Suite bigon_suite(const MatrixGroup& G) {
  Suite s = glued_suite(example_poigr(G), chart_poigr);
  for (auto& c : poisson_group_suite(G)) s.push_back(c);
  return s;
}

Suite square_suite(const MatrixGroup& G) {
  const GluedExample ex = example_poigro0(G);
  Suite s = glued_suite(ex, chart_poigro0);
  auto spec = std::make_shared<GluedModuliSpec>(glued(ex));
  s.push_back({"chart-in-dual-group", 1e-9, false, [spec](int n, std::uint64_t seed) {
                 return sampled(n, seed, [&](std::mt19937_64& rng) {
                   return membership_residual(spec->G, hs_dual(), chart_poigro0(sample_constrained(*spec, rng)));
                 });
               }});
  s.push_back({"sampler-constraints", 1e-9, false, [spec](int n, std::uint64_t seed) {
                 return sampled(n, seed,
                                [&](std::mt19937_64& rng) { return constraint_residual(*spec, sample_constrained(*spec, rng)); });
               }});
  s.push_back({"control-off-subgroup-edge", 1e-9, true, [spec](int n, std::uint64_t seed) {
                 return sampled_min(n, seed, [&](std::mt19937_64& rng) {
                   auto pt = sample_constrained(*spec, rng);
                   pt.b.edges[2] = pt.b.edges[2] * sample(spec->G, hs_full(), rng);
                   return constraint_residual(*spec, pt);
                 });
               }});
  return s;
}

Suite coisotropic_suite(const MatrixGroup& G) {
  const MatrixAlgebra ma = lie_algebra(G);
  auto g = ma.alg;
  auto d = share(double_algebra(*g));
  const Subspace borel = make_subspace(g, borel_coords(ma));
  auto nondegenerate = [](const std::vector<std::pair<int, std::vector<int>>>& cases) {
    double bad = 0;
    for (const auto& [n, S] : cases) bad += check_gluing_nondegenerate(new_polygon(n).graph, S).pass ? 0 : 1;
    return bad;
  };
  return {
      {"gluing-nondegenerate", 0.0, false,
       [nondegenerate](int, std::uint64_t) {
         return single(nondegenerate({{1, {0}}, {3, {2}}, {4, {3}}, {6, {0, 3}}}));
       }},
      {"coisotropic-subalgebras", 1e-10, false,
       [borel, g](int, std::uint64_t) {
         return single(std::max(verdict_residual(is_coisotropic(borel)), verdict_residual(is_coisotropic(whole(g)))));
       }},
      {"tilde-c-lagrangian", 1e-10, false,
       [borel, g, d](int, std::uint64_t) {
         double r = 0;
         for (const Subspace& c : {borel, whole(g)}) {
           const Subspace t = tilde_c(c, d);
           r = std::max({r, verdict_residual(is_lagrangian_subalgebra(t)),
                         verdict_residual(is_lagrangian_subalgebra(bar(t)))});
         }
         return single(r);
       }},
      {"multiplication-graph-coisotropic", 1e-8, false,
       [ma](int n, std::uint64_t seed) {
         auto fx = pair_multiplication_graph(pi_g(ma), -1);
         std::mt19937_64 rng(seed);
         std::vector<GroupPoint> pts;
         for (int i = 0; i < n; ++i) pts.push_back(fx.sample(rng));
         return check_coisotropic(fx.pi, fx.constraint, pts);
       }},
      {"control-flipped-sign-graph", 1e-8, true,
       [ma](int n, std::uint64_t seed) {
         auto fx = pair_multiplication_graph(pi_g(ma), +1);
         std::mt19937_64 rng(seed);
         std::vector<GroupPoint> pts;
         for (int i = 0; i < n; ++i) pts.push_back(fx.sample(rng));
         return check_coisotropic(fx.pi, fx.constraint, pts);
       }},
      {"control-non-coisotropic-nilradical", 1e-10, true,
       [borel](int, std::uint64_t) {
         return single(verdict_residual(is_coisotropic(orthocomplement(borel))));
       }},
      {"control-degenerate-gluing", 0.0, true,
       [nondegenerate](int, std::uint64_t) { return single(nondegenerate({{4, {1, 3}}})); }},
  };
}

Suite lu_weinstein_suite(const MatrixGroup& G) {
  auto lw = std::make_shared<DoubleGroupoidHandle>(lu_weinstein(G));
  auto dq = std::make_shared<DoubleGroupoidHandle>(dousym2_double_groupoid(G));
  auto lw_of = [](const QuadRepPoint& q) {
    auto c = chart_dousym2(q);
    return Arrow{c[0], c[1], c[2], c[3]};
  };
  return {
      {"lu-weinstein-double", 1e-9, false, [lw](int n, std::uint64_t seed) { return check_double(*lw, n, seed); }},
      {"lu-weinstein-constraint", 1e-10, false,
       [lw](int n, std::uint64_t seed) { return part(check_double(*lw, n, seed), "constraint"); }},
      {"four-fold-glued-double", 1e-9, false, [dq](int n, std::uint64_t seed) { return check_double(*dq, n, seed); }},
      {"chart-carries-four-fold-structure", 1e-9, false,
       [lw, dq, lw_of](int n, std::uint64_t seed) {
         CheckReport r;
         std::mt19937_64 rng(seed);
         for (int t = 0; t < n; ++t) {
           std::array<Arrow, 4> sq;
           try {
             sq = dq->square(rng);
           } catch (const OffCellError&) {
             ++r.discarded;
             continue;
           }
           const auto q11 = unflatten_quad(sq[0]), q12 = unflatten_quad(sq[1]), q21 = unflatten_quad(sq[2]);
           const Arrow h = lw_of(unflatten_quad(dq->h.m(sq[0], sq[1])));
           const Arrow v = lw_of(unflatten_quad(dq->v.m(sq[0], sq[2])));
           r.add("h-to-v", list_dist(h, lw->v.m(lw_of(q11), lw_of(q12))));
           r.add("v-to-h", list_dist(v, lw->h.m(lw_of(q11), lw_of(q21))));
           ++r.samples;
         }
         return r;
       }},
      {"control-perturbed-unit", 1e-9, true,
       [lw](int n, std::uint64_t seed) {
         DoubleGroupoidHandle broken = *lw;
         broken.h = perturbed_unit(broken.h);
         return check_double(broken, n, seed);
       }},
  };
}

Suite bruhat_suite(const MatrixGroup&) {
  auto gg = std::make_shared<GluedGroupoid>(glued_moduli_groupoid(glued(example_brucel())));
  auto sq = std::make_shared<BruhatSquare>(bruhat_square(2));
  return {
      {"glued-groupoid-axioms", 1e-9, false,
       [gg](int n, std::uint64_t seed) { return check_axioms(gg->handle, gg->sampler, n, seed); }},
      {"psi-chart-gauge-invariance", 1e-8, false,
       [gg](int n, std::uint64_t seed) {
         const GluedModuliSpec& spec = gg->spec;
         return sampled(n, seed, [&](std::mt19937_64& rng) {
           auto pt = sample_constrained(spec, rng);
           auto moved = gauge_act(spec.gm, sample_gauge(spec, rng), pt);
           const auto x = chart_brucel_psi(pt), y = chart_brucel_psi(moved);
           return std::max(coset_chart_distance(x, y), same_coset_upper(x.coset, y.coset) ? 0.0 : 1.0);
         });
       }},
      {"corner-lagrangians", 1e-10, false,
       [sq](int, std::uint64_t) {
         double r = 0;
         for (const Subspace& l : sq->corners) r = std::max(r, verdict_residual(is_lagrangian_subalgebra(l)));
         r = std::max(r, verdict_residual(is_coisotropic(make_subspace(sq->ma.alg, borel_coords(sq->ma)))));
         return single(r);
       }},
      {"pi-hat-antisymmetric", 1e-12, false,
       [sq](int n, std::uint64_t seed) {
         return sampled(n, seed, [&](std::mt19937_64& rng) {
           const Mat P = square_bivector_brucel(*sq, sample_bruhat_point(*sq, rng));
           return max_abs(P + P.transpose());
         });
       }},
      {"dirac-kernel-gauge-directions", 1e-8, false,
       [sq](int n, std::uint64_t seed) {
         // formula gaps are recorded in parts for calibration; only the kernel agreement is tested
         CheckReport r;
         std::mt19937_64 rng(seed);
         for (int i = 0; i < n; ++i) {
           const BruhatCalibration c = bruhat_calibration(*sq, sample_bruhat_point(*sq, rng));
           r.add("kernel_dim_gap", std::abs(double(c.kernel_dim - c.gauge_dim)));
           r.add("kernel_containment", c.kernel_containment);
           r.add("basic_gap_pipeline", c.basic_gap_pipeline);
           ++r.samples;
           auto report_only = [&](const std::string& k, double v) { r.parts[k] = std::max(r.parts[k], v); };
           report_only("report:basic_gap_formula", c.basic_gap_formula);
           report_only("report:basic_gap_displayed", c.basic_gap_displayed);
           report_only("report:tangency", c.tangency);
           report_only("report:full_tensor_gap", c.full_tensor_gap);
         }
         return r;
       }},
      {"control-lower-coset", 1e-8, true,
       [](int, std::uint64_t) {
         Mat l = Mat::Identity(2, 2);
         l(1, 0) = 1;
         return single(same_coset_upper(Mat::Identity(2, 2), l) ? 0.0 : 1.0);
       }},
  };
}

TwoGroupDecoration full_decoration(int n) {
  return {std::vector<HSpec>(n, hs_full()), std::vector<HSpec>(n, hs_full())};
}

TwoGroupDecoration non_subgroup_decoration(int n) {
  Mat rep = Mat::Zero(2, 2);
  rep << 2, 0, 0, 0.5;
  TwoGroupDecoration d = full_decoration(n);
  d.g_part[1] = hs_conj_class(rep);
  return d;
}

Suite pair_2group_suite(const MatrixGroup& G) {
  auto mod = std::make_shared<TwoGroupModuli>(
      two_group_moduli_groupoid(new_polygon(3), G, pair_two_group(G), full_decoration(3)));
  return {
      {"two-group-moduli-axioms", 1e-9, false,
       [mod](int n, std::uint64_t seed) { return check_axioms(mod->handle, mod->sampler, n, seed); }},
      {"two-group-relation", 1e-10, false,
       [mod](int n, std::uint64_t seed) {
         return sampled(n, seed, [&](std::mt19937_64& rng) {
           Arrow f = mod->sampler.arrow(rng, nullptr);
           return std::max({two_group_relation_residual(*mod, f),
                            relation_residual(mod->surface, RepPoint{mod->handle.s(f), {}}),
                            relation_residual(mod->surface, RepPoint{mod->handle.t(f), {}})});
         });
       }},
      {"crossed-module", 1e-10, false,
       [mod](int n, std::uint64_t seed) {
         CheckReport r = single(check_group_crossed_module(mod->tg.cm, n, seed).max());
         r.samples = n;
         return r;
       }},
      {"two-group-interchange", 1e-9, false,
       [mod](int n, std::uint64_t seed) {
         CheckReport r = single(two_group_interchange_residual(mod->tg, n, seed));
         r.samples = n;
         return r;
       }},
      {"control-non-subgroup-decoration", 0.0, true,
       [G](int, std::uint64_t) {
         return single(multiplicative_problem(G, pair_two_group(G), non_subgroup_decoration(3)).empty() ? 0.0 : 1.0);
       }},
  };
}

Suite triple_cube_suite(const MatrixGroup& G) {
  return {
      {"triple-cube", 1e-9, false,
       [G](int n, std::uint64_t seed) {
         return triple_cube_check(new_polygon(4), {2}, {3}, G, pair_two_group(G), full_decoration(4), n, seed);
       }},
      {"triple-cube-single-gluing", 1e-9, false,
       [G](int n, std::uint64_t seed) {
         return triple_cube_check(new_polygon(4), {2}, {}, G, pair_two_group(G), full_decoration(4), n, seed);
       }},
      {"control-non-subgroup-decoration", 0.0, true,
       [G](int n, std::uint64_t seed) {
         try {
           triple_cube_check(new_polygon(4), {2}, {3}, G, pair_two_group(G), non_subgroup_decoration(4), n, seed);
         } catch (const std::invalid_argument&) {
           return single(1.0);
         }
         return single(0.0);
       }},
  };
}

Suite dirac_suite(const MatrixGroup& G) {
  const MatrixAlgebra ma = lie_algebra(G);
  Suite s;
  for (int n = 3; n <= 5; ++n) {
    const std::string tag = "(" + std::to_string(n) + ")";
    s.push_back({"polygon-dirac" + tag, 1e-8, false, [ma, n](int k, std::uint64_t seed) {
                   return check_polygon_dirac(ma, n, group_points(ma, n - 1, k, seed));
                 }});
    s.push_back({"quasi-poisson-third" + tag, 1e-8, false, [ma, n](int k, std::uint64_t seed) {
                   auto qp = polygon_quasi_poisson(ma, n);
                   return sampled(k, seed, [&](std::mt19937_64& rng) {
                     return third_axiom_residual(qp, sample_point(ma, n - 1, rng));
                   });
                 }});
    s.push_back({"quasi-poisson-jacobi" + tag, 1e-5, false, [ma, n](int k, std::uint64_t seed) {
                   return check_jacobi(polygon_quasi_poisson(ma, n), group_points(ma, n - 1, k, seed));
                 }});
  }
  s.push_back({"control-perturbed-anchor", 1e-8, true, [ma](int k, std::uint64_t seed) {
                 auto qp = perturbed_anchor(polygon_quasi_poisson(ma, 4), 0.5, seed);
                 return sampled(k, seed, [&](std::mt19937_64& rng) {
                   return third_axiom_residual(qp, sample_point(ma, 3, rng));
                 });
               }});
  return s;
}

Suite quadlie_suite(const MatrixGroup& G) {
  const MatrixAlgebra ma = lie_algebra(G);
  const QuadLieAlgebra g = *ma.alg;
  return {
      {"crossed-module-identity", 1e-12, false,
       [g](int, std::uint64_t) { return single(check_crossed_module(identity_crossed_module(g)).max()); }},
      {"crossed-module-bsharp", 1e-12, false,
       [g](int, std::uint64_t) {
         return single(check_crossed_module(bsharp_crossed_module(g, g.form.inverse())).max());
       }},
      {"cybe-sl2", 1e-12, false,
       [](int, std::uint64_t) { return single(check_cybe(sl2(), standard_r_matrix(sl2(), sl_root_data(2)))); }},
      {"cybe-sl3", 1e-12, false,
       [](int, std::uint64_t) { return single(check_cybe(sl3(), standard_r_matrix(sl3(), sl_root_data(3)))); }},
      {"metric-multiplicative", 1e-10, false,
       [g](int, std::uint64_t) {
         const auto l2 = lie2_from_bilinear(g, g.form.inverse());
         const auto v = check_metric_multiplicative(l2);
         return single(std::max({v.isotropy, v.closure, v.pass ? 0.0 : 1.0, kernel_orthogonality_residual(l2)}));
       }},
      {"pair-isomorphism", 1e-12, false,
       [g](int, std::uint64_t) { return single(pair_isomorphism_residual(lie2_from_bilinear(g, g.form.inverse()))); }},
      {"quasi-bialgebra-reconstruction", 1e-12, false,
       [g](int, std::uint64_t) {
         auto d = share(double_algebra(g));
         return single(reconstruction_residual(split_quasi_bialgebra(diagonal(d), antidiagonal(d))));
       }},
      {"group-crossed-module-pair", 1e-10, false,
       [G](int n, std::uint64_t seed) {
         CheckReport r = single(check_group_crossed_module(pair_two_group(G).cm, n, seed).max());
         r.samples = n;
         return r;
       }},
      {"control-flipped-action", 1e-12, true,
       [g](int, std::uint64_t) {
         auto bad = bsharp_crossed_module(g, g.form.inverse());
         for (auto& a : bad.act) a = -a;
         return single(check_crossed_module(bad).max());
       }},
      {"control-cybe-e-tensor-f", 1e-12, true,
       [](int, std::uint64_t) {
         Mat ef = Mat::Zero(3, 3);
         ef(1, 2) = 1;
         return single(check_cybe(sl2(), r_matrix_from_tensor(ef)));
       }},
  };
}

const std::map<std::string, Recipe>& registry() {
  static const std::map<std::string, Recipe> r = {
      {"bigon-poisson-group", {"sl2r", {"sl2r", "sl2c", "sl3"}, 50, bigon_suite}},
      {"square-dual-group", {"sl2r", {"sl2r", "sl2c", "sl3"}, 50, square_suite}},
      {"coisotropic-chain", {"sl2r", {"sl2r", "sl2c", "sl3"}, 50, coisotropic_suite}},
      {"lu-weinstein", {"sl2r", {"sl2r", "sl2c", "sl3"}, 50, lu_weinstein_suite}},
      {"bruhat-square", {"sl2c", {"sl2c"}, 20, bruhat_suite}},
      {"pair-2group", {"sl2r", {"sl2r", "sl2c", "sl3"}, 50, pair_2group_suite}},
      {"triple-cube", {"sl2r", {"sl2r", "sl2c", "sl3"}, 20, triple_cube_suite}},
      {"dirac-pipeline", {"sl2r", {"sl2r", "sl2c"}, 10, dirac_suite}},
      {"quadlie-core", {"sl2r", {"sl2r", "sl2c", "sl3"}, 50, quadlie_suite}},
  };
  return r;
}

}  // namespace

bool ScenarioReport::pass() const {
  if (no_data || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const ScenarioCheck& c) { return c.report.pass; });
}

int ScenarioReport::discarded() const {
  int n = 0;
  for (const auto& c : checks) n += c.report.discarded;
  return n;
}

std::vector<std::string> list_scenarios() {
  std::vector<std::string> names;
  for (const auto& [name, recipe] : registry()) names.push_back(name);
  return names;
}

std::string version_string() { return MODLAB_VERSION; }

ScenarioConfig resolve_config(const ScenarioConfig& c) {
  auto it = registry().find(c.name);
  if (it == registry().end()) throw ConfigError("unknown scenario: " + c.name);
  ScenarioConfig out = c;
  const Recipe& rec = it->second;
  if (out.group.empty()) out.group = rec.default_group;
  if (std::find(rec.groups.begin(), rec.groups.end(), out.group) == rec.groups.end())
    throw ConfigError("scenario " + c.name + " does not support group " + out.group);
  if (out.samples < 0) out.samples = rec.default_samples;
  return out;
}

ScenarioConfig apply_config_json(ScenarioConfig c, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "seed" && value.is_number_unsigned())
      c.seed = value.get<std::uint64_t>();
    else if (key == "samples" && value.is_number_unsigned())
      c.samples = value.get<int>();
    else if (key == "group" && value.is_string())
      c.group = value.get<std::string>();
    else if (key == "tolerances" && value.is_object())
      for (const auto& [check, tol] : value.items()) {
        if (!tol.is_number() || tol.get<double>() < 0) throw ConfigError("bad tolerance for " + check);
        c.tolerances[check] = tol.get<double>();
      }
    else
      throw ConfigError("unsupported config entry: " + key);
  }
  return c;
}

ScenarioReport run_scenario(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioReport rep;
  rep.config = resolve_config(config);
  rep.version = version_string();
  Suite suite = registry().at(rep.config.name).suite(group_by_key(rep.config.group));
  for (const auto& [check, tol] : rep.config.tolerances) {
    auto it = std::find_if(suite.begin(), suite.end(), [&](const Spec& s) { return s.name == check; });
    if (it == suite.end()) throw ConfigError("no check named " + check + " in " + rep.config.name);
    it->tol = tol;
  }
  if (rep.config.samples == 0) {
    rep.no_data = true;
    return rep;
  }
  rep.checks.resize(suite.size());
  std::vector<std::exception_ptr> errors(suite.size());
  const int count = static_cast<int>(suite.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    try {
      const Spec& s = suite[i];
      CheckReport r = s.run(rep.config.samples, sample_seed(rep.config.seed, i));
      r.check = s.name;
      const bool exceeded = r.max_residual > s.tol;
      r.pass = r.samples > 0 && (s.control ? exceeded : !exceeded);
      rep.checks[i] = ScenarioCheck{r, s.tol, s.control};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::sort(rep.checks.begin(), rep.checks.end(),
            [](const ScenarioCheck& a, const ScenarioCheck& b) { return a.report.check < b.report.check; });
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string scenario_json(const ScenarioReport& r, bool include_wall_time) {
  nlohmann::ordered_json j;
  j["scenario"] = {{"name", r.config.name}, {"group", r.config.group}, {"seed", r.config.seed},
                   {"samples", r.config.samples}, {"tolerances", r.config.tolerances}};
  j["version"] = r.version;
  if (include_wall_time) j["wall_time_s"] = r.wall_seconds;
  j["pass"] = r.pass();
  j["no_data"] = r.no_data;
  j["discarded"] = r.discarded();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.report.check;
    e["samples"] = c.report.samples;
    e["max_residual"] = c.report.max_residual;
    e["pass"] = c.report.pass;
    e["discarded"] = c.report.discarded;
    e["tolerance"] = c.tolerance;
    e["control"] = c.control;
    e["parts"] = c.report.parts;
    j["checks"].push_back(e);
  }
  return j.dump(2);
}

std::string scenario_summary(const ScenarioReport& r) {
  std::ostringstream out;
  out << r.config.name << " [" << r.config.group << ", seed " << r.config.seed << ", samples " << r.config.samples
      << "]\n";
  if (r.no_data) out << "  no data\n";
  for (const auto& c : r.checks) {
    out << "  " << (c.report.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(36) << c.report.check
        << std::right << std::scientific << std::setprecision(2) << std::setw(10) << c.report.max_residual
        << (c.control ? " > " : " <= ") << c.tolerance << std::defaultfloat << "  n=" << c.report.samples;
    if (c.report.discarded > 0) out << " discarded=" << c.report.discarded;
    out << "\n";
  }
  out << (r.pass() ? "PASS" : "FAIL") << "  " << r.checks.size() << " checks, " << std::fixed << std::setprecision(2)
      << r.wall_seconds << " s\n";
  return out.str();
}

}  // namespace modlab
