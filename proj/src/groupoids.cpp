#include "modlab/groupoids.hpp"

#include <algorithm>
#include <cmath>

namespace modlab {

double list_dist(const std::vector<Mat>& x, const std::vector<Mat>& y) {
  if (x.size() != y.size()) return INFINITY;
  double d = 0, scale = 1;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k].rows() != y[k].rows() || x[k].cols() != y[k].cols()) return INFINITY;
    d = std::max(d, max_abs(x[k] - y[k]));
    scale = std::max(scale, max_abs(x[k]));
  }
  return d / scale;
}

namespace {

constexpr double kComposeTol = 1e-9;

std::vector<Mat> slice(const std::vector<Mat>& x, std::size_t from, std::size_t len) {
  return {x.begin() + static_cast<std::ptrdiff_t>(from), x.begin() + static_cast<std::ptrdiff_t>(from + len)};
}

std::vector<Mat> cat(std::initializer_list<std::vector<Mat>> parts) {
  std::vector<Mat> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw NotComposable(what);
}

GroupoidHandle defaults(GroupoidHandle g) {
  if (!g.arrow_dist) g.arrow_dist = list_dist;
  if (!g.object_dist) g.object_dist = list_dist;
  return g;
}

// a group as a groupoid over a point
GroupoidHandle group_handle(const std::string& name, int n) {
  GroupoidHandle g;
  g.name = name;
  g.s = [](const Arrow&) { return Object{}; };
  g.t = g.s;
  g.u = [n](const Object&) { return Arrow{Mat::Identity(n, n)}; };
  g.i = [](const Arrow& a) { return Arrow{a[0].inverse()}; };
  g.m = [](const Arrow& a, const Arrow& b) { return Arrow{a[0] * b[0]}; };
  return defaults(g);
}

}  // namespace

CheckReport check_axioms(const GroupoidHandle& g, const GroupoidSampler& sampler, int count, std::uint64_t seed,
                         double tol) {
  CheckReport r;
  r.check = "groupoid-axioms:" + g.name;
  std::mt19937_64 rng(seed);
  // a law whose composite is undefined counts as residual 1
  auto law = [&r](const std::string& key, const std::function<double()>& f) {
    try {
      r.add(key, f());
    } catch (const NotComposable&) {
      r.add(key, 1.0);
    }
  };
  for (int n = 0; n < count; ++n) {
    Arrow a, b, c;
    try {
      a = sampler.arrow(rng, nullptr);
      const Object sa = g.s(a);
      b = sampler.arrow(rng, &sa);
      const Object sb = g.s(b);
      c = sampler.arrow(rng, &sb);
    } catch (const OffCellError&) {
      ++r.discarded;
      continue;
    }
    try {
      const Arrow ab = g.m(a, b), bc = g.m(b, c);
      law("associativity", [&] { return g.arrow_dist(g.m(ab, c), g.m(a, bc)); });
      law("source", [&] { return g.object_dist(g.s(ab), g.s(b)); });
      law("target", [&] { return g.object_dist(g.t(ab), g.t(a)); });
    } catch (const NotComposable&) {
      ++r.discarded;
      continue;
    }
    const Object sa = g.s(a), ta = g.t(a);
    law("unit-left", [&] { return g.arrow_dist(g.m(g.u(ta), a), a); });
    law("unit-right", [&] { return g.arrow_dist(g.m(a, g.u(sa)), a); });
    law("unit-ends", [&] { return std::max(g.object_dist(g.s(g.u(ta)), ta), g.object_dist(g.t(g.u(ta)), ta)); });
    const Arrow ia = g.i(a);
    law("inverse-ends", [&] { return std::max(g.object_dist(g.s(ia), ta), g.object_dist(g.t(ia), sa)); });
    law("inverse-right", [&] { return g.arrow_dist(g.m(a, ia), g.u(ta)); });
    law("inverse-left", [&] { return g.arrow_dist(g.m(ia, a), g.u(sa)); });
    ++r.samples;
  }
  r.pass = r.samples > 0 && r.max_residual <= tol;
  return r;
}

GroupoidHandle pair_groupoid(int k) {
  GroupoidHandle g;
  g.name = "pair";
  const auto K = static_cast<std::size_t>(k);
  g.t = [K](const Arrow& a) { return slice(a, 0, K); };
  g.s = [K](const Arrow& a) { return slice(a, K, K); };
  g.u = [](const Object& x) { return cat({x, x}); };
  g.i = [K](const Arrow& a) { return cat({slice(a, K, K), slice(a, 0, K)}); };
  g.m = [K](const Arrow& a, const Arrow& b) {
    require(list_dist(slice(a, K, K), slice(b, 0, K)) <= kComposeTol, "pair: s(g) != t(h)");
    return cat({slice(a, 0, K), slice(b, K, K)});
  };
  return defaults(g);
}

GroupoidSampler pair_sampler(const MatrixGroup& G, int k) {
  return {[G, k](std::mt19937_64& rng, const Object* target) {
    Arrow a;
    for (int j = 0; j < k; ++j) a.push_back(target ? (*target)[j] : sample(G, hs_full(), rng));
    for (int j = 0; j < k; ++j) a.push_back(sample(G, hs_full(), rng));
    return a;
  }};
}

GroupoidHandle action_groupoid() {
  GroupoidHandle g;
  g.name = "action";
  g.s = [](const Arrow& a) { return Object{a[1]}; };
  g.t = [](const Arrow& a) { return Object{a[0] * a[1]}; };
  g.u = [](const Object& x) { return Arrow{Mat::Identity(x[0].rows(), x[0].cols()), x[0]}; };
  g.i = [](const Arrow& a) { return Arrow{a[0].inverse(), a[0] * a[1]}; };
  g.m = [](const Arrow& a, const Arrow& b) {
    require(list_dist({a[1]}, {b[0] * b[1]}) <= kComposeTol, "action: s(g) != t(h)");
    return Arrow{a[0] * b[0], b[1]};
  };
  return defaults(g);
}

GroupoidSampler action_sampler(const MatrixGroup& G, const HSpec& H) {
  return {[G, H](std::mt19937_64& rng, const Object* target) {
    const Mat h = sample(G, H, rng);
    const Mat x = target ? Mat(h.inverse() * (*target)[0]) : sample(G, hs_full(), rng);
    return Arrow{h, x};
  }};
}

GluedGroupoid glued_moduli_groupoid(const GluedModuliSpec& spec) {
  GluedGroupoid out{spec, GaugeSpec{spec.K.K}, {}, {}};
  const auto ne = static_cast<std::size_t>(spec.gm.base.graph.ne());
  auto problem = std::make_shared<GaugeProblem>(gauge_problem(spec.gm.base, spec.G, out.base_gauge));
  auto sp = std::make_shared<GluedModuliSpec>(spec);
  GroupoidHandle& g = out.handle;
  g.name = "glued-moduli";
  g.t = [ne](const Arrow& a) { return slice(a, 0, ne); };
  g.s = [ne](const Arrow& a) { return slice(a, ne, ne); };
  g.u = [](const Object& x) { return cat({x, x}); };
  g.i = [ne](const Arrow& a) { return cat({slice(a, ne, ne), slice(a, 0, ne)}); };
  g.m = [ne, problem, sp](const Arrow& a, const Arrow& b) {
    const Object mid = slice(a, ne, ne);
    Object first = slice(b, 0, ne), second = slice(b, ne, ne);
    if (list_dist(mid, first) > kComposeTol) {
      // realign b by a gauge element acting on both copies
      GaugeSolve gs = solve_gauge(*problem, first, mid);
      require(gs.residual <= 1e-8 * std::max(1.0, max_abs(mid[0])), "glued: legs are not in one base orbit");
      GaugeElement kb = gs.k;
      for (std::size_t v = 0; v < kb.size(); ++v)
        if (!sp->K.shared[v]) kb[v] = Mat::Identity(kb[v].rows(), kb[v].cols());
      second = gauge_act(sp->gm.base, kb, RepPoint{second, {}}).edges;
    }
    return cat({slice(a, 0, ne), second});
  };
  g = defaults(g);
  out.sampler = {[sp](std::mt19937_64& rng, const Object* target) {
    GluedRepPoint pt = target ? sample_with_first(*sp, RepPoint{*target, {}}, rng) : sample_constrained(*sp, rng);
    return flatten(pt);
  }};
  return out;
}

namespace {

RVec stack_real(const std::vector<Mat>& xs) {
  std::vector<RVec> parts;
  Eigen::Index len = 0;
  for (const auto& x : xs) {
    parts.push_back(realify(x));
    len += parts.back().size();
  }
  RVec out(len);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

}  // namespace

int double_source_rank(const DoubleGroupoidHandle& d, const Arrow& g) {
  const double h = tol::fd_step;
  auto src = [&](const Arrow& a) { return stack_real(cat({d.h.s(a), d.v.s(a)})); };
  Mat J;
  for (int j = 0; j < d.arrow_dim; ++j) {
    RVec e = RVec::Zero(d.arrow_dim);
    e(j) = h;
    const RVec col = (src(d.perturb(g, e)) - src(d.perturb(g, -e))) / (2 * h);
    if (j == 0) J = Mat::Zero(col.size(), d.arrow_dim);
    J.col(j) = col.cast<cd>();
  }
  return numeric_rank(J, 1e-6);
}

CheckReport check_double(const DoubleGroupoidHandle& d, int count, std::uint64_t seed, double tol) {
  CheckReport r;
  r.check = "double-groupoid:" + d.name;
  CheckReport rh = check_axioms(d.h, d.hs, count, seed, tol);
  CheckReport rv = check_axioms(d.v, d.vs, count, seed + 1, tol);
  for (const auto& [k, v] : rh.parts) r.add("h-" + k, v);
  for (const auto& [k, v] : rv.parts) r.add("v-" + k, v);
  r.discarded = rh.discarded + rv.discarded;
  std::mt19937_64 rng(seed + 2);
  int squares = 0;
  for (int n = 0; n < count; ++n) {
    try {
      const auto [g11, g12, g21, g22] = d.square(rng);
      const Arrow top = d.h.m(g11, g12), bottom = d.h.m(g21, g22);
      const Arrow left = d.v.m(g11, g21), right = d.v.m(g12, g22);
      r.add("interchange", d.h.arrow_dist(d.v.m(top, bottom), d.h.m(left, right)));
      r.add("h-source-morphism", d.h_side.arrow_dist(d.h.s(left), d.h_side.m(d.h.s(g11), d.h.s(g21))));
      r.add("h-target-morphism", d.h_side.arrow_dist(d.h.t(left), d.h_side.m(d.h.t(g11), d.h.t(g21))));
      r.add("v-source-morphism", d.v_side.arrow_dist(d.v.s(top), d.v_side.m(d.v.s(g11), d.v.s(g12))));
      r.add("v-target-morphism", d.v_side.arrow_dist(d.v.t(top), d.v_side.m(d.v.t(g11), d.v.t(g12))));
      if (d.constraint)
        r.add("constraint", std::max({d.constraint(top), d.constraint(left), d.constraint(d.v.m(top, bottom)),
                                      d.constraint(d.h.i(g11)), d.constraint(d.v.i(g11))}));
      if (d.perturb && n < 5) r.add("source-rank-deficit", d.expected_source_rank - double_source_rank(d, g11));
      ++squares;
    } catch (const NotComposable&) {
      ++r.discarded;
    } catch (const OffCellError&) {
      ++r.discarded;
    }
  }
  r.samples = std::min({rh.samples, rv.samples, squares});
  r.pass = rh.pass && rv.pass && squares > 0 && r.max_residual <= tol;
  return r;
}

namespace {

// w^{-1} x = z y^{-1} with z ∈ A, y ∈ B
Arrow lw_complete(const MatrixGroup& G, const Mat& w, const Mat& x) {
  const GaussFactors f = gauss_factorize(G, w.inverse() * x);
  return {w, x, Mat(f.dual_part().inverse()), f.diag_part()};
}

template <class F>
auto retry_off_cell(F&& draw) {
  for (int attempt = 0;; ++attempt) {
    try {
      return draw();
    } catch (const OffCellError&) {
      if (attempt >= 8) throw;
    }
  }
}

}  // namespace

DoubleGroupoidHandle lu_weinstein(const MatrixGroup& simple) {
  const MatrixGroup G = pair_group(simple);
  const int n = G.size();
  const Mat I = Mat::Identity(n, n);
  DoubleGroupoidHandle d;
  d.name = "lu-weinstein";
  GroupoidHandle& h = d.h;
  h.name = "lw-h";
  h.s = [](const Arrow& a) { return Object{a[2]}; };
  h.t = [](const Arrow& a) { return Object{a[0]}; };
  h.u = [I](const Object& b) { return Arrow{b[0], I, b[0], I}; };
  h.i = [](const Arrow& a) { return Arrow{a[2], a[1].inverse(), a[0], a[3].inverse()}; };
  h.m = [](const Arrow& a, const Arrow& b) {
    require(list_dist({a[2]}, {b[0]}) <= kComposeTol, "lu-weinstein: y != w'");
    return Arrow{a[0], a[1] * b[1], b[2], a[3] * b[3]};
  };
  h = defaults(h);
  GroupoidHandle& v = d.v;
  v.name = "lw-v";
  v.s = [](const Arrow& a) { return Object{a[3]}; };
  v.t = [](const Arrow& a) { return Object{a[1]}; };
  v.u = [I](const Object& x) { return Arrow{I, x[0], I, x[0]}; };
  v.i = [](const Arrow& a) { return Arrow{a[0].inverse(), a[3], a[2].inverse(), a[1]}; };
  v.m = [](const Arrow& a, const Arrow& b) {
    require(list_dist({a[3]}, {b[1]}) <= kComposeTol, "lu-weinstein: z != x'");
    return Arrow{a[0] * b[0], a[1], a[2] * b[2], b[3]};
  };
  v = defaults(v);
  d.h_side = group_handle("B", n);
  d.v_side = group_handle("A", n);
  d.hs = {[G](std::mt19937_64& rng, const Object* target) {
    return retry_off_cell([&] {
      const Mat w = target ? (*target)[0] : sample(G, hs_dual(), rng);
      return lw_complete(G, w, sample(G, hs_diagonal(), rng));
    });
  }};
  d.vs = {[G](std::mt19937_64& rng, const Object* target) {
    return retry_off_cell([&] {
      const Mat x = target ? (*target)[0] : sample(G, hs_diagonal(), rng);
      return lw_complete(G, sample(G, hs_dual(), rng), x);
    });
  }};
  d.square = [G](std::mt19937_64& rng) {
    const Arrow g11 = lw_complete(G, sample(G, hs_dual(), rng), sample(G, hs_diagonal(), rng));
    const Arrow g12 = lw_complete(G, g11[2], sample(G, hs_diagonal(), rng));
    const Arrow g21 = lw_complete(G, sample(G, hs_dual(), rng), g11[3]);
    const Arrow g22 = lw_complete(G, g21[2], g12[3]);
    return std::array<Arrow, 4>{g11, g12, g21, g22};
  };
  auto A = std::make_shared<std::vector<Mat>>(subalgebra_basis(G, hs_diagonal()));
  auto B = std::make_shared<std::vector<Mat>>(subalgebra_basis(G, hs_dual()));
  d.arrow_dim = static_cast<int>(A->size() + B->size());
  d.expected_source_rank = d.arrow_dim;
  d.perturb = [G, A, B](const Arrow& a, const RVec& xi) {
    Mat xb = Mat::Zero(a[0].rows(), a[0].cols()), xa = xb;
    const auto nb = static_cast<Eigen::Index>(B->size());
    for (Eigen::Index k = 0; k < nb; ++k) xb += xi(k) * (*B)[static_cast<std::size_t>(k)];
    for (std::size_t k = 0; k < A->size(); ++k) xa += xi(nb + static_cast<Eigen::Index>(k)) * (*A)[k];
    return lw_complete(G, a[0] * expm(xb), a[1] * expm(xa));
  };
  d.constraint = [G](const Arrow& a) {
    return std::max({max_abs(a[1] * a[2] - a[0] * a[3]), membership_residual(G, hs_dual(), a[0]),
                     membership_residual(G, hs_diagonal(), a[1]), membership_residual(G, hs_dual(), a[2]),
                     membership_residual(G, hs_diagonal(), a[3])});
  };
  return d;
}

namespace {

// p11 p12 p21 p22, each a k-list
DoubleGroupoidHandle pair_double_maps(int k) {
  const auto K = static_cast<std::size_t>(k);
  auto part = [K](const Arrow& a, int idx) { return slice(a, static_cast<std::size_t>(idx) * K, K); };
  DoubleGroupoidHandle d;
  GroupoidHandle& h = d.h;
  h.name = "pair-h";
  h.t = [part](const Arrow& a) { return cat({part(a, 0), part(a, 2)}); };
  h.s = [part](const Arrow& a) { return cat({part(a, 1), part(a, 3)}); };
  h.u = [K](const Object& x) {
    const auto top = slice(x, 0, K), bot = slice(x, K, K);
    return cat({top, top, bot, bot});
  };
  h.i = [part](const Arrow& a) { return cat({part(a, 1), part(a, 0), part(a, 3), part(a, 2)}); };
  h.m = [part](const Arrow& a, const Arrow& b) {
    require(list_dist(cat({part(a, 1), part(a, 3)}), cat({part(b, 0), part(b, 2)})) <= kComposeTol,
            "pair-h: s(g) != t(h)");
    return cat({part(a, 0), part(b, 1), part(a, 2), part(b, 3)});
  };
  h = defaults(h);
  GroupoidHandle& v = d.v;
  v.name = "pair-v";
  v.t = [part](const Arrow& a) { return cat({part(a, 0), part(a, 1)}); };
  v.s = [part](const Arrow& a) { return cat({part(a, 2), part(a, 3)}); };
  v.u = [](const Object& x) { return cat({x, x}); };
  v.i = [part](const Arrow& a) { return cat({part(a, 2), part(a, 3), part(a, 0), part(a, 1)}); };
  v.m = [part](const Arrow& a, const Arrow& b) {
    require(list_dist(cat({part(a, 2), part(a, 3)}), cat({part(b, 0), part(b, 1)})) <= kComposeTol,
            "pair-v: s(g) != t(h)");
    return cat({part(a, 0), part(a, 1), part(b, 2), part(b, 3)});
  };
  v = defaults(v);
  d.h_side = pair_groupoid(k);
  d.v_side = pair_groupoid(k);
  return d;
}

}  // namespace

DoubleGroupoidHandle pair_double_groupoid(const MatrixGroup& G, int k) {
  DoubleGroupoidHandle d = pair_double_maps(k);
  d.name = "pair-double";
  const auto K = static_cast<std::size_t>(k);
  auto point = [G, k](std::mt19937_64& rng) {
    std::vector<Mat> p;
    for (int j = 0; j < k; ++j) p.push_back(sample(G, hs_full(), rng));
    return p;
  };
  d.hs = {[point, K](std::mt19937_64& rng, const Object* target) {
    const auto top = target ? slice(*target, 0, K) : point(rng);
    const auto bot = target ? slice(*target, K, K) : point(rng);
    return cat({top, point(rng), bot, point(rng)});
  }};
  d.vs = {[point](std::mt19937_64& rng, const Object* target) {
    const auto top = target ? *target : cat({point(rng), point(rng)});
    return cat({top, point(rng), point(rng)});
  }};
  d.square = [point](std::mt19937_64& rng) {
    std::vector<std::vector<Mat>> p(9);
    for (auto& x : p) x = point(rng);
    auto at = [&](int i, int j) { return p[static_cast<std::size_t>(3 * i + j)]; };
    auto cell = [&](int i, int j) { return cat({at(i, j), at(i, j + 1), at(i + 1, j), at(i + 1, j + 1)}); };
    return std::array<Arrow, 4>{cell(0, 0), cell(0, 1), cell(1, 0), cell(1, 1)};
  };
  auto basis = std::make_shared<std::vector<Mat>>(subalgebra_basis(G, hs_full()));
  const int dim = static_cast<int>(basis->size());
  d.arrow_dim = 4 * k * dim;
  d.expected_source_rank = 3 * k * dim;
  d.perturb = [basis, dim](const Arrow& a, const RVec& xi) {
    Arrow out = a;
    for (std::size_t m = 0; m < a.size(); ++m) {
      Mat x = Mat::Zero(a[m].rows(), a[m].cols());
      for (int j = 0; j < dim; ++j) x += xi(static_cast<Eigen::Index>(m) * dim + j) * (*basis)[static_cast<std::size_t>(j)];
      out[m] = a[m] * expm(x);
    }
    return out;
  };
  return d;
}

Arrow flatten(const QuadRepPoint& q) { return cat({q.a.edges, q.b.edges, q.c.edges, q.d.edges}); }

QuadRepPoint unflatten_quad(const Arrow& a) {
  const std::size_t k = a.size() / 4;
  return {RepPoint{slice(a, 0, k), {}}, RepPoint{slice(a, k, k), {}}, RepPoint{slice(a, 2 * k, k), {}},
          RepPoint{slice(a, 3 * k, k), {}}};
}

DoubleGroupoidHandle dousym2_double_groupoid(const MatrixGroup& simple) {
  DoubleGroupoidHandle d = pair_double_maps(4);
  d.name = "dousym2";
  auto spec = std::make_shared<Dousym2Spec>(Dousym2Spec{pair_group(simple)});
  d.hs = {[spec](std::mt19937_64& rng, const Object* target) {
    if (!target) return flatten(sample_dousym2(*spec, rng));
    return flatten(sample_dousym2_given_left(*spec, RepPoint{slice(*target, 0, 4), {}},
                                             RepPoint{slice(*target, 4, 4), {}}, rng));
  }};
  d.vs = {[spec](std::mt19937_64& rng, const Object* target) {
    if (!target) return flatten(sample_dousym2(*spec, rng));
    return flatten(sample_dousym2_given_top(*spec, RepPoint{slice(*target, 0, 4), {}},
                                            RepPoint{slice(*target, 4, 4), {}}, rng));
  }};
  d.square = [spec](std::mt19937_64& rng) {
    return retry_off_cell([&] {
      const QuadRepPoint g11 = sample_dousym2(*spec, rng);
      const QuadRepPoint g12 = sample_dousym2_given_left(*spec, g11.b, g11.d, rng);
      const QuadRepPoint g21 = sample_dousym2_given_top(*spec, g11.c, g11.d, rng);
      const QuadRepPoint g22 = complete_dousym2(*spec, g11.d, g12.d, g21.d);
      return std::array<Arrow, 4>{flatten(g11), flatten(g12), flatten(g21), flatten(g22)};
    });
  };
  d.constraint = [spec](const Arrow& a) { return dousym2_constraint_residual(*spec, unflatten_quad(a)); };
  return d;
}

namespace {

Arrow interleave(const std::vector<Mat>& a, const std::vector<Mat>& x) {
  Arrow out;
  for (std::size_t e = 0; e < a.size(); ++e) {
    out.push_back(a[e]);
    out.push_back(x[e]);
  }
  return out;
}

TwoArrow arrow_at(const Arrow& f, std::size_t e) { return {f[2 * e], f[2 * e + 1]}; }

MarkedSurface check_decorated(const MarkedSurface& s, const MatrixGroup& G, const TwoGroup& tg,
                              const TwoGroupDecoration& d) {
  if (static_cast<int>(d.h_part.size()) != s.graph.ne() || static_cast<int>(d.g_part.size()) != s.graph.ne())
    throw std::invalid_argument("2-group decoration does not match the surface");
  const std::string problem = multiplicative_problem(G, tg, d);
  if (!problem.empty()) throw std::invalid_argument(problem);
  return s;
}

}  // namespace

std::string multiplicative_problem(const MatrixGroup& G, const TwoGroup& tg, const TwoGroupDecoration& d) {
  std::mt19937_64 rng(7);
  for (std::size_t e = 0; e < d.h_part.size(); ++e) {
    const std::string name = "edge " + std::to_string(e);
    if (!is_subgroup(d.h_part[e]) || !is_subgroup(d.g_part[e])) return name + ": not a subgroupoid";
    for (int k = 0; k < 5; ++k) {
      const Mat a = sample(G, d.h_part[e], rng), x = sample(G, d.g_part[e], rng);
      if (!contains(G, d.g_part[e], tg.cm.Phi(a) * x)) return name + ": target leaves the subgroupoid";
    }
  }
  return {};
}

TwoGroupModuli two_group_moduli_groupoid(const MarkedSurface& s, const MatrixGroup& G, const TwoGroup& tg,
                                         const TwoGroupDecoration& d) {
  TwoGroupModuli mod{check_decorated(s, G, tg, d), G, tg, d, {}, {}};
  const auto ne = static_cast<std::size_t>(s.graph.ne());
  auto T = std::make_shared<TwoGroup>(tg);
  GroupoidHandle& g = mod.handle;
  g.name = "two-group-moduli:" + tg.cm.name;
  g.s = [ne, T](const Arrow& f) {
    Object o;
    for (std::size_t e = 0; e < ne; ++e) o.push_back(T->source(arrow_at(f, e)));
    return o;
  };
  g.t = [ne, T](const Arrow& f) {
    Object o;
    for (std::size_t e = 0; e < ne; ++e) o.push_back(T->target(arrow_at(f, e)));
    return o;
  };
  g.u = [ne, T](const Object& x) {
    Arrow f;
    for (std::size_t e = 0; e < ne; ++e) {
      auto [a, y] = T->unit(x[e]);
      f.push_back(a);
      f.push_back(y);
    }
    return f;
  };
  g.i = [ne, T](const Arrow& f) {
    Arrow out;
    for (std::size_t e = 0; e < ne; ++e) {
      auto [a, y] = T->inverse(arrow_at(f, e));
      out.push_back(a);
      out.push_back(y);
    }
    return out;
  };
  g.m = [ne, T](const Arrow& f, const Arrow& h) {
    Arrow out;
    for (std::size_t e = 0; e < ne; ++e) {
      TwoArrow c;
      try {
        c = T->compose(arrow_at(f, e), arrow_at(h, e));
      } catch (const std::invalid_argument& err) {
        throw NotComposable(err.what());
      }
      out.push_back(c.first);
      out.push_back(c.second);
    }
    return out;
  };
  g = defaults(g);
  MatrixAlgebra ma = lie_algebra(G);
  AlgPtr dbl = std::make_shared<QuadLieAlgebra>(double_algebra(*ma.alg));
  Decoration pd;
  pd.edges = d.g_part;
  pd.vertices.assign(static_cast<std::size_t>(s.graph.nv), diagonal(dbl));
  auto base = std::make_shared<ModuliSpec>(polygon_moduli(s, G, pd));
  const bool pair = tg.cm.name == "pair";
  bool full_h = true;
  for (const auto& h : d.h_part) full_h = full_h && h.kind == HSpec::Kind::Full;
  mod.sampler = {[base, pair, full_h](std::mt19937_64& rng, const Object* target) {
    if (!pair || !full_h) throw std::invalid_argument("2-group sampler supports the pair 2-group with full H-parts");
    const RepPoint src = sample_constrained(*base, rng);
    const std::vector<Mat> tgt = target ? *target : sample_constrained(*base, rng).edges;
    std::vector<Mat> a;
    for (std::size_t e = 0; e < tgt.size(); ++e) a.push_back(tgt[e] * src.edges[e].inverse());
    return interleave(a, src.edges);
  }};
  return mod;
}

double two_group_relation_residual(const TwoGroupModuli& mod, const Arrow& arrow) {
  const TwoGroup& tg = mod.tg;
  const int nh = tg.cm.h_size;
  double r = 0;
  for (const auto& w : mod.surface.relations) {
    TwoArrow acc{Mat::Identity(nh, nh), Mat::Identity(arrow[1].rows(), arrow[1].cols())};
    for (const auto& l : w) {
      if (l.internal) throw std::invalid_argument("2-group relation with internal generators");
      TwoArrow f = arrow_at(arrow, static_cast<std::size_t>(l.gen));
      if (l.exp == -1) {
        const Mat xi = f.second.inverse();
        f = {tg.cm.act(xi, f.first.inverse()), xi};
      }
      acc = tg.mul(acc, f);
    }
    r = std::max({r, max_abs(acc.first - Mat::Identity(nh, nh)),
                  max_abs(acc.second - Mat::Identity(acc.second.rows(), acc.second.cols()))});
  }
  return r;
}

namespace {

using Points = std::vector<std::vector<Mat>>;  // edge values per grid point

struct Grid {
  int ns, nt, ng;
  Points p;
  std::vector<Mat>& at(int i, int j, int k) { return p[static_cast<std::size_t>((i * nt + j) * ng + k)]; }
};

// 2 x 2 x 2 cube: index (i, j, k) -> 4 i + 2 j + k
using Cube = std::array<std::vector<Mat>, 8>;

Cube cube_at(Grid& g, int i, int j, int k, int di, int dj, int dk) {
  Cube c;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int e = 0; e < 2; ++e) c[static_cast<std::size_t>(4 * a + 2 * b + e)] = g.at(i + a * di, j + b * dj, k + e * dk);
  return c;
}

std::size_t idx(int dir, int face, int p, int q) {
  int coords[3];
  coords[dir] = face;
  coords[(dir + 1) % 3] = p;
  coords[(dir + 2) % 3] = q;
  return static_cast<std::size_t>(4 * coords[0] + 2 * coords[1] + coords[2]);
}

// pair composition along S (dir 0) or T (dir 1)
Cube compose_pair(const Cube& f, const Cube& h, int dir) {
  Cube out;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      require(list_dist(f[idx(dir, 1, p, q)], h[idx(dir, 0, p, q)]) <= kComposeTol, "cube: faces differ");
      out[idx(dir, 0, p, q)] = f[idx(dir, 0, p, q)];
      out[idx(dir, 1, p, q)] = h[idx(dir, 1, p, q)];
    }
  return out;
}

// composition along the 2-group direction (dir 2), face 0 targets and face 1 sources
Cube compose_two_group(const TwoGroup& tg, const Cube& f, const Cube& h) {
  Cube out;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      const auto& ft = f[idx(2, 0, p, q)];
      const auto& fs = f[idx(2, 1, p, q)];
      const auto& ht = h[idx(2, 0, p, q)];
      const auto& hs = h[idx(2, 1, p, q)];
      std::vector<Mat> t, s;
      for (std::size_t e = 0; e < ft.size(); ++e) {
        TwoArrow c;
        try {
          c = tg.compose({ft[e] * fs[e].inverse(), fs[e]}, {ht[e] * hs[e].inverse(), hs[e]});
        } catch (const std::invalid_argument& err) {
          throw NotComposable(err.what());
        }
        t.push_back(tg.target(c));
        s.push_back(tg.source(c));
      }
      out[idx(2, 0, p, q)] = t;
      out[idx(2, 1, p, q)] = s;
    }
  return out;
}

double cube_dist(const Cube& a, const Cube& b) {
  double d = 0;
  for (std::size_t k = 0; k < 8; ++k) d = std::max(d, list_dist(a[k], b[k]));
  return d;
}

}  // namespace

CheckReport triple_cube_check(const MarkedSurface& s, const std::vector<int>& S, const std::vector<int>& T,
                              const MatrixGroup& G, const TwoGroup& tg, const TwoGroupDecoration& d, int count,
                              std::uint64_t seed) {
  check_decorated(s, G, tg, d);
  if (tg.cm.name != "pair") throw std::invalid_argument("triple cube supports the pair 2-group");
  for (const auto& h : d.h_part)
    if (h.kind != HSpec::Kind::Full) throw std::invalid_argument("triple cube sampler needs full H-parts");
  if (s.relations.size() != 1 || s.n_internal() != 0) throw std::invalid_argument("triple cube expects a polygon");
  const int ne = s.graph.ne();
  std::vector<int> role(static_cast<std::size_t>(ne), 0);  // 0 free, 1 S, 2 T
  for (int e : S) role[static_cast<std::size_t>(e)] = 1;
  for (int e : T) {
    if (role[static_cast<std::size_t>(e)] == 1) throw std::invalid_argument("S and T overlap");
    role[static_cast<std::size_t>(e)] = 2;
  }
  int solve = -1;
  for (int e = 0; e < ne && solve < 0; ++e)
    if (role[static_cast<std::size_t>(e)] == 0 && d.g_part[static_cast<std::size_t>(e)].kind == HSpec::Kind::Full)
      solve = e;
  if (solve < 0) throw std::invalid_argument("triple cube: no free full edge to solve the relation");
  const bool has_t = !T.empty();
  const int n = G.size();

  CheckReport r;
  r.check = "triple-cube";
  std::mt19937_64 rng(seed);
  for (int sample_no = 0; sample_no < count; ++sample_no) {
    Grid g{3, has_t ? 3 : 2, 3, {}};
    g.p.resize(static_cast<std::size_t>(g.ns * g.nt * g.ng));
    // S edges shared along the S index, T edges along the T index
    std::vector<std::vector<Mat>> shS(static_cast<std::size_t>(g.nt * g.ng)),
        shT(static_cast<std::size_t>(g.ns * g.ng));
    for (auto& v : shS)
      for (int e = 0; e < ne; ++e) v.push_back(sample(G, d.g_part[static_cast<std::size_t>(e)], rng));
    for (auto& v : shT)
      for (int e = 0; e < ne; ++e) v.push_back(sample(G, d.g_part[static_cast<std::size_t>(e)], rng));
    for (int i = 0; i < g.ns; ++i)
      for (int j = 0; j < g.nt; ++j)
        for (int k = 0; k < g.ng; ++k) {
          RepPoint rep;
          for (int e = 0; e < ne; ++e) {
            const auto ue = static_cast<std::size_t>(e);
            if (role[ue] == 1) rep.edges.push_back(shS[static_cast<std::size_t>(j * g.ng + k)][ue]);
            else if (role[ue] == 2) rep.edges.push_back(shT[static_cast<std::size_t>(i * g.ng + k)][ue]);
            else if (e == solve) rep.edges.push_back(Mat::Identity(n, n));
            else rep.edges.push_back(sample(G, d.g_part[ue], rng));
          }
          // solve the relation for the free edge
          Mat P = Mat::Identity(n, n), Q = Mat::Identity(n, n);
          bool after = false;
          int exp = 1;
          for (const auto& l : s.relations[0]) {
            if (l.gen == solve) {
              after = true;
              exp = l.exp;
              continue;
            }
            const Mat& m = rep.edges[static_cast<std::size_t>(l.gen)];
            const Mat v = l.exp == 1 ? m : Mat(m.inverse());
            (after ? Q : P) = (after ? Q : P) * v;
          }
          Mat x = P.inverse() * Q.inverse();
          rep.edges[static_cast<std::size_t>(solve)] = exp == 1 ? x : Mat(x.inverse());
          r.add("relation", relation_residual(s, rep));
          g.at(i, j, k) = rep.edges;
        }
    auto compose = [&](const Cube& a, const Cube& b, int dir) {
      return dir == 2 ? compose_two_group(tg, a, b) : compose_pair(a, b, dir);
    };
    std::vector<std::pair<int, int>> pairs = {{0, 2}};
    if (has_t) pairs = {{0, 1}, {0, 2}, {1, 2}};
    try {
      for (auto [d1, d2] : pairs) {
        // 2 x 2 block of cubes spanning directions d1 and d2, third direction at offset 0
        auto cube = [&](int o1, int o2) {
          int off[3] = {0, 0, 0}, step[3] = {1, 1, 1};
          off[d1] = o1;
          off[d2] = o2;
          if (!has_t) step[1] = 0;
          return cube_at(g, off[0], off[1], off[2], step[0], has_t ? step[1] : 1, step[2]);
        };
        const Cube c00 = cube(0, 0), c10 = cube(1, 0), c01 = cube(0, 1), c11 = cube(1, 1);
        const Cube lhs = compose(compose(c00, c10, d1), compose(c01, c11, d1), d2);
        const Cube rhs = compose(compose(c00, c01, d2), compose(c10, c11, d2), d1);
        r.add("interchange-" + std::to_string(d1) + std::to_string(d2), cube_dist(lhs, rhs));
        // composite cube equals the corner cube of the grid
        int off[3] = {0, 0, 0}, step[3] = {1, 1, 1};
        step[d1] = 2;
        step[d2] = 2;
        r.add("composite", cube_dist(lhs, cube_at(g, off[0], off[1], off[2], step[0], step[1], step[2])));
      }
      ++r.samples;
    } catch (const NotComposable&) {
      ++r.discarded;
    }
  }
  r.pass = r.samples > 0 && r.max_residual <= 1e-9;
  return r;
}

}  // namespace modlab
