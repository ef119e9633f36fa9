#include "modlab/repmoduli.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace modlab {

namespace {

Mat eval_letter(const RepPoint& rep, const Letter& l) {
  const Mat& m = l.internal ? rep.internal.at(l.gen) : rep.edges.at(l.gen);
  return l.exp == 1 ? m : Mat(m.inverse());
}

Mat eval_word(const RepPoint& rep, const Word& w, int n) {
  Mat out = Mat::Identity(n, n);
  for (const auto& l : w) out = out * eval_letter(rep, l);
  return out;
}

// edge value making the word evaluate to the identity
Mat solve_word(const RepPoint& rep, const Word& w, int edge, int n) {
  Mat P = Mat::Identity(n, n), Q = Mat::Identity(n, n);
  int pos = -1, exp = 1;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    if (!w[i].internal && w[i].gen == edge) {
      if (pos >= 0) throw std::invalid_argument("solve edge occurs twice in a relation");
      pos = i;
      exp = w[i].exp;
      continue;
    }
    (pos < 0 ? P : Q) = (pos < 0 ? P : Q) * eval_letter(rep, w[i]);
  }
  if (pos < 0) throw std::invalid_argument("solve edge not in relation");
  Mat x = P.inverse() * Q.inverse();
  return exp == 1 ? x : Mat(x.inverse());
}

int group_size(const MatrixGroup& G) { return G.size(); }

bool is_full(const HSpec& h) { return h.kind == HSpec::Kind::Full; }

std::vector<Mat> real_generators(const MatrixGroup& G, const HSpec& h) {
  std::vector<Mat> out = subalgebra_basis(G, h);
  if (G.field == Field::Complex) {
    const std::size_t k = out.size();
    for (std::size_t i = 0; i < k; ++i) out.push_back(cd(0, 1) * out[i]);
  }
  return out;
}

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

double scale_of(const std::vector<Mat>& x) {
  double m = 1;
  for (const auto& a : x) m = std::max(m, max_abs(a));
  return m;
}

}  // namespace

double relation_residual(const MarkedSurface& s, const RepPoint& rep) {
  if (rep.edges.empty()) return 0;
  const int n = static_cast<int>(rep.edges.front().rows());
  double r = 0;
  for (const auto& w : s.relations) r = std::max(r, max_abs(eval_word(rep, w, n) - Mat::Identity(n, n)));
  return r;
}

std::vector<Mat> moment(const RepPoint& rep) { return rep.edges; }

std::pair<std::vector<Mat>, std::vector<Mat>> moment(const GluedRepPoint& pt) {
  return {pt.a.edges, pt.b.edges};
}

RepPoint gauge_act(const MarkedSurface& s, const GaugeElement& g, const RepPoint& rep) {
  RepPoint out = rep;
  for (int e = 0; e < s.graph.ne(); ++e)
    out.edges[e] = g.at(s.graph.tgt[e]) * rep.edges[e] * g.at(s.graph.src[e]).inverse();
  for (int i = 0; i < s.n_internal(); ++i)
    out.internal[i] = g.at(s.int_tgt[i]) * rep.internal[i] * g.at(s.int_src[i]).inverse();
  return out;
}

HSpec kernel_subgroup(const MatrixGroup& G, const Subspace& l) {
  MatrixAlgebra ma = lie_algebra(G);
  const Subspace diag = diagonal(l.amb);
  Mat k = intersect(l.basis, diag.basis);
  if (k.cols() == 0) return hs_trivial();
  std::vector<Mat> gens;
  for (int j = 0; j < k.cols(); ++j) gens.push_back(ma.mat(k.col(j).head(ma.dim())));
  return hs_generated(G, gens);
}

GaugeSpec kernel_gauge(const MatrixGroup& G, const Decoration& d) {
  GaugeSpec K;
  for (const auto& l : d.vertices) K.K.push_back(kernel_subgroup(G, l));
  return K;
}

GluedRepPoint gauge_act(const GluingMap& gm, const PairGauge& g, const GluedRepPoint& pt) {
  return {gauge_act(gm.base, g.a, pt.a), gauge_act(gm.base, g.b, pt.b)};
}

ModuliSpec polygon_moduli(const MarkedSurface& s, const MatrixGroup& G, const Decoration& d) {
  if (static_cast<int>(d.edges.size()) != s.graph.ne() || static_cast<int>(d.vertices.size()) != s.graph.nv)
    throw std::invalid_argument("decoration does not match the surface");
  return {s, G, d, kernel_gauge(G, d)};
}

GluedModuliSpec glued_moduli(const GluingMap& gm, const MatrixGroup& G, const Decoration& d) {
  const MarkedSurface& s = gm.base;
  if (static_cast<int>(d.edges.size()) != s.graph.ne() || static_cast<int>(d.vertices.size()) != s.graph.nv)
    throw std::invalid_argument("decoration does not match the surface");
  if (s.relations.size() != 1) throw std::invalid_argument("glued sampler expects a single relation");
  GluedModuliSpec spec{gm, G, d, {}, -1};
  for (int v = 0; v < s.graph.nv; ++v) {
    if (gm.in_vprime[v]) {
      spec.K.K.push_back(kernel_subgroup(G, d.vertices[v]));
      spec.K.shared.push_back(false);
    } else {
      spec.K.K.push_back(hs_full());
      spec.K.shared.push_back(true);
    }
  }
  std::vector<bool> inS(s.graph.ne(), false);
  for (int e : gm.S) inS[e] = true;
  for (int e = 0; e < s.graph.ne() && spec.solve_edge < 0; ++e)
    if (!inS[e] && is_full(d.edges[e])) spec.solve_edge = e;
  return spec;
}

double constraint_residual(const ModuliSpec& spec, const RepPoint& rep) {
  double r = relation_residual(spec.surface, rep);
  for (int e = 0; e < spec.surface.graph.ne(); ++e)
    r = std::max(r, membership_residual(spec.G, spec.deco.edges[e], rep.edges[e]));
  return r;
}

double constraint_residual(const GluedModuliSpec& spec, const GluedRepPoint& pt) {
  const GluingMap& gm = spec.gm;
  const MarkedSurface& s = gm.base;
  double r = std::max(relation_residual(s, pt.a), relation_residual(s, pt.b));
  std::vector<bool> inS(s.graph.ne(), false);
  for (int e : gm.S) inS[e] = true;
  for (int e = 0; e < s.graph.ne(); ++e) {
    const Mat& a = pt.a.edges[e];
    const Mat& b = pt.b.edges[e];
    const HSpec& H = spec.deco.edges[e];
    if (inS[e]) {
      r = std::max(r, max_abs(a - b));
    } else if (gm.merged[e]) {
      const Mat m = gm.in_vprime[s.graph.tgt[e]] ? Mat(b * a.inverse()) : Mat(a.inverse() * b);
      r = std::max(r, membership_residual(spec.G, H, m));
    } else {
      r = std::max({r, membership_residual(spec.G, H, a), membership_residual(spec.G, H, b)});
    }
  }
  return r;
}

bool satisfies(const ModuliSpec& spec, const RepPoint& rep) { return constraint_residual(spec, rep) <= 1e-9; }
bool satisfies(const GluedModuliSpec& spec, const GluedRepPoint& pt) {
  return constraint_residual(spec, pt) <= 1e-9;
}

GaugeElement sample_gauge(const MatrixGroup& G, const GaugeSpec& K, std::mt19937_64& rng) {
  GaugeElement g;
  for (const auto& h : K.K) g.push_back(sample(G, h, rng));
  return g;
}

PairGauge sample_gauge(const GluedModuliSpec& spec, std::mt19937_64& rng) {
  PairGauge g;
  for (std::size_t v = 0; v < spec.K.K.size(); ++v) {
    Mat x = sample(spec.G, spec.K.K[v], rng);
    g.a.push_back(x);
    g.b.push_back(spec.K.shared[v] ? x : sample(spec.G, spec.K.K[v], rng));
  }
  return g;
}

RepPoint sample_constrained(const ModuliSpec& spec, std::mt19937_64& rng) {
  const MarkedSurface& s = spec.surface;
  const int ne = s.graph.ne();
  std::vector<int> solve(s.relations.size(), -1);
  std::vector<bool> solved(ne, false);
  for (std::size_t r = 0; r < s.relations.size(); ++r) {
    for (const auto& l : s.relations[r])
      if (!l.internal && is_full(spec.deco.edges[l.gen]) && !solved[l.gen]) {
        solve[r] = l.gen;
        solved[l.gen] = true;
        break;
      }
    if (solve[r] < 0) throw std::invalid_argument("no full-group edge to solve relation " + std::to_string(r));
  }
  RepPoint rep;
  for (int e = 0; e < ne; ++e)
    rep.edges.push_back(solved[e] ? Mat(Mat::Identity(group_size(spec.G), group_size(spec.G)))
                                  : sample(spec.G, spec.deco.edges[e], rng));
  for (int i = 0; i < s.n_internal(); ++i) rep.internal.push_back(sample(spec.G, hs_full(), rng));
  for (std::size_t r = 0; r < s.relations.size(); ++r)
    rep.edges[solve[r]] = solve_word(rep, s.relations[r], solve[r], group_size(spec.G));
  return rep;
}

namespace {

enum class Role { S, Merged, Free, Solve };

std::vector<Role> roles(const GluedModuliSpec& spec) {
  if (spec.solve_edge < 0) throw std::invalid_argument("glued decoration has no unconstrained edge to solve");
  const GluingMap& gm = spec.gm;
  std::vector<Role> out(gm.base.graph.ne(), Role::Free);
  for (int e = 0; e < gm.base.graph.ne(); ++e)
    if (gm.merged[e]) out[e] = Role::Merged;
  for (int e : gm.S) out[e] = Role::S;
  out[spec.solve_edge] = Role::Solve;
  return out;
}

// b given a (forward) or a given b (backward)
RepPoint conditional_copy(const GluedModuliSpec& spec, const RepPoint& x, bool forward, std::mt19937_64& rng) {
  const GluingMap& gm = spec.gm;
  const MarkedSurface& s = gm.base;
  const auto rs = roles(spec);
  RepPoint y;
  y.edges.resize(s.graph.ne());
  const int n = group_size(spec.G);
  for (int e = 0; e < s.graph.ne(); ++e) {
    const HSpec& H = spec.deco.edges[e];
    switch (rs[e]) {
      case Role::S: y.edges[e] = x.edges[e]; break;
      case Role::Free: y.edges[e] = sample(spec.G, H, rng); break;
      case Role::Solve: y.edges[e] = Mat::Identity(n, n); break;
      case Role::Merged: {
        Mat h = sample(spec.G, H, rng);
        const bool right = !gm.in_vprime[s.graph.tgt[e]];  // a^{-1} b ∈ H
        if (forward) y.edges[e] = right ? Mat(x.edges[e] * h) : Mat(h * x.edges[e]);
        else y.edges[e] = right ? Mat(x.edges[e] * h.inverse()) : Mat(h.inverse() * x.edges[e]);
        break;
      }
    }
  }
  y.edges[spec.solve_edge] = solve_word(y, s.relations[0], spec.solve_edge, n);
  return y;
}

}  // namespace

GluedRepPoint sample_constrained(const GluedModuliSpec& spec, std::mt19937_64& rng) {
  const MarkedSurface& s = spec.gm.base;
  const auto rs = roles(spec);
  const int n = group_size(spec.G);
  RepPoint a;
  for (int e = 0; e < s.graph.ne(); ++e) {
    if (rs[e] == Role::Solve) a.edges.push_back(Mat::Identity(n, n));
    else if (rs[e] == Role::Free) a.edges.push_back(sample(spec.G, spec.deco.edges[e], rng));
    else a.edges.push_back(sample(spec.G, hs_full(), rng));
  }
  a.edges[spec.solve_edge] = solve_word(a, s.relations[0], spec.solve_edge, n);
  return sample_with_first(spec, a, rng);
}

GluedRepPoint sample_with_first(const GluedModuliSpec& spec, const RepPoint& a, std::mt19937_64& rng) {
  return {a, conditional_copy(spec, a, true, rng)};
}

GluedRepPoint sample_with_second(const GluedModuliSpec& spec, const RepPoint& b, std::mt19937_64& rng) {
  return {conditional_copy(spec, b, false, rng), b};
}

std::vector<Mat> phi_map(const GluedRepPoint& pt, const GluingMap& gm) {
  const MarkedSurface& s = gm.base;
  std::vector<Mat> out(gm.hat.graph.ne());
  for (int e = 0; e < s.graph.ne(); ++e) {
    if (gm.j1[e] < 0) continue;
    const Mat& a = pt.a.edges[e];
    const Mat& b = pt.b.edges[e];
    if (gm.merged[e]) {
      out[gm.j1[e]] = gm.in_vprime[s.graph.tgt[e]] ? Mat(b * a.inverse()) : Mat(a.inverse() * b);
    } else {
      out[gm.j1[e]] = a.inverse();
      out[gm.j2[e]] = b;
    }
  }
  return out;
}

GaugeProblem gauge_problem(const MarkedSurface& s, const MatrixGroup& G, const GaugeSpec& K) {
  GaugeProblem p{G, {}, {}, {}};
  for (const auto& h : K.K) p.slot_basis.push_back(real_generators(G, h));
  p.tgt_slot = s.graph.tgt;
  p.src_slot = s.graph.src;
  p.tgt_slot.insert(p.tgt_slot.end(), s.int_tgt.begin(), s.int_tgt.end());
  p.src_slot.insert(p.src_slot.end(), s.int_src.begin(), s.int_src.end());
  return p;
}

GaugeProblem gauge_problem(const GluedModuliSpec& spec) {
  const MarkedSurface& s = spec.gm.base;
  GaugeProblem p{spec.G, {}, {}, {}};
  const int nv = s.graph.nv;
  std::vector<int> slot_a(nv), slot_b(nv);
  for (int v = 0; v < nv; ++v) {
    slot_a[v] = p.nslots();
    p.slot_basis.push_back(real_generators(spec.G, spec.K.K[v]));
    if (spec.K.shared[v]) {
      slot_b[v] = slot_a[v];
    } else {
      slot_b[v] = p.nslots();
      p.slot_basis.push_back(real_generators(spec.G, spec.K.K[v]));
    }
  }
  for (int copy = 0; copy < 2; ++copy) {
    const auto& slot = copy == 0 ? slot_a : slot_b;
    for (int e = 0; e < s.graph.ne(); ++e) {
      p.tgt_slot.push_back(slot[s.graph.tgt[e]]);
      p.src_slot.push_back(slot[s.graph.src[e]]);
    }
  }
  return p;
}

std::vector<Mat> flatten(const GluedRepPoint& pt) {
  std::vector<Mat> x = pt.a.edges;
  x.insert(x.end(), pt.b.edges.begin(), pt.b.edges.end());
  return x;
}

GluedRepPoint unflatten(const std::vector<Mat>& x, int ne) {
  GluedRepPoint pt;
  pt.a.edges.assign(x.begin(), x.begin() + ne);
  pt.b.edges.assign(x.begin() + ne, x.begin() + 2 * ne);
  return pt;
}

std::vector<Mat> act(const GaugeProblem& p, const std::vector<Mat>& k, const std::vector<Mat>& x) {
  std::vector<Mat> out(x.size());
  for (std::size_t e = 0; e < x.size(); ++e) {
    Mat y = x[e];
    if (p.tgt_slot[e] >= 0) y = k[p.tgt_slot[e]] * y;
    if (p.src_slot[e] >= 0) y = y * k[p.src_slot[e]].inverse();
    out[e] = y;
  }
  return out;
}

Mat orbit_tangent(const GaugeProblem& p, const MatrixAlgebra& ma, const std::vector<Mat>& x) {
  const int d = ma.dim();
  const int ne = static_cast<int>(x.size());
  std::vector<Mat> cols;
  for (int s = 0; s < p.nslots(); ++s) {
    for (const auto& Y : p.slot_basis[s]) {
      Mat c = Mat::Zero(ne * d, 1);
      for (int e = 0; e < ne; ++e) {
        if (p.tgt_slot[e] == s) c.block(e * d, 0, d, 1) += ma.coords(Y);
        if (p.src_slot[e] == s) c.block(e * d, 0, d, 1) -= ma.coords(x[e] * Y * x[e].inverse());
      }
      cols.push_back(c);
    }
  }
  if (cols.empty()) return Mat::Zero(ne * d, 0);
  return hstack(cols);
}

GaugeSolve solve_gauge(const GaugeProblem& p, const std::vector<Mat>& x, const std::vector<Mat>& y) {
  const int n = group_size(p.G);
  GaugeSolve out;
  out.k.assign(p.nslots(), Mat::Identity(n, n));
  std::vector<std::pair<int, Mat>> gens;
  for (int s = 0; s < p.nslots(); ++s)
    for (const auto& Y : p.slot_basis[s]) gens.emplace_back(s, Y);
  const double scale = std::max(scale_of(x), scale_of(y));
  auto residual_of = [&](const std::vector<Mat>& k) {
    auto z = act(p, k, x);
    for (std::size_t e = 0; e < z.size(); ++e) z[e] -= y[e];
    return z;
  };
  auto cur = residual_of(out.k);
  double cur_norm = stack_real(cur).norm();
  double lambda = 1e-6;
  for (out.iterations = 0; out.iterations < 200; ++out.iterations) {
    out.residual = 0;
    for (const auto& r : cur) out.residual = std::max(out.residual, max_abs(r));
    if (out.residual <= 1e-10 * scale) {
      out.converged = true;
      break;
    }
    if (gens.empty()) break;
    const auto z = act(p, out.k, x);
    RMat J(stack_real(cur).size(), static_cast<Eigen::Index>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const auto& [s, Y] = gens[j];
      std::vector<Mat> dz(z.size());
      for (std::size_t e = 0; e < z.size(); ++e) {
        dz[e] = Mat::Zero(n, n);
        if (p.tgt_slot[e] == s) dz[e] += Y * z[e];
        if (p.src_slot[e] == s) dz[e] -= z[e] * Y;
      }
      J.col(static_cast<Eigen::Index>(j)) = stack_real(dz);
    }
    const RVec r = stack_real(cur);
    RMat JtJ = J.transpose() * J;
    const RVec g = J.transpose() * r;
    bool accepted = false;
    for (int attempt = 0; attempt < 8 && !accepted; ++attempt) {
      RMat M = JtJ;
      M.diagonal().array() += lambda * (1.0 + JtJ.diagonal().array());
      RVec delta = -M.ldlt().solve(g);
      double t = 1.0;
      for (int half = 0; half < 12; ++half, t *= 0.5) {
        std::vector<Mat> k = out.k;
        std::vector<Mat> step(p.nslots(), Mat::Zero(n, n));
        for (std::size_t j = 0; j < gens.size(); ++j) step[gens[j].first] += t * delta(static_cast<Eigen::Index>(j)) * gens[j].second;
        for (int s = 0; s < p.nslots(); ++s) k[s] = expm(step[s]) * k[s];
        auto trial = residual_of(k);
        const double nn = stack_real(trial).norm();
        if (nn < cur_norm) {
          out.k = k;
          cur = trial;
          cur_norm = nn;
          accepted = true;
          lambda = std::max(lambda * 0.3, 1e-12);
          break;
        }
      }
      if (!accepted) lambda *= 10;
    }
    if (!accepted) break;
  }
  out.residual = 0;
  for (const auto& r : cur) out.residual = std::max(out.residual, max_abs(r));
  out.converged = out.residual <= 1e-10 * scale;
  return out;
}

OrbitVerdict same_orbit(const GaugeProblem& p, const std::vector<Mat>& x, const std::vector<Mat>& y,
                        const ChartDistance& chart) {
  OrbitVerdict v;
  if (chart) {
    const double d = chart(x, y);
    v.residual = d;
    v.tier = 1;
    if (d <= 1e-8) {
      v.verdict = Verdict::True;
      return v;
    }
    if (d > 1e-6) {
      v.verdict = Verdict::False;
      return v;
    }
  }
  GaugeSolve gs = solve_gauge(p, x, y);
  if (gs.residual <= 1e-8 * std::max(scale_of(x), scale_of(y))) {
    v.verdict = Verdict::True;
    v.tier = 2;
    v.residual = gs.residual;
    v.gauge = gs.k;
    return v;
  }
  // tangent-level test for nearby points
  MatrixAlgebra ma = lie_algebra(p.G);
  const int d = ma.dim();
  Mat delta = Mat::Zero(static_cast<Eigen::Index>(x.size()) * d, 1);
  double size = 0;
  for (std::size_t e = 0; e < x.size(); ++e) {
    const Mat q = y[e] * x[e].inverse();
    size = std::max(size, max_abs(q - Mat::Identity(q.rows(), q.cols())));
  }
  v.tier = 3;
  if (size > 1e-3) {
    v.verdict = Verdict::Unknown;
    v.residual = gs.residual;
    return v;
  }
  for (std::size_t e = 0; e < x.size(); ++e)
    delta.block(static_cast<Eigen::Index>(e) * d, 0, d, 1) = ma.coords(logm(y[e] * x[e].inverse()));
  const Mat T = orbit_tangent(p, ma, x);
  double normal = delta.norm();
  if (T.cols() > 0) {
    const Mat Q = orth(T);
    normal = (delta - Q * (Q.adjoint() * delta)).norm();
  }
  v.residual = normal;
  const double dn = delta.norm();
  v.verdict = normal <= 100 * dn * dn + 1e-12 ? Verdict::True : Verdict::False;
  return v;
}

Mat chart_poigr(const GluedRepPoint& pt) { return pt.a.edges.at(1).inverse() * pt.b.edges.at(1); }

Mat chart_poigro0(const GluedRepPoint& pt) { return pt.a.edges.at(2).inverse() * pt.b.edges.at(2); }

std::vector<Mat> chart_dousym2(const QuadRepPoint& q) {
  return {q.a.edges[0] * q.b.edges[0].inverse(), q.a.edges[1].inverse() * q.c.edges[1],
          q.c.edges[0] * q.d.edges[0].inverse(), q.b.edges[1].inverse() * q.d.edges[1]};
}

CosetChart chart_brucel_psi(const GluedRepPoint& pt) {
  const Mat p = pt.a.edges.at(0).inverse();
  const Mat q = pt.b.edges.at(0).inverse() * pt.b.edges.at(1).inverse() * pt.a.edges.at(1);
  return {p, p * q.inverse()};
}

CosetChart chart_brucel_slice(const std::vector<Mat>& x) {
  const Mat p = x.at(0);
  const Mat q = x.at(2).inverse() * x.at(1).inverse();
  return {p, p * q.inverse()};
}

namespace {
double lower_part(const Mat& m) {
  double r = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < i; ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}
}  // namespace

bool same_coset_upper(const Mat& x, const Mat& y, double tol) { return lower_part(x.inverse() * y) <= tol; }

double coset_chart_distance(const CosetChart& x, const CosetChart& y) {
  return std::max(lower_part(x.coset.inverse() * y.coset), max_abs(x.elem - y.elem));
}

namespace {

// d from b and c: d4 = c4, d3 = b3, c1 d1^{-1} ∈ B, b2^{-1} d2 ∈ A
RepPoint complete_d(const MatrixGroup& G, const RepPoint& b, const RepPoint& c) {
  const Mat& q = c.edges[3];
  const Mat& t = b.edges[2];
  const Mat m = b.edges[1].inverse() * t.inverse() * q.inverse() * c.edges[0].inverse();
  const GaussFactors f = gauss_factorize(G, m);
  const Mat d1 = f.dual_part() * c.edges[0];
  return RepPoint{{d1, (q * t).inverse() * d1.inverse(), t, q}, {}};
}

template <class F>
QuadRepPoint retry(const Dousym2Spec& spec, F&& draw) {
  for (int attempt = 0; attempt <= spec.max_retries; ++attempt) {
    try {
      return draw();
    } catch (const OffCellError&) {
    }
  }
  throw OffCellError("dousym2 sampler: repeated off-cell factorizations");
}

}  // namespace

QuadRepPoint complete_dousym2(const Dousym2Spec& spec, const RepPoint& a, const RepPoint& b, const RepPoint& c) {
  return {a, b, c, complete_d(spec.G, b, c)};
}

QuadRepPoint sample_dousym2_given_left(const Dousym2Spec& spec, const RepPoint& a, const RepPoint& c,
                                       std::mt19937_64& rng) {
  const MatrixGroup& G = spec.G;
  return retry(spec, [&] {
    const Mat& p = a.edges[3];
    const Mat t = sample(G, hs_full(), rng);
    const Mat beta = sample(G, hs_dual(), rng);
    RepPoint b{{beta * a.edges[0], Mat(), t, p}, {}};
    b.edges[1] = (p * t).inverse() * b.edges[0].inverse();
    return QuadRepPoint{a, b, c, complete_d(G, b, c)};
  });
}

QuadRepPoint sample_dousym2_given_top(const Dousym2Spec& spec, const RepPoint& a, const RepPoint& b,
                                      std::mt19937_64& rng) {
  const MatrixGroup& G = spec.G;
  return retry(spec, [&] {
    const Mat q = sample(G, hs_full(), rng);
    const Mat alpha = sample(G, hs_diagonal(), rng);
    RepPoint c{{Mat(), a.edges[1] * alpha, a.edges[2], q}, {}};
    c.edges[0] = (q * c.edges[2] * c.edges[1]).inverse();
    return QuadRepPoint{a, b, c, complete_d(G, b, c)};
  });
}

QuadRepPoint sample_dousym2(const Dousym2Spec& spec, std::mt19937_64& rng) {
  const MatrixGroup& G = spec.G;
  return retry(spec, [&] {
    const Mat p = sample(G, hs_full(), rng), r = sample(G, hs_full(), rng);
    RepPoint a{{sample(G, hs_full(), rng), Mat(), r, p}, {}};
    a.edges[1] = (p * r).inverse() * a.edges[0].inverse();
    const Mat t = sample(G, hs_full(), rng);
    const Mat beta = sample(G, hs_dual(), rng);
    RepPoint b{{beta * a.edges[0], Mat(), t, p}, {}};
    b.edges[1] = (p * t).inverse() * b.edges[0].inverse();
    return sample_dousym2_given_top(spec, a, b, rng);
  });
}

double dousym2_constraint_residual(const Dousym2Spec& spec, const QuadRepPoint& q) {
  const MatrixGroup& G = spec.G;
  const MarkedSurface sq = new_polygon(4);
  double r = 0;
  for (const RepPoint* x : {&q.a, &q.b, &q.c, &q.d}) r = std::max(r, relation_residual(sq, *x));
  r = std::max({r, max_abs(q.a.edges[3] - q.b.edges[3]), max_abs(q.c.edges[3] - q.d.edges[3]),
                max_abs(q.a.edges[2] - q.c.edges[2]), max_abs(q.b.edges[2] - q.d.edges[2])});
  r = std::max({r, membership_residual(G, hs_dual(), q.a.edges[0] * q.b.edges[0].inverse()),
                membership_residual(G, hs_dual(), q.c.edges[0] * q.d.edges[0].inverse()),
                membership_residual(G, hs_diagonal(), q.a.edges[1].inverse() * q.c.edges[1]),
                membership_residual(G, hs_diagonal(), q.b.edges[1].inverse() * q.d.edges[1])});
  return r;
}

namespace {
nlohmann::json mat_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) {
      if (m(i, j).imag() == 0) row.push_back(m(i, j).real());
      else row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(row);
  }
  return rows;
}

Mat json_mat(const nlohmann::json& j) {
  const int r = static_cast<int>(j.size());
  const int c = r ? static_cast<int>(j[0].size()) : 0;
  Mat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(j[i].size()) != c) throw std::invalid_argument("ragged matrix");
    for (int k = 0; k < c; ++k) {
      const auto& x = j[i][k];
      m(i, k) = x.is_array() ? cd(x.at(0).get<double>(), x.at(1).get<double>()) : cd(x.get<double>(), 0);
    }
  }
  return m;
}
}  // namespace

std::string rep_to_json(const RepPoint& rep) {
  nlohmann::json j;
  j["edges"] = nlohmann::json::array();
  j["internal"] = nlohmann::json::array();
  for (const auto& m : rep.edges) j["edges"].push_back(mat_json(m));
  for (const auto& m : rep.internal) j["internal"].push_back(mat_json(m));
  return j.dump();
}

RepPoint rep_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RepPoint rep;
  for (const auto& m : j.at("edges")) rep.edges.push_back(json_mat(m));
  if (j.contains("internal"))
    for (const auto& m : j.at("internal")) rep.internal.push_back(json_mat(m));
  return rep;
}

}  // namespace modlab
