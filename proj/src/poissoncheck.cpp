#include "modlab/poissoncheck.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace modlab {

namespace {

constexpr double kStep = tol::fd_step;

Mat antisym(const Mat& P) { return (P - P.transpose()) / 2.0; }

// rows: matrix entries (k, a, b) of every factor; columns: frame index
Mat coordinate_gradients(const MatrixAlgebra& ma, const GroupPoint& y) {
  const int sz = ma.grp.size(), d = ma.dim(), nf = static_cast<int>(y.size());
  Mat D = Mat::Zero(nf * sz * sz, nf * d);
  for (int k = 0; k < nf; ++k)
    for (int j = 0; j < d; ++j) {
      Mat g = ma.basis[j] * y[k];
      for (int a = 0; a < sz; ++a)
        for (int b = 0; b < sz; ++b) D(k * sz * sz + a * sz + b, k * d + j) = g(a, b);
    }
  return D;
}

Mat bracket_matrix(const BivectorField& pi, const GroupPoint& y) {
  Mat D = coordinate_gradients(pi.ma, y);
  return D * pi(y) * D.transpose();
}

struct Jet {
  Mat D, P;
  std::vector<Mat> dbr;  // X_J {g, h}
};

Jet bracket_jet(const BivectorField& pi, const GroupPoint& x) {
  Jet j;
  j.D = coordinate_gradients(pi.ma, x);
  j.P = pi(x);
  const int m = pi.dim();
  j.dbr.resize(m);
  for (int J = 0; J < m; ++J) {
    Mat plus = bracket_matrix(pi, move(pi.ma, x, J, kStep));
    Mat minus = bracket_matrix(pi, move(pi.ma, x, J, -kStep));
    j.dbr[J] = (plus - minus) / (2 * kStep);
  }
  return j;
}

// J(f, g, h) = {{f, g}, h} + cyclic = (1/2)[pi, pi](df, dg, dh), flat array indexed f * n^2 + g * n + h
std::vector<cd> jacobiator(const Jet& j) {
  const int n = static_cast<int>(j.D.rows()), m = static_cast<int>(j.P.rows());
  Mat DP = j.D * j.P;
  // T(f, g, h) = sum_J DP(f, J) dbr_J(g, h)
  std::vector<cd> T(static_cast<size_t>(n) * n * n, cd(0));
  for (int J = 0; J < m; ++J)
    for (int f = 0; f < n; ++f) {
      const cd c = DP(f, J);
      if (c == cd(0)) continue;
      for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h) T[(static_cast<size_t>(f) * n + g) * n + h] += c * j.dbr[J](g, h);
    }
  std::vector<cd> out(T.size());
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h) {
        auto at = [&](int a, int b, int c) { return T[(static_cast<size_t>(a) * n + b) * n + c]; };
        out[(static_cast<size_t>(f) * n + g) * n + h] = -(at(f, g, h) + at(g, h, f) + at(h, f, g));
      }
  return out;
}

// sum chi^{jkl} (rho_j f)(rho_k g)(rho_l h)
std::vector<cd> contract3(const Mat& W, const std::vector<Mat>& chi) {
  const int n = static_cast<int>(W.rows()), r = static_cast<int>(W.cols());
  // Y[j](g, h) = sum_kl chi[j](k, l) W(g, k) W(h, l)
  std::vector<Mat> Y(r);
  for (int j = 0; j < r; ++j) Y[j] = W * chi[j] * W.transpose();
  std::vector<cd> out(static_cast<size_t>(n) * n * n, cd(0));
  for (int f = 0; f < n; ++f)
    for (int j = 0; j < r; ++j) {
      const cd c = W(f, j);
      if (c == cd(0)) continue;
      for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h) out[(static_cast<size_t>(f) * n + g) * n + h] += c * Y[j](g, h);
    }
  return out;
}

std::shared_ptr<QuadLieAlgebra> direct_sum_algebra(const QuadLieAlgebra& g, int copies) {
  auto s = std::make_shared<QuadLieAlgebra>();
  const int gd = g.dim, D = gd * copies;
  s->dim = D;
  s->name = g.name + "^" + std::to_string(copies);
  std::vector<Mat> forms(copies, g.form);
  s->form = block_diag(forms);
  s->ad.assign(D, Mat::Zero(D, D));
  for (int c = 0; c < copies; ++c)
    for (int i = 0; i < gd; ++i) s->ad[c * gd + i].block(c * gd, c * gd, gd, gd) = g.ad[i];
  return s;
}

// vertex v of d^V, one double per vertex
Mat vertex_embed(int d, int nv, int v, const Mat& local) {
  Mat out = Mat::Zero(2 * d * nv, local.cols());
  out.block(2 * d * v, 0, 2 * d, local.cols()) = local;
  return out;
}

bool is_gauge_corner(const BruhatSquare& sq, int v) {
  return std::find(sq.gauge_corners.begin(), sq.gauge_corners.end(), v) != sq.gauge_corners.end();
}

Mat diag_embed(int d, int nv, int v) {
  Mat local(2 * d, d);
  local << Mat::Identity(d, d), Mat::Identity(d, d);
  return vertex_embed(d, nv, v, local);
}

}  // namespace

BivectorField constant_bivector(const MatrixAlgebra& ma, int factors, const Mat& P, std::string name) {
  if (P.rows() != factors * ma.dim() || P.cols() != P.rows()) throw std::invalid_argument("bivector size mismatch");
  BivectorField b{std::move(name), ma, factors, nullptr};
  Mat Q = antisym(P);
  b.eval = [Q](const GroupPoint&) { return Q; };
  return b;
}

BivectorField poisson_lie_bivector(const MatrixAlgebra& ma, const RMatrix& r) {
  if (r.skew.rows() != ma.dim()) throw std::invalid_argument("r-matrix does not match the algebra");
  BivectorField b{"pi_G", ma, 1, nullptr};
  const Mat L = r.skew;
  // with E = Ad_g - 1 computed from g X g^{-1} - X, so that P(1) = 0 exactly
  b.eval = [ma, L](const GroupPoint& x) {
    const Mat& g = x[0];
    const Mat gi = g.inverse();
    Mat E(ma.dim(), ma.dim());
    for (int i = 0; i < ma.dim(); ++i) E.col(i) = ma.coords(g * ma.basis[i] * gi - ma.basis[i]);
    Mat Ad = E + Mat::Identity(ma.dim(), ma.dim());
    return antisym(-(E * L * Ad.transpose() + L * E.transpose()));
  };
  return b;
}

BivectorField product_bivector(const BivectorField& pi0, const std::vector<int>& signs) {
  if (pi0.factors != 1) throw std::invalid_argument("product_bivector expects a bivector on one factor");
  const int d = pi0.ma.dim(), nf = static_cast<int>(signs.size());
  BivectorField b{pi0.name + "^" + std::to_string(nf), pi0.ma, nf, nullptr};
  b.eval = [pi0, signs, d, nf](const GroupPoint& x) {
    Mat P = Mat::Zero(nf * d, nf * d);
    for (int k = 0; k < nf; ++k) P.block(k * d, k * d, d, d) = double(signs[k]) * pi0({x[k]});
    return P;
  };
  return b;
}

BivectorField shifted(const BivectorField& pi, const Mat& C) {
  BivectorField b = pi;
  b.name = pi.name + "+C";
  Mat Q = antisym(C);
  auto base = pi.eval;
  b.eval = [base, Q](const GroupPoint& x) { return Mat(base(x) + Q); };
  return b;
}

double antisymmetry_residual(const BivectorField& pi, const GroupPoint& x) {
  Mat P = pi(x);
  return max_abs(P + P.transpose());
}

GroupPoint move(const MatrixAlgebra& ma, const GroupPoint& x, int index, double t) {
  const int d = ma.dim();
  GroupPoint y = x;
  y[index / d] = expm(t * ma.basis[index % d]) * x[index / d];
  return y;
}

GroupPoint sample_point(const MatrixAlgebra& ma, int factors, std::mt19937_64& rng) {
  GroupPoint x;
  for (int k = 0; k < factors; ++k) x.push_back(sample(ma.grp, hs_full(), rng));
  return x;
}

CheckReport check_multiplicative_group(const BivectorField& pi, int samples, std::uint64_t seed) {
  if (pi.factors != 1) throw std::invalid_argument("multiplicativity needs a group domain");
  CheckReport rep;
  rep.check = "multiplicative:" + pi.name;
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    Mat g = sample(pi.ma.grp, hs_full(), rng), h = sample(pi.ma.grp, hs_full(), rng);
    Mat Ad = pi.ma.Ad(g);
    Mat lhs = pi({Mat(g * h)});
    Mat rhs = pi({g}) + Ad * pi({h}) * Ad.transpose();
    rep.add("identity", max_abs(lhs - rhs));
    rep.samples++;
  }
  rep.pass = rep.samples > 0 && rep.max_residual <= 1e-9;
  return rep;
}

CheckReport check_jacobi(const BivectorField& pi, const std::vector<GroupPoint>& points) {
  CheckReport rep;
  rep.check = "jacobi:" + pi.name;
  for (const auto& x : points) {
    auto J = jacobiator(bracket_jet(pi, x));
    double r = 0;
    for (const cd& v : J) r = std::max(r, std::abs(v));
    rep.add("jacobiator", r);
    rep.add("antisymmetry", antisymmetry_residual(pi, x));
    rep.samples++;
  }
  rep.pass = rep.samples > 0 && rep.max_residual <= 1e-6;
  return rep;
}

namespace {

double jacobi_defect(const QuasiPoissonData& qp, const GroupPoint& x) {
  Jet jet = bracket_jet(qp.pi, x);
  auto J = jacobiator(jet);
  auto C = contract3(jet.D * qp.action(x), qp.chi);
  double r = 0;
  for (size_t i = 0; i < J.size(); ++i) r = std::max(r, std::abs(J[i] - C[i]));
  return r;
}

// (L_{rho(u_i)} pi)(f, g) - rho(delta u_i)(f, g) over matrix-entry coordinates
double lie_derivative_defect(const QuasiPoissonData& qp, const GroupPoint& x) {
  const auto& ma = qp.pi.ma;
  Jet jet = bracket_jet(qp.pi, x);
  const int m = qp.pi.dim();
  Mat rho = qp.action(x);
  Mat W = jet.D * rho;
  const int r = static_cast<int>(rho.cols()), n = static_cast<int>(W.rows());
  std::vector<Mat> dW(m);
  for (int J = 0; J < m; ++J) {
    GroupPoint p = move(ma, x, J, kStep), q = move(ma, x, J, -kStep);
    dW[J] = (coordinate_gradients(ma, p) * qp.action(p) - coordinate_gradients(ma, q) * qp.action(q)) / (2 * kStep);
  }
  double worst = 0;
  for (int i = 0; i < r; ++i) {
    Mat Vbr = Mat::Zero(n, n), G(n, m);
    for (int J = 0; J < m; ++J) {
      Vbr += rho(J, i) * jet.dbr[J];
      G.col(J) = dW[J].col(i);
    }
    Mat lie = Vbr - G * jet.P * jet.D.transpose() - jet.D * jet.P * G.transpose();
    Mat rhs = W * qp.delta[i] * W.transpose();
    worst = std::max(worst, max_abs(lie - rhs));
  }
  return worst;
}

}  // namespace

CheckReport check_jacobi(const QuasiPoissonData& qp, const std::vector<GroupPoint>& points) {
  CheckReport rep;
  rep.check = "jacobi_defect:" + qp.pi.name;
  for (const auto& x : points) {
    rep.add("defect", jacobi_defect(qp, x));
    rep.samples++;
  }
  rep.pass = rep.samples > 0 && rep.max_residual <= 1e-5;
  return rep;
}

GroupPoint complete_polygon(const MatrixAlgebra& ma, const GroupPoint& free) {
  const int sz = ma.grp.size();
  Mat prod = Mat::Identity(sz, sz);
  for (auto it = free.rbegin(); it != free.rend(); ++it) prod = prod * *it;
  GroupPoint full = free;
  full.push_back(prod.inverse());
  return full;
}

QuasiPoissonData polygon_quasi_poisson(const MatrixAlgebra& ma, int n) {
  const int d = ma.dim(), nd = n * d, m = (n - 1) * d;
  const MarkedSurface s = new_polygon(n);
  const Mat Lb = diagonal_fiber(ma, n), Ab = lagrangian_complement_fiber(s.graph, ma);
  const Mat split = hstack({Lb, Ab}).inverse();
  const Mat GDinv = dV_form(ma, n).inverse();

  struct Stage {
    GroupPoint key;
    Mat P, action, pullback, astar;
  };
  auto cache = std::make_shared<Stage>();
  auto stage = [=](const GroupPoint& free) -> const Stage& {
    bool hit = cache->key.size() == free.size();
    for (size_t k = 0; hit && k < free.size(); ++k) hit = cache->key[k] == free[k];
    if (hit) return *cache;
    PolygonFiber pf = polygon_morphism_fiber(s, ma, complete_polygon(ma, free));
    Composition c = compose(pf.R, subspace_relation(pf.cartan.space, Ab));
    cache->key = free;
    cache->P = antisym(extract_bivector(c.rel).P);
    cache->action = (pf.cartan.anchor * Lb).topRows(m);
    cache->pullback = pf.chart.transpose();
    cache->astar = -(split * GDinv * pf.cartan.anchor.transpose()).topRows(nd);
    return *cache;
  };

  QuasiPoissonData qp;
  qp.pi = BivectorField{"pi_M(polygon" + std::to_string(n) + ")", ma, n - 1, nullptr};
  qp.pi.eval = [stage](const GroupPoint& x) { return stage(x).P; };
  qp.action = [stage](const GroupPoint& x) { return stage(x).action; };
  qp.moment_pullback = [stage](const GroupPoint& x) { return stage(x).pullback; };
  qp.a_star = [stage](const GroupPoint& x) { return stage(x).astar; };

  auto dV = direct_sum_algebra(double_algebra(*ma.alg), n);
  QuasiBialgebraData q = split_quasi_bialgebra(make_subspace(dV, Lb), make_subspace(dV, Ab));
  qp.chi = q.chi;
  qp.delta = q.delta;
  return qp;
}

CheckReport check_polygon_dirac(const MatrixAlgebra& ma, int n, const std::vector<GroupPoint>& points) {
  const int m = (n - 1) * ma.dim();
  const MarkedSurface s = new_polygon(n);
  const Mat Lb = diagonal_fiber(ma, n), Ab = lagrangian_complement_fiber(s.graph, ma);
  CheckReport r;
  r.check = "polygon-dirac(" + std::to_string(n) + ")";
  for (const GroupPoint& free : points) {
    PolygonFiber pf = polygon_morphism_fiber(s, ma, complete_polygon(ma, free));
    Composition L = compose(pf.R, subspace_relation(pf.cartan.space, Lb));
    Mat kernel = dirac_kernel(L.rel);
    Mat TK = orth((pf.cartan.anchor * Lb).topRows(m));
    r.add("kernel_dim_gap", std::abs(double(kernel.cols() - TK.cols())));
    r.add("kernel_containment", std::max(containment_residual(kernel, TK), containment_residual(TK, kernel)));
    Composition A = compose(pf.R, subspace_relation(pf.cartan.space, Ab));
    Bivector bv;
    try {
      bv = extract_bivector(A.rel);
    } catch (const std::domain_error&) {
      bv.graph = false;
    }
    r.add("not_graph", (bv.graph && A.clean) ? 0.0 : 1.0);
    r.add("antisymmetry", bv.antisymmetry);
    ++r.samples;
  }
  r.pass = r.samples > 0 && r.max_residual <= 1e-8;
  return r;
}

QuasiPoissonData perturbed_anchor(const QuasiPoissonData& qp, double size, std::uint64_t seed) {
  QuasiPoissonData out = qp;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  auto base = qp.action;
  auto noise = std::make_shared<Mat>();
  out.action = [base, noise, size, rng, nd](const GroupPoint& x) mutable {
    Mat a = base(x);
    if (noise->size() == 0) {
      *noise = Mat(a.rows(), a.cols());
      for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) (*noise)(i, j) = nd(rng);
    }
    return Mat(a + size * *noise);
  };
  return out;
}

double third_axiom_residual(const QuasiPoissonData& qp, const GroupPoint& x) {
  return max_abs(qp.pi(x) * qp.moment_pullback(x) - qp.action(x) * qp.a_star(x));
}

CheckReport quasi_poisson_axioms(const QuasiPoissonData& qp, const std::vector<GroupPoint>& points) {
  CheckReport rep;
  rep.check = "quasi_poisson:" + qp.pi.name;
  bool ok = true;
  double third = 0, jac = 0, lie = 0;
  for (const auto& x : points) {
    third = std::max(third, third_axiom_residual(qp, x));
    jac = std::max(jac, jacobi_defect(qp, x));
    lie = std::max(lie, lie_derivative_defect(qp, x));
    rep.samples++;
  }
  rep.add("third", third);
  rep.add("jacobi_defect", jac);
  rep.add("lie_derivative", lie);
  ok = third <= 1e-8 && jac <= 1e-5 && lie <= 1e-5;
  rep.pass = rep.samples > 0 && ok;
  return rep;
}

BruhatSquare bruhat_square(int n) {
  BruhatSquare sq;
  sq.ma = lie_algebra(MatrixGroup{n, 1, Field::Complex});
  sq.surface = new_polygon(4);
  sq.roots = sl_root_data(n);
  sq.lambda = standard_r_matrix(*sq.ma.alg, sq.roots).skew;
  AlgPtr d = std::make_shared<QuadLieAlgebra>(double_algebra(*sq.ma.alg));
  const int dim = sq.ma.dim(), nb = (n - 1) + n * (n - 1) / 2;
  Mat bplus = Mat::Identity(dim, dim).leftCols(nb);
  const Subspace bt = tilde_c(make_subspace(sq.ma.alg, bplus), d);
  const Subspace gstar = sl_dual_subspace(d, n);
  sq.corners = {bar(bt), bt, gstar, bar(gstar)};
  sq.gauge_corners = {0, 1};
  return sq;
}

GroupPoint sample_bruhat_point(const BruhatSquare& sq, std::mt19937_64& rng) {
  const auto& G = sq.ma.grp;
  GroupPoint free = {sample(G, hs_full(), rng), sample(G, hs_borel_upper(), rng), sample(G, hs_full(), rng)};
  return complete_polygon(sq.ma, free);
}

Mat square_bivector_brucel(const BruhatSquare& sq, const GroupPoint& x) {
  if (sq.roots.pos.cols() == 0) throw std::invalid_argument("missing root data");
  if (x.size() != 4) throw std::invalid_argument("the square has four edges");
  const int d = sq.ma.dim();
  Mat P = Mat::Zero(4 * d, 4 * d);
  // E^l_alpha on edge `left`, E^r_{-alpha} on edge `right`
  auto wedge = [&](int left, int right) {
    Mat Ad = sq.ma.Ad(x[left]);
    for (int a = 0; a < sq.roots.pos.cols(); ++a) {
      Vec u = Vec::Zero(4 * d), v = Vec::Zero(4 * d);
      u.segment(left * d, d) = Ad * sq.roots.pos.col(a);
      v.segment(right * d, d) = sq.roots.neg.col(a);
      P += 0.5 * (u * v.transpose() - v * u.transpose());
    }
  };
  // edges x4, x3, x2, x1 are polygon edges 0, 1, 2, 3
  wedge(0, 1);
  wedge(2, 3);
  CartanFiber cf = cartan_fiber(sq.surface.graph, sq.ma, x);
  for (int v = 0; v < 4; ++v) {
    if (is_gauge_corner(sq, v)) continue;
    Mat Av = cf.anchor * diag_embed(d, 4, v);
    P += Av * sq.lambda * Av.transpose();
  }
  return P;
}

Mat corner_twist(const MatrixAlgebra& ma, const Subspace& l) {
  const int d = ma.dim();
  Mat Lb(2 * d, d), Ab(2 * d, d);
  Lb << Mat::Identity(d, d), Mat::Identity(d, d);
  Ab << Mat::Identity(d, d), -Mat::Identity(d, d);
  Mat c = hstack({Lb, Ab}).inverse() * l.basis;
  Mat cl = c.topRows(d), ca = c.bottomRows(d);
  if (numeric_rank(ca) == d) return Mat(cl * ca.inverse() * (2.0 * ma.alg->form).inverse());
  const int kl = static_cast<int>(intersect(l.basis, Lb).cols()), ka = static_cast<int>(intersect(l.basis, Ab).cols());
  if (kl + ka == d) return Mat::Zero(d, d);
  throw std::invalid_argument("corner Lagrangian is neither a graph over A nor split");
}

namespace {

Mat pipeline_from_fiber(const BruhatSquare& sq, const PolygonFiber& pf) {
  const int d = sq.ma.dim(), m = 3 * d;
  Mat P = antisym(extract_bivector(compose(pf.R, subspace_relation(pf.cartan.space, lagrangian_complement_fiber(
                                                                                       sq.surface.graph, sq.ma)))
                                       .rel)
                      .P);
  for (int v = 0; v < 4; ++v) {
    Mat Av = (pf.cartan.anchor * diag_embed(d, 4, v)).topRows(m);
    P += Av * corner_twist(sq.ma, sq.corners[v]) * Av.transpose();
  }
  return P;
}

}  // namespace

Mat square_bivector_pipeline(const BruhatSquare& sq, const GroupPoint& x) {
  return pipeline_from_fiber(sq, polygon_morphism_fiber(sq.surface, sq.ma, x));
}

BruhatCalibration bruhat_calibration(const BruhatSquare& sq, const GroupPoint& x) {
  const int d = sq.ma.dim(), m = 3 * d;
  PolygonFiber pf = polygon_morphism_fiber(sq.surface, sq.ma, x);
  const Mat& A = pf.cartan.anchor;
  std::vector<Mat> cols, gauge;
  for (int v = 0; v < 4; ++v) {
    cols.push_back(vertex_embed(d, 4, v, sq.corners[v].basis));
    Mat k = intersect(sq.corners[v].basis, diagonal(sq.corners[v].amb).basis);
    if (k.cols() > 0) gauge.push_back((A * vertex_embed(d, 4, v, k)).topRows(m));
  }
  Composition D = compose(pf.R, subspace_relation(pf.cartan.space, hstack(cols)));
  BruhatCalibration cal;
  Mat kernel = dirac_kernel(D.rel);
  Mat TK = gauge.empty() ? Mat(m, 0) : orth(hstack(gauge));
  cal.kernel_dim = static_cast<int>(kernel.cols());
  cal.gauge_dim = static_cast<int>(TK.cols());
  cal.kernel_containment = std::max(containment_residual(kernel, TK), containment_residual(TK, kernel));

  // conormals of the gauge orbits and their Dirac lifts
  Mat W = null_space(TK.transpose());
  Mat V = D.rel.basis.topRows(m), Bc = D.rel.basis.bottomRows(m);
  Mat VW = V * Bc.completeOrthogonalDecomposition().solve(W);
  auto gap = [&](const Mat& P) { return max_abs(W.transpose() * (P * W - VW)); };

  Mat pipe = pipeline_from_fiber(sq, pf);
  cal.basic_gap_pipeline = gap(pipe);

  Mat Phat = square_bivector_brucel(sq, x);
  Mat Q = Phat.topLeftCorner(m, m);
  cal.tangency = max_abs(Phat - pf.chart * Q * pf.chart.transpose());
  cal.basic_gap_formula = gap(Q);
  cal.full_tensor_gap = max_abs(Q - pipe);

  Mat shown = pipe;
  for (int v = 0; v < 4; ++v) {
    Mat Av = (A * diag_embed(d, 4, v)).topRows(m);
    shown -= Av * corner_twist(sq.ma, sq.corners[v]) * Av.transpose();
    if (!is_gauge_corner(sq, v)) shown += Av * sq.lambda * Av.transpose();
  }
  cal.basic_gap_displayed = gap(shown);
  return cal;
}

Mat constraint_jacobian(const MatrixAlgebra& ma, const ConstraintMap& c, const GroupPoint& x) {
  const int m = static_cast<int>(x.size()) * ma.dim();
  const Vec c0 = c(x);
  Mat J(c0.size(), m);
  for (int I = 0; I < m; ++I) J.col(I) = (c(move(ma, x, I, kStep)) - c(move(ma, x, I, -kStep))) / (2 * kStep);
  return J;
}

CheckReport check_coisotropic(const BivectorField& pi, const ConstraintMap& c, const std::vector<GroupPoint>& points) {
  CheckReport rep;
  rep.check = "coisotropic:" + pi.name;
  for (const auto& x : points) {
    Mat J = constraint_jacobian(pi.ma, c, x);
    if (J.rows() == 0) {
      rep.add("normal_part", 0);
      rep.parts["conormal_dim"] = 0;
      rep.samples++;
      continue;
    }
    const int k = numeric_rank(J, 1e-6);
    if (k != J.rows()) throw std::domain_error("rank-deficient constraints at a sample point");
    Mat conormal = orth(J.transpose());  // covectors
    Mat normal = orth(J.adjoint());      // orthogonal complement of ker J
    rep.add("normal_part", max_abs(normal.adjoint() * pi(x) * conormal));
    rep.parts["conormal_dim"] = static_cast<double>(conormal.cols());
    rep.samples++;
  }
  rep.pass = rep.samples > 0 && rep.max_residual <= 1e-8;
  return rep;
}

CoisotropyFixture pair_multiplication_graph(const BivectorField& pi0, int sign) {
  const int s = sign >= 0 ? 1 : -1;
  CoisotropyFixture f;
  f.pi = product_bivector(pi0, {1, s, 1, s, -1, -s});
  f.pi.name = s < 0 ? "(pi0,-pi0)" : "(pi0,+pi0)";
  const MatrixAlgebra ma = pi0.ma;
  f.constraint = [ma](const GroupPoint& p) {
    const int d = ma.dim();
    Vec out(3 * d);
    out.segment(0, d) = ma.coords(logm(p[1] * p[2].inverse()));
    out.segment(d, d) = ma.coords(logm(p[4] * p[0].inverse()));
    out.segment(2 * d, d) = ma.coords(logm(p[5] * p[3].inverse()));
    return out;
  };
  f.sample = [ma](std::mt19937_64& rng) {
    Mat x = sample(ma.grp, hs_full(), rng), y = sample(ma.grp, hs_full(), rng), z = sample(ma.grp, hs_full(), rng);
    return GroupPoint{x, y, y, z, x, z};
  };
  return f;
}

BivectorRankReport check_nondegenerate(const BivectorField& pi, const std::vector<GroupPoint>& points,
                                       double threshold) {
  BivectorRankReport rep;
  if (pi.dim() % 2 != 0) {
    rep.odd_dimension = true;
    rep.reason = "odd-dimensional chart: every bivector is degenerate";
    return rep;
  }
  rep.min_abs_det = points.empty() ? 0 : INFINITY;
  for (const auto& x : points) {
    const double det = std::abs(pi(x).determinant());
    rep.min_abs_det = std::min(rep.min_abs_det, det);
    if (det < threshold) rep.flagged++;
  }
  rep.pass = !points.empty() && rep.flagged == 0;
  if (points.empty()) rep.reason = "no data";
  else if (rep.flagged > 0) rep.reason = "near-singular at " + std::to_string(rep.flagged) + " points";
  return rep;
}

cd annulus_twisted_form(const MatrixAlgebra& ma, const Mat& metric, const Mat& x, const Mat& y, const Vec& v,
                        const Vec& w) {
  const int d = ma.dim();
  const Mat Adxi = ma.Ad(x.inverse()), Adyi = ma.Ad(y.inverse());
  auto B = [&](const Vec& a, const Vec& b) { return (a.transpose() * metric * b)(0, 0); };
  auto lx = [&](const Vec& t) { return Vec(Adxi * t.head(d)); };
  auto rx = [&](const Vec& t) { return Vec(t.head(d)); };
  auto ly = [&](const Vec& t) { return Vec(Adyi * t.tail(d)); };
  auto ry = [&](const Vec& t) { return Vec(t.tail(d)); };
  const cd first = B(lx(v), ry(w)) - B(lx(w), ry(v));
  const cd second = B(rx(v), ly(w)) - B(rx(w), ly(v));
  return -0.5 * (first + second);
}

Mat inner_twist_embed(const Mat& a, const Mat& c) { return from_blocks(a * c, c); }

cd twisted_restriction(const MatrixAlgebra& ma, const Mat& c, const Mat& k, const Mat& a, const Mat& b, const Vec& v,
                       const Vec& w) {
  const int d = ma.dim();
  const Mat& form = ma.alg->form;
  const Mat tau_inv = ma.Ad(c.inverse()), kappa_inv = ma.Ad(k.inverse());
  const Mat Adai = ma.Ad(a.inverse()), Adbi = ma.Ad(b.inverse());
  auto B = [&](const Vec& p, const Vec& q) { return (p.transpose() * form * q)(0, 0); };
  auto la = [&](const Vec& t) { return Vec(tau_inv * Adai * t.head(d)); };
  auto ra = [&](const Vec& t) { return Vec(t.head(d)); };
  auto lb = [&](const Vec& t) { return Vec(kappa_inv * Adbi * t.tail(d)); };
  auto rb = [&](const Vec& t) { return Vec(t.tail(d)); };
  const cd first = B(la(v), rb(w)) - B(la(w), rb(v));
  const cd second = B(ra(v), lb(w)) - B(ra(w), lb(v));
  return -0.5 * (first + second);
}

}  // namespace modlab
