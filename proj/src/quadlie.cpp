#include "modlab/quadlie.hpp"

#include <algorithm>
#include <regex>
#include <stdexcept>

#include <json.hpp>

namespace modlab {

Mat QuadLieAlgebra::ad_of(const Vec& x) const {
  Mat m = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    if (x(i) != cd(0)) m += x(i) * ad[i];
  return m;
}

Vec QuadLieAlgebra::bracket(const Vec& x, const Vec& y) const { return ad_of(x) * y; }

AlgebraResiduals check_algebra(const QuadLieAlgebra& g) {
  AlgebraResiduals r;
  const int n = g.dim;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        r.antisymmetry = std::max(r.antisymmetry, std::abs(g.c(i, j, k) + g.c(j, i, k)));
  // ad is a representation: ad[x_i, x_j] = [ad x_i, ad x_j]
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat lhs = g.ad_of(g.ad[i].col(j));
      Mat rhs = g.ad[i] * g.ad[j] - g.ad[j] * g.ad[i];
      r.jacobi = std::max(r.jacobi, max_abs(lhs - rhs));
    }
  for (int i = 0; i < n; ++i)
    r.invariance = std::max(r.invariance, max_abs(g.ad[i].transpose() * g.form + g.form * g.ad[i]));
  return r;
}

QuadLieAlgebra from_structure(std::vector<Mat> ad, Mat form, std::string name) {
  QuadLieAlgebra g;
  g.dim = static_cast<int>(ad.size());
  for (const auto& m : ad)
    if (m.rows() != g.dim || m.cols() != g.dim) throw std::invalid_argument("structure constants have wrong shape");
  if (form.rows() != g.dim || form.cols() != g.dim) throw std::invalid_argument("form has wrong shape");
  g.ad = std::move(ad);
  g.form = std::move(form);
  g.name = std::move(name);
  return g;
}

QuadLieAlgebra from_matrix_basis(const std::vector<Mat>& basis, std::string name, const Mat* form) {
  const int d = static_cast<int>(basis.size());
  if (d == 0) return from_structure({}, Mat(0, 0), std::move(name));
  const auto rows = basis[0].rows(), cols = basis[0].cols();
  Mat M(rows * cols, d);
  for (int i = 0; i < d; ++i) M.col(i) = basis[i].reshaped();
  if (numeric_rank(M) != d) throw std::invalid_argument("matrix basis is linearly dependent");
  auto solver = M.completeOrthogonalDecomposition();
  std::vector<Mat> ad(d, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat br = basis[i] * basis[j] - basis[j] * basis[i];
      Vec v = br.reshaped();
      Vec c = solver.solve(v);
      if (max_abs(M * c - v) > 1e-10) throw std::invalid_argument("matrix basis is not closed under commutator");
      ad[i].col(j) = c;
    }
  Mat B(d, d);
  if (form) {
    B = *form;
  } else {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) B(i, j) = (basis[i] * basis[j]).trace();
  }
  return from_structure(std::move(ad), std::move(B), std::move(name));
}

std::vector<Mat> sl_basis(int n) {
  if (n < 2) throw std::invalid_argument("sl(n) needs n >= 2");
  auto E = [n](int i, int j) {
    Mat m = Mat::Zero(n, n);
    m(i, j) = 1;
    return m;
  };
  std::vector<Mat> b;
  for (int i = 0; i + 1 < n; ++i) b.push_back(E(i, i) - E(i + 1, i + 1));
  for (int h = 1; h < n; ++h)
    for (int i = 0; i + h < n; ++i) b.push_back(E(i, i + h));
  for (int h = 1; h < n; ++h)
    for (int i = 0; i + h < n; ++i) b.push_back(E(i + h, i));
  return b;
}

QuadLieAlgebra sl2() { return from_matrix_basis(sl_basis(2), "sl2"); }
QuadLieAlgebra sl3() { return from_matrix_basis(sl_basis(3), "sl3"); }

QuadLieAlgebra abelian(int n) { return abelian(n, Mat::Identity(n, n)); }

QuadLieAlgebra abelian(int n, const Mat& form) {
  return from_structure(std::vector<Mat>(n, Mat::Zero(n, n)), form, "abelian(" + std::to_string(n) + ")");
}

QuadLieAlgebra named_algebra(const std::string& name) {
  if (name == "sl2") return sl2();
  if (name == "sl3") return sl3();
  std::smatch m;
  static const std::regex ab(R"(abelian\((\d+)\))");
  if (std::regex_match(name, m, ab)) return abelian(std::stoi(m[1]));
  throw std::invalid_argument("unknown algebra: " + name);
}

QuadLieAlgebra algebra_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  const int n = j.at("dim").get<int>();
  const auto& c = j.at("c");
  const auto& b = j.at("B");
  if (static_cast<int>(c.size()) != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("fixture dimensions disagree with dim");
  std::vector<Mat> ad(n, Mat::Zero(n, n));
  Mat B(n, n);
  for (int i = 0; i < n; ++i) {
    for (int jj = 0; jj < n; ++jj) {
      for (int k = 0; k < n; ++k) ad[i](k, jj) = c.at(i).at(jj).at(k).get<double>();
      B(i, jj) = b.at(i).at(jj).get<double>();
    }
  }
  return from_structure(std::move(ad), std::move(B), j.value("name", std::string("json")));
}

QuadLieAlgebra double_algebra(const QuadLieAlgebra& g) {
  if (g.dim == 0 || std::abs(g.form.determinant()) < 1e-12)
    throw std::invalid_argument("double needs a nondegenerate form");
  const int n = g.dim;
  std::vector<Mat> ad(2 * n, Mat::Zero(2 * n, 2 * n));
  for (int i = 0; i < n; ++i) {
    ad[i].topLeftCorner(n, n) = g.ad[i];
    ad[n + i].bottomRightCorner(n, n) = g.ad[i];
  }
  Mat B = block_diag({g.form, -g.form});
  QuadLieAlgebra d = from_structure(std::move(ad), std::move(B), "double(" + g.name + ")");
  d.half = n;
  return d;
}

Subspace make_subspace(AlgPtr amb, const Mat& basis) {
  if (basis.rows() != amb->dim) throw std::invalid_argument("subspace basis has wrong ambient dimension");
  if (numeric_rank(basis, 1e-10) != basis.cols()) throw std::invalid_argument("rank-deficient subspace basis");
  return Subspace{std::move(amb), basis};
}

Subspace whole(AlgPtr amb) {
  const int n = amb->dim;
  return Subspace{std::move(amb), Mat::Identity(n, n)};
}

namespace {

void require_double(const QuadLieAlgebra& d) {
  if (!d.is_double()) throw std::invalid_argument("ambient algebra is not a double");
}

}  // namespace

Subspace diagonal(AlgPtr d) {
  require_double(*d);
  const int n = d->half;
  Mat b = vstack({Mat::Identity(n, n), Mat::Identity(n, n)});
  return Subspace{std::move(d), b};
}

Subspace antidiagonal(AlgPtr d) {
  require_double(*d);
  const int n = d->half;
  Mat b = vstack({Mat::Identity(n, n), Mat(-Mat::Identity(n, n))});
  return Subspace{std::move(d), b};
}

Subspace direct_sum(AlgPtr d, const Mat& first, const Mat& second) {
  require_double(*d);
  const int n = d->half;
  Mat b = block_diag({first, second});
  if (b.rows() != 2 * n) throw std::invalid_argument("summands do not live in the halves of the double");
  return make_subspace(std::move(d), b);
}

Subspace bar(const Subspace& l) {
  require_double(*l.amb);
  const int n = l.amb->half;
  Mat b(2 * n, l.basis.cols());
  b.topRows(n) = l.basis.bottomRows(n);
  b.bottomRows(n) = l.basis.topRows(n);
  return Subspace{l.amb, b};
}

Subspace sl_dual_subspace(AlgPtr d, int n) {
  require_double(*d);
  const int r = n - 1, np = n * (n - 1) / 2, dim = r + 2 * np;
  if (d->half != dim) throw std::invalid_argument("double does not match sl(n)");
  Mat b = Mat::Zero(2 * dim, dim);
  int c = 0;
  for (int i = 0; i < r; ++i, ++c) {
    b(i, c) = 1;
    b(dim + i, c) = -1;
  }
  for (int i = 0; i < np; ++i, ++c) b(r + np + i, c) = 1;  // lower part, first factor
  for (int i = 0; i < np; ++i, ++c) b(dim + r + i, c) = 1;  // upper part, second factor
  return make_subspace(std::move(d), b);
}

double closure_residual(const Subspace& s) {
  if (s.dim() == 0) return 0.0;
  Mat q = orth(s.basis);
  double r = 0;
  for (int i = 0; i < q.cols(); ++i)
    for (int j = i + 1; j < q.cols(); ++j) {
      Vec br = s.amb->bracket(q.col(i), q.col(j));
      r = std::max(r, max_abs(br - q * (q.adjoint() * br)));
    }
  return r;
}

double isotropy_residual(const Subspace& s) {
  if (s.dim() == 0) return 0.0;
  Mat q = orth(s.basis);
  return max_abs(q.transpose() * s.amb->form * q);
}

SubspaceVerdict is_lagrangian_subalgebra(const Subspace& s) {
  SubspaceVerdict v;
  if (numeric_rank(s.basis, 1e-10) != s.dim()) throw std::invalid_argument("rank-deficient subspace basis");
  if (2 * s.dim() != s.amb->dim) {
    v.reason = "dimension is not half the ambient dimension";
    v.isotropy = isotropy_residual(s);
    v.closure = closure_residual(s);
    return v;
  }
  v.isotropy = isotropy_residual(s);
  v.closure = closure_residual(s);
  v.pass = v.isotropy <= tol::subspace && v.closure <= tol::subspace;
  if (!v.pass) v.reason = v.isotropy > tol::subspace ? "form does not vanish" : "not closed under the bracket";
  return v;
}

Subspace orthocomplement(const Subspace& c) {
  if (numeric_rank(c.basis, 1e-10) != c.dim()) throw std::invalid_argument("rank-deficient subspace basis");
  if (c.dim() == 0) return whole(c.amb);
  Mat ns = null_space(c.basis.transpose() * c.amb->form, 1e-10);
  return Subspace{c.amb, ns};
}

SubspaceVerdict is_coisotropic(const Subspace& c) {
  SubspaceVerdict v;
  Subspace perp = orthocomplement(c);
  v.containment = containment_residual(perp.basis, c.basis);
  v.closure = closure_residual(c);
  v.pass = v.containment <= tol::subspace && v.closure <= tol::subspace;
  if (!v.pass) v.reason = v.containment > tol::subspace ? "orthocomplement not contained" : "not a subalgebra";
  return v;
}

Subspace tilde_c(const Subspace& c, AlgPtr d) {
  require_double(*d);
  if (d->half != c.amb->dim) throw std::invalid_argument("double does not match the algebra of c");
  if (!is_coisotropic(c).pass) throw std::invalid_argument("tilde_c needs a coisotropic subalgebra");
  Mat perp = orthocomplement(c).basis;
  Mat diag = vstack({c.basis, c.basis});
  Mat first = vstack({perp, Mat(Mat::Zero(perp.rows(), perp.cols()))});
  return make_subspace(std::move(d), hstack({diag, first}));
}

RootData sl_root_data(int n) {
  auto basis = sl_basis(n);
  QuadLieAlgebra g = from_matrix_basis(basis, "sl");
  const int d = g.dim, r = n - 1, npos = (d - r) / 2;
  Mat gram = g.form.topLeftCorner(r, r);
  Eigen::LLT<Mat> llt(gram);
  Mat Linv = llt.matrixL().solve(Mat::Identity(r, r));
  RootData rd;
  rd.cartan = Mat::Zero(d, r);
  rd.cartan.topRows(r) = Linv.transpose();
  rd.pos = Mat::Zero(d, npos);
  rd.neg = Mat::Zero(d, npos);
  for (int a = 0; a < npos; ++a) {
    rd.pos(r + a, a) = 1;
    rd.neg(r + npos + a, a) = 1;
  }
  return rd;
}

RMatrix r_matrix_from_tensor(const Mat& tensor) {
  return RMatrix{tensor, (tensor - tensor.transpose()) / 2.0};
}

RMatrix standard_r_matrix(const QuadLieAlgebra& g, const RootData& roots) {
  if (roots.pos.cols() == 0) throw std::invalid_argument("no root data");
  if (roots.cartan.rows() != g.dim || roots.pos.rows() != g.dim || roots.neg.rows() != g.dim ||
      roots.pos.cols() != roots.neg.cols())
    throw std::invalid_argument("root data does not match the algebra");
  const Mat& B = g.form;
  Mat hh = roots.cartan.transpose() * B * roots.cartan;
  if (max_abs(hh - Mat::Identity(hh.rows(), hh.cols())) > 1e-10)
    throw std::invalid_argument("Cartan basis is not B-orthonormal");
  Mat pn = roots.pos.transpose() * B * roots.neg;
  if (max_abs(pn - Mat::Identity(pn.rows(), pn.cols())) > 1e-10)
    throw std::invalid_argument("root vectors violate B(E_a, E_-a) = 1");
  Mat R = 0.5 * roots.cartan * roots.cartan.transpose() + roots.pos * roots.neg.transpose();
  return r_matrix_from_tensor(R);
}

double check_cybe(const QuadLieAlgebra& g, const RMatrix& r) {
  const int n = g.dim;
  const Mat& R = r.tensor;
  // T(a, b, c) flattened as a*n*n + b*n + c
  std::vector<cd> T(static_cast<size_t>(n) * n * n, cd(0));
  auto at = [&](int a, int b, int c) -> cd& { return T[(static_cast<size_t>(a) * n + b) * n + c]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (R(i, j) == cd(0)) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const cd w = R(i, j) * R(k, l);
          if (w == cd(0)) continue;
          for (int m = 0; m < n; ++m) {
            at(m, j, l) += w * g.c(i, k, m);  // [R12, R13]
            at(i, m, l) += w * g.c(j, k, m);  // [R12, R23]
            at(i, k, m) += w * g.c(j, l, m);  // [R13, R23]
          }
        }
    }
  double res = 0;
  for (const auto& v : T) res = std::max(res, std::abs(v));
  return res;
}

Mat DiffCrossedModule::action_of(const Vec& x) const {
  Mat m = Mat::Zero(h.dim, h.dim);
  for (int i = 0; i < g.dim; ++i)
    if (x(i) != cd(0)) m += x(i) * act[i];
  return m;
}

CrossedModuleResiduals check_crossed_module(const DiffCrossedModule& cm) {
  CrossedModuleResiduals r;
  for (int i = 0; i < cm.g.dim; ++i) r.cm1 = std::max(r.cm1, max_abs(cm.phi * cm.act[i] - cm.g.ad[i] * cm.phi));
  for (int a = 0; a < cm.h.dim; ++a)
    r.cm2 = std::max(r.cm2, max_abs(cm.action_of(cm.phi.col(a)) - cm.h.ad[a]));
  return r;
}

DiffCrossedModule identity_crossed_module(const QuadLieAlgebra& g) {
  return DiffCrossedModule{g, g, Mat::Identity(g.dim, g.dim), g.ad};
}

DiffCrossedModule bsharp_crossed_module(const QuadLieAlgebra& g, const Mat& bstar) {
  const int n = g.dim;
  if (bstar.rows() != n || bstar.cols() != n) throw std::invalid_argument("bilinear tensor has wrong shape");
  DiffCrossedModule cm;
  cm.g = g;
  cm.phi = bstar;
  cm.act.resize(n);
  for (int i = 0; i < n; ++i) cm.act[i] = -g.ad[i].transpose();
  std::vector<Mat> had(n);
  for (int a = 0; a < n; ++a) {
    Mat m = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) m += bstar(i, a) * cm.act[i];
    had[a] = m;
  }
  cm.h = from_structure(std::move(had), Mat::Zero(n, n), g.name + "*");
  return cm;
}

double invariance_residual(const QuadLieAlgebra& g, const Mat& sym) {
  double r = max_abs(sym - sym.transpose());
  for (int i = 0; i < g.dim; ++i) r = std::max(r, max_abs(g.ad[i] * sym + sym * g.ad[i].transpose()));
  return r;
}

QuadLie2Algebra lie2_from_bilinear(const QuadLieAlgebra& g, const Mat& bstar) {
  const int n = g.dim;
  if (bstar.rows() != n || bstar.cols() != n) throw std::invalid_argument("bilinear tensor has wrong shape");
  if (invariance_residual(g, bstar) > tol::structure) throw std::invalid_argument("bilinear tensor is not invariant");
  QuadLie2Algebra l2;
  l2.cm = bsharp_crossed_module(g, bstar);
  l2.bstar = bstar;
  std::vector<Mat> ad(2 * n, Mat::Zero(2 * n, 2 * n));
  for (int a = 0; a < n; ++a) {
    ad[a].topLeftCorner(n, n) = l2.cm.h.ad[a];
    for (int j = 0; j < n; ++j) ad[a].block(0, n + j, n, 1) = -l2.cm.act[j].col(a);
  }
  for (int i = 0; i < n; ++i) {
    ad[n + i].topLeftCorner(n, n) = l2.cm.act[i];
    ad[n + i].bottomRightCorner(n, n) = g.ad[i];
  }
  Mat metric(2 * n, 2 * n);
  metric << bstar, Mat::Identity(n, n), Mat::Identity(n, n), Mat::Zero(n, n);
  l2.total = from_structure(std::move(ad), std::move(metric), g.name + "*⋊" + g.name);
  l2.s = hstack({Mat(Mat::Zero(n, n)), Mat(Mat::Identity(n, n))});
  l2.t = hstack({bstar, Mat(Mat::Identity(n, n))});
  return l2;
}

Mat composition_graph(const QuadLie2Algebra& l2) {
  const int n = l2.n();
  const Mat I = Mat::Identity(n, n), Z = Mat::Zero(n, n);
  // parameters (alpha, beta, y): g1 = (alpha, B beta + y), g2 = (beta, y), g1 g2 = (alpha + beta, y)
  Mat G(6 * n, 3 * n);
  G << I, Z, Z,  //
      Z, l2.bstar, I,  //
      Z, I, Z,  //
      Z, Z, I,  //
      I, I, Z,  //
      Z, Z, I;
  return G;
}

namespace {

QuadLieAlgebra signed_sum(const std::vector<const QuadLieAlgebra*>& parts, const std::vector<double>& signs) {
  std::vector<Mat> ad;
  std::vector<Mat> forms;
  int total = 0;
  for (auto* p : parts) total += p->dim;
  int off = 0;
  for (size_t k = 0; k < parts.size(); ++k) {
    for (int i = 0; i < parts[k]->dim; ++i) {
      Mat m = Mat::Zero(total, total);
      m.block(off, off, parts[k]->dim, parts[k]->dim) = parts[k]->ad[i];
      ad.push_back(m);
    }
    forms.push_back(signs[k] * parts[k]->form);
    off += parts[k]->dim;
  }
  return from_structure(std::move(ad), block_diag(forms), "sum");
}

}  // namespace

MultiplicativeVerdict check_metric_multiplicative(const QuadLie2Algebra& l2) {
  auto G3 = std::make_shared<QuadLieAlgebra>(
      signed_sum({&l2.total, &l2.total, &l2.total}, {1.0, 1.0, -1.0}));
  Subspace graph = make_subspace(G3, composition_graph(l2));
  MultiplicativeVerdict v;
  v.dim = graph.dim();
  auto lv = is_lagrangian_subalgebra(graph);
  v.isotropy = lv.isotropy;
  v.closure = lv.closure;
  v.pass = lv.pass;
  return v;
}

double kernel_orthogonality_residual(const QuadLie2Algebra& l2) {
  auto tot = std::make_shared<QuadLieAlgebra>(l2.total);
  Subspace ks{tot, null_space(l2.s)};
  Subspace kt{tot, null_space(l2.t)};
  double pairing = max_abs(ks.basis.transpose() * tot->form * kt.basis);
  Subspace perp = orthocomplement(ks);
  double span = (perp.dim() == kt.dim()) ? std::max(containment_residual(perp.basis, kt.basis),
                                                    containment_residual(kt.basis, perp.basis))
                                         : 1.0;
  return std::max(pairing, span);
}

double pair_isomorphism_residual(const QuadLie2Algebra& l2) {
  const int n = l2.n();
  if (std::abs(l2.bstar.determinant()) < 1e-12) throw std::invalid_argument("pair model needs nondegenerate B");
  Mat K = l2.bstar.inverse();
  Mat psi(2 * n, 2 * n);
  psi << l2.bstar, Mat::Identity(n, n), Mat::Zero(n, n), Mat::Identity(n, n);
  Mat KK = block_diag({K, Mat(-K)});
  double r = max_abs(psi.transpose() * KK * psi - l2.total.form);
  const QuadLieAlgebra& g = l2.cm.g;
  for (int p = 0; p < 2 * n; ++p) {
    Vec z = psi.col(p);
    Mat adz = block_diag({g.ad_of(z.head(n)), g.ad_of(z.tail(n))});
    r = std::max(r, max_abs(psi * l2.total.ad[p] - adz * psi));
  }
  return r;
}

double QuasiBialgebraData::delta_norm() const {
  double r = 0;
  for (const auto& m : delta) r = std::max(r, max_abs(m));
  return r;
}

double QuasiBialgebraData::chi_norm() const {
  double r = 0;
  for (const auto& m : chi) r = std::max(r, max_abs(m));
  return r;
}

QuasiBialgebraData split_quasi_bialgebra(const Subspace& L, const Subspace& A) {
  if (L.amb != A.amb && L.amb->dim != A.amb->dim) throw std::invalid_argument("subspaces live in different algebras");
  const auto& d = *L.amb;
  if (L.dim() + A.dim() != d.dim || numeric_rank(hstack({L.basis, A.basis}), 1e-10) != d.dim)
    throw std::invalid_argument("L and A are not complementary");
  if (isotropy_residual(L) > tol::subspace || isotropy_residual(A) > tol::subspace)
    throw std::invalid_argument("L and A must be Lagrangian");
  if (closure_residual(L) > tol::subspace) throw std::invalid_argument("L is not a subalgebra");
  const int m = L.dim();
  QuasiBialgebraData q;
  q.d = L.amb;
  q.L = L.basis;
  Mat P = L.basis.transpose() * d.form * A.basis;
  q.A = A.basis * P.inverse();
  auto Bf = [&](const Vec& x, const Vec& y) { return d.pair(x, y); };
  q.bracket.assign(m, Mat::Zero(m, m));
  q.delta.assign(m, Mat::Zero(m, m));
  q.chi.assign(m, Mat::Zero(m, m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Vec uu = d.bracket(q.L.col(i), q.L.col(j));
      Vec ua = d.bracket(q.L.col(i), q.A.col(j));
      Vec aa = d.bracket(q.A.col(i), q.A.col(j));
      for (int k = 0; k < m; ++k) {
        q.bracket[i](j, k) = Bf(uu, q.A.col(k));
        q.delta[i](j, k) = Bf(ua, q.A.col(k));
        q.chi[i](j, k) = Bf(aa, q.A.col(k));
      }
    }
  return q;
}

double reconstruction_residual(const QuasiBialgebraData& q) {
  const auto& d = *q.d;
  const int m = static_cast<int>(q.L.cols());
  double r = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Vec uu = Vec::Zero(d.dim), ua = Vec::Zero(d.dim), aa = Vec::Zero(d.dim);
      for (int k = 0; k < m; ++k) {
        uu += q.bracket[i](j, k) * q.L.col(k);
        ua += q.delta[i](j, k) * q.L.col(k) - q.bracket[i](k, j) * q.A.col(k);
        aa += q.delta[k](i, j) * q.A.col(k) + q.chi[i](j, k) * q.L.col(k);
      }
      r = std::max(r, max_abs(d.bracket(q.L.col(i), q.L.col(j)) - uu));
      r = std::max(r, max_abs(d.bracket(q.L.col(i), q.A.col(j)) - ua));
      r = std::max(r, max_abs(d.bracket(q.A.col(i), q.A.col(j)) - aa));
    }
  return r;
}

}  // namespace modlab
