#include "modlab/matgroups.hpp"

#include <cmath>
#include <limits>

namespace modlab {

MatrixGroup group_by_key(const std::string& key) {
  if (key == "sl2r") return {2, 1, Field::Real};
  if (key == "sl2c") return {2, 1, Field::Complex};
  if (key == "sl3r" || key == "sl3") return {3, 1, Field::Real};
  if (key == "sl3c") return {3, 1, Field::Complex};
  throw std::invalid_argument("unknown group key: " + key);
}

MatrixGroup pair_group(const MatrixGroup& g) {
  if (g.blocks != 1) throw std::invalid_argument("pair_group expects a simple factor");
  return {g.n, 2, g.field};
}

Mat block(const MatrixGroup& G, const Mat& g, int k) { return g.block(k * G.n, k * G.n, G.n, G.n); }

Mat from_blocks(const Mat& first, const Mat& second) { return block_diag({first, second}); }

double group_residual(const MatrixGroup& G, const Mat& g) {
  if (g.rows() != G.size() || g.cols() != G.size()) return std::numeric_limits<double>::infinity();
  double r = 0;
  for (int k = 0; k < G.blocks; ++k) r = std::max(r, std::abs(block(G, g, k).determinant() - cd(1)));
  if (G.blocks == 2) {
    r = std::max(r, max_abs(g.block(0, G.n, G.n, G.n)));
    r = std::max(r, max_abs(g.block(G.n, 0, G.n, G.n)));
  }
  if (G.field == Field::Real) r = std::max(r, g.imag().cwiseAbs().maxCoeff());
  return r;
}

namespace {

double norm1(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

Mat expm(const Mat& x) {
  const auto n = x.rows();
  const Mat I = Mat::Identity(n, n);
  double nrm = n ? norm1(x) : 0.0;
  int s = nrm > 0.5 ? static_cast<int>(std::ceil(std::log2(nrm / 0.5))) : 0;
  Mat a = x / std::pow(2.0, s);
  Mat term = I, sum = I;
  for (int k = 1; k < 40; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
    if (max_abs(term) < 1e-18) break;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

Mat sqrtm(const Mat& a) {
  const auto n = a.rows();
  Mat y = a, z = Mat::Identity(n, n);
  for (int it = 0; it < 100; ++it) {
    Mat yi = y.inverse(), zi = z.inverse();
    Mat yn = 0.5 * (y + zi), zn = 0.5 * (z + yi);
    double d = max_abs(yn - y);
    y = yn;
    z = zn;
    if (d < 1e-15 * std::max(1.0, max_abs(y))) break;
  }
  if (!y.allFinite() || max_abs(y * y - a) > 1e-9 * std::max(1.0, max_abs(a)))
    throw std::domain_error("matrix square root did not converge");
  return y;
}

Mat logm(const Mat& g) {
  const auto n = g.rows();
  const Mat I = Mat::Identity(n, n);
  Mat a = g;
  int k = 0;
  while (norm1(a - I) > 0.25) {
    if (++k > 50) throw std::domain_error("matrix logarithm: no convergence");
    a = sqrtm(a);
  }
  Mat x = a - I, term = x, sum = Mat::Zero(n, n);
  for (int m = 1; m < 80; ++m) {
    sum += ((m % 2) ? 1.0 : -1.0) / m * term;
    term = term * x;
    if (max_abs(term) < 1e-18) break;
  }
  return std::pow(2.0, k) * sum;
}

Mat MatrixAlgebra::mat(const Vec& c) const {
  Mat m = Mat::Zero(grp.size(), grp.size());
  for (int i = 0; i < dim(); ++i) m += c(i) * basis[i];
  return m;
}

Vec MatrixAlgebra::coords(const Mat& x) const {
  Vec v = x.reshaped();
  return solver * v;
}

Mat MatrixAlgebra::Ad(const Mat& g) const {
  Mat gi = g.inverse();
  Mat out(dim(), dim());
  for (int i = 0; i < dim(); ++i) out.col(i) = coords(g * basis[i] * gi);
  return out;
}

namespace {

std::vector<Mat> per_block(const MatrixGroup& G, const std::vector<Mat>& small) {
  std::vector<Mat> out;
  for (int k = 0; k < G.blocks; ++k)
    for (const auto& s : small) {
      Mat m = Mat::Zero(G.size(), G.size());
      m.block(k * G.n, k * G.n, G.n, G.n) = s;
      out.push_back(m);
    }
  return out;
}

struct SlParts {
  std::vector<Mat> cartan, upper, lower;
};

SlParts sl_parts(int n) {
  auto b = sl_basis(n);
  SlParts p;
  const int r = n - 1, np = (static_cast<int>(b.size()) - r) / 2;
  for (int i = 0; i < r; ++i) p.cartan.push_back(b[i]);
  for (int i = 0; i < np; ++i) p.upper.push_back(b[r + i]);
  for (int i = 0; i < np; ++i) p.lower.push_back(b[r + np + i]);
  return p;
}

template <class... V>
std::vector<Mat> cat(const V&... vs) {
  std::vector<Mat> out;
  (out.insert(out.end(), vs.begin(), vs.end()), ...);
  return out;
}

Mat vectorize(const std::vector<Mat>& mats, Eigen::Index size) {
  Mat M(size * size, static_cast<Eigen::Index>(mats.size()));
  for (size_t i = 0; i < mats.size(); ++i) M.col(static_cast<Eigen::Index>(i)) = mats[i].reshaped();
  return M;
}

}  // namespace

MatrixAlgebra lie_algebra(const MatrixGroup& G) {
  MatrixAlgebra m;
  m.grp = G;
  m.basis = per_block(G, sl_basis(G.n));
  QuadLieAlgebra base = from_matrix_basis(sl_basis(G.n), "sl" + std::to_string(G.n));
  m.alg = std::make_shared<QuadLieAlgebra>(G.blocks == 2 ? double_algebra(base) : base);
  Mat M = vectorize(m.basis, G.size());
  m.solver = M.completeOrthogonalDecomposition().pseudoInverse();
  return m;
}

std::string HSpec::key() const {
  std::string k;
  switch (kind) {
    case Kind::Full: k = "full"; break;
    case Kind::BorelUpper: k = "borel+"; break;
    case Kind::BorelLower: k = "borel-"; break;
    case Kind::NilUpper: k = "nil+"; break;
    case Kind::NilLower: k = "nil-"; break;
    case Kind::Torus: k = "torus"; break;
    case Kind::Diagonal: k = "diagonal"; break;
    case Kind::Dual: k = "dual"; break;
    case Kind::ConjClass: k = "conj"; break;
    case Kind::Generated: k = "generated"; break;
    case Kind::Trivial: k = "trivial"; break;
  }
  return inverted ? k + "^-1" : k;
}

namespace {
HSpec of(HSpec::Kind k) {
  HSpec h;
  h.kind = k;
  return h;
}
}  // namespace

HSpec hs_full() { return of(HSpec::Kind::Full); }
HSpec hs_borel_upper() { return of(HSpec::Kind::BorelUpper); }
HSpec hs_borel_lower() { return of(HSpec::Kind::BorelLower); }
HSpec hs_nil_upper() { return of(HSpec::Kind::NilUpper); }
HSpec hs_nil_lower() { return of(HSpec::Kind::NilLower); }
HSpec hs_torus() { return of(HSpec::Kind::Torus); }
HSpec hs_diagonal() { return of(HSpec::Kind::Diagonal); }
HSpec hs_dual() { return of(HSpec::Kind::Dual); }
HSpec hs_trivial() { return of(HSpec::Kind::Trivial); }

HSpec hs_conj_class(const Mat& rep) {
  HSpec h = of(HSpec::Kind::ConjClass);
  h.rep = rep;
  return h;
}

HSpec hs_generated(const MatrixGroup& G, std::vector<Mat> gens) {
  if (gens.empty()) return hs_trivial();
  Mat M = vectorize(gens, G.size());
  if (G.field == Field::Real) {
    // keep a real basis of the real span
    Mat re(M.rows(), 2 * M.cols());
    re << M.real().cast<cd>(), M.imag().cast<cd>();
    M = orth(re);
  } else {
    M = orth(M);
  }
  if (M.cols() == lie_algebra(G).dim()) return hs_full();
  HSpec h = of(HSpec::Kind::Generated);
  for (int i = 0; i < M.cols(); ++i) {
    Mat x = M.col(i).reshaped(G.size(), G.size());
    if (G.field == Field::Real) x = x.real().cast<cd>();
    h.gens.push_back(x);
  }
  return h;
}

HSpec hs_inverse(HSpec h) {
  h.inverted = !h.inverted;
  return h;
}

HSpec hspec_by_key(const std::string& key) {
  if (key == "full") return hs_full();
  if (key == "borel+") return hs_borel_upper();
  if (key == "borel-") return hs_borel_lower();
  if (key == "nil+") return hs_nil_upper();
  if (key == "nil-") return hs_nil_lower();
  if (key == "torus") return hs_torus();
  if (key == "diagonal") return hs_diagonal();
  if (key == "dual") return hs_dual();
  if (key == "trivial") return hs_trivial();
  throw std::invalid_argument("unknown subgroup key: " + key);
}

bool is_subgroup(const HSpec& h) { return h.kind != HSpec::Kind::ConjClass; }

std::vector<Mat> subalgebra_basis(const MatrixGroup& G, const HSpec& h) {
  using K = HSpec::Kind;
  SlParts p = sl_parts(G.n);
  auto need_pair = [&] {
    if (G.blocks != 2) throw std::invalid_argument("subgroup needs a pair group");
  };
  switch (h.kind) {
    case K::Full: return per_block(G, cat(p.cartan, p.upper, p.lower));
    case K::BorelUpper: return per_block(G, cat(p.cartan, p.upper));
    case K::BorelLower: return per_block(G, cat(p.cartan, p.lower));
    case K::NilUpper: return per_block(G, p.upper);
    case K::NilLower: return per_block(G, p.lower);
    case K::Torus: return per_block(G, p.cartan);
    case K::Trivial: return {};
    case K::Generated: return h.gens;
    case K::Diagonal: {
      need_pair();
      std::vector<Mat> out;
      for (const auto& x : cat(p.cartan, p.upper, p.lower)) out.push_back(from_blocks(x, x));
      return out;
    }
    case K::Dual: {
      need_pair();
      std::vector<Mat> out;
      const Mat Z = Mat::Zero(G.n, G.n);
      for (const auto& x : p.cartan) out.push_back(from_blocks(x, -x));
      for (const auto& x : p.lower) out.push_back(from_blocks(x, Z));
      for (const auto& x : p.upper) out.push_back(from_blocks(Z, x));
      return out;
    }
    case K::ConjClass: break;
  }
  throw std::invalid_argument("a conjugacy class has no subalgebra");
}

namespace {

// coefficients of det(t I - a), Faddeev-LeVerrier
Vec charpoly(const Mat& a) {
  const auto n = a.rows();
  Vec c = Vec::Zero(n + 1);
  c(0) = 1;
  Mat M = Mat::Zero(n, n);
  const Mat I = Mat::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = a * M + c(k - 1) * I;
    c(k) = -(a * M).trace() / static_cast<double>(k);
  }
  return c;
}

double strict_lower(const Mat& b) {
  double r = 0;
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < i; ++j) r = std::max(r, std::abs(b(i, j)));
  return r;
}

double unit_diag(const Mat& b) { return max_abs(b.diagonal() - Vec::Ones(b.rows())); }

}  // namespace

double membership_residual(const MatrixGroup& G, const HSpec& h, const Mat& g0) {
  using K = HSpec::Kind;
  double r = group_residual(G, g0);
  if (!std::isfinite(r)) return r;
  Mat g = h.inverted ? Mat(g0.inverse()) : g0;
  auto each = [&](auto fn) {
    for (int k = 0; k < G.blocks; ++k) r = std::max(r, fn(block(G, g, k)));
  };
  switch (h.kind) {
    case K::Full: break;
    case K::BorelUpper: each([](const Mat& b) { return strict_lower(b); }); break;
    case K::BorelLower: each([](const Mat& b) { return strict_lower(b.transpose()); }); break;
    case K::NilUpper: each([](const Mat& b) { return std::max(strict_lower(b), unit_diag(b)); }); break;
    case K::NilLower:
      each([](const Mat& b) { return std::max(strict_lower(b.transpose()), unit_diag(b)); });
      break;
    case K::Torus:
      each([](const Mat& b) { return std::max(strict_lower(b), strict_lower(b.transpose())); });
      break;
    case K::Trivial: r = std::max(r, max_abs(g - Mat::Identity(G.size(), G.size()))); break;
    case K::Diagonal:
      if (G.blocks != 2) throw std::invalid_argument("subgroup needs a pair group");
      r = std::max(r, max_abs(block(G, g, 0) - block(G, g, 1)));
      break;
    case K::Dual: {
      if (G.blocks != 2) throw std::invalid_argument("subgroup needs a pair group");
      Mat lo = block(G, g, 0), up = block(G, g, 1);
      r = std::max({r, strict_lower(lo.transpose()), strict_lower(up)});
      Vec prod = lo.diagonal().cwiseProduct(up.diagonal());
      r = std::max(r, max_abs(prod - Vec::Ones(G.n)));
      break;
    }
    case K::ConjClass:
      for (int k = 0; k < G.blocks; ++k)
        r = std::max(r, max_abs(charpoly(block(G, g, k)) - charpoly(block(G, h.rep, k))));
      break;
    case K::Generated: {
      Mat x;
      try {
        x = logm(g);
      } catch (const std::domain_error&) {
        return std::numeric_limits<double>::infinity();
      }
      Mat M = vectorize(h.gens, G.size());
      Vec v = x.reshaped();
      Mat q = orth(M);
      r = std::max(r, max_abs(v - q * (q.adjoint() * v)));
      break;
    }
  }
  return r;
}

bool contains(const MatrixGroup& G, const HSpec& h, const Mat& g) {
  const double t = h.kind == HSpec::Kind::ConjClass ? 1e-8 : 1e-10;
  return membership_residual(G, h, g) <= t * std::max(1.0, max_abs(g));
}

bool inverse_closed(const MatrixGroup& G, const HSpec& h) {
  if (is_subgroup(h)) return true;
  return contains(G, h, h.rep.inverse());
}

Mat sample_algebra(const MatrixGroup& G, const std::vector<Mat>& basis, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  Mat x = Mat::Zero(G.size(), G.size());
  for (const auto& b : basis) {
    double re = nd(rng);
    double im = G.field == Field::Complex ? nd(rng) : 0.0;
    x += cd(re, im) * b;
  }
  return x;
}

Mat sample(const MatrixGroup& G, const HSpec& h, std::mt19937_64& rng, double scale) {
  Mat g;
  if (h.kind == HSpec::Kind::ConjClass) {
    Mat c = expm(sample_algebra(G, subalgebra_basis(G, hs_full()), rng, scale));
    g = c * h.rep * c.inverse();
  } else {
    g = expm(sample_algebra(G, subalgebra_basis(G, h), rng, scale));
  }
  return h.inverted ? Mat(g.inverse()) : g;
}

Mat sample(const MatrixGroup& G, const HSpec& h, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  return sample(G, h, rng, scale);
}

GaussFactors gauss_factorize(const MatrixGroup& D, const Mat& g) {
  if (D.blocks != 2) throw std::invalid_argument("gauss_factorize expects an element of G × G");
  const int n = D.n;
  Mat g1 = block(D, g, 0), g2 = block(D, g, 1);
  Mat m = g1.inverse() * g2;
  // m = L diag(p) U, no pivoting
  Mat L = Mat::Identity(n, n), U = Mat::Identity(n, n);
  Vec p(n);
  Mat w = m;
  const double scale = std::max(1.0, max_abs(m));
  for (int k = 0; k < n; ++k) {
    p(k) = w(k, k);
    if (std::abs(p(k)) < 1e-8 * scale) throw OffCellError("element is off the big cell");
    for (int i = k + 1; i < n; ++i) L(i, k) = w(i, k) / p(k);
    for (int j = k + 1; j < n; ++j) U(k, j) = w(k, j) / p(k);
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) w(i, j) -= L(i, k) * p(k) * U(k, j);
  }
  Vec s(n);
  for (int k = 0; k < n; ++k) {
    if (D.field == Field::Real) {
      if (std::abs(p(k).imag()) > 1e-12 * scale || p(k).real() <= 0)
        throw OffCellError("real factorization needs positive pivots");
      s(k) = std::sqrt(p(k).real());
    } else {
      s(k) = std::sqrt(p(k));
    }
  }
  cd prod = 1;
  for (int k = 0; k < n; ++k) prod *= s(k);
  if (std::abs(prod + cd(1)) < 1e-6) s(n - 1) = -s(n - 1);
  GaussFactors f;
  f.bplus = s.asDiagonal() * U;
  f.bminus = (L * s.asDiagonal()).inverse();
  f.a = g1 * f.bminus.inverse();
  f.residual = max_abs(f.diag_part() * f.dual_part() - g);
  return f;
}

CrossedModuleResiduals check_group_crossed_module(const GroupCrossedModule& cm, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CrossedModuleResiduals r;
  for (int s = 0; s < samples; ++s) {
    Mat g = cm.sample_g(rng), h = cm.sample_h(rng), k = cm.sample_h(rng);
    r.cm1 = std::max(r.cm1, max_abs(cm.Phi(cm.act(g, h)) - g * cm.Phi(h) * g.inverse()));
    r.cm2 = std::max(r.cm2, max_abs(cm.act(cm.Phi(h), k) - h * k * h.inverse()));
  }
  return r;
}

TwoArrow TwoGroup::mul(const TwoArrow& f, const TwoArrow& g) const {
  return {f.first * cm.act(f.second, g.first), f.second * g.second};
}

TwoArrow TwoGroup::compose(const TwoArrow& f, const TwoArrow& g) const {
  if (max_abs(source(f) - target(g)) > 1e-8 * std::max(1.0, max_abs(source(f))))
    throw std::invalid_argument("arrows are not composable");
  return {f.first * g.first, g.second};
}

TwoArrow TwoGroup::unit(const Mat& x) const { return {Mat::Identity(cm.h_size, cm.h_size), x}; }

TwoArrow TwoGroup::inverse(const TwoArrow& f) const { return {f.first.inverse(), target(f)}; }

namespace {

Mat conjugator_from_ad(const MatrixAlgebra& ma, const Mat& sigma) {
  // solve c X_i = (sigma X_i) c for c
  const int n = ma.grp.size();
  const Mat I = Mat::Identity(n, n);
  std::vector<Mat> rows;
  for (int i = 0; i < ma.dim(); ++i) {
    Mat Y = ma.mat(sigma.col(i));
    Mat Xt = ma.basis[i].transpose();
    // vec(c X) = (X^T ⊗ I) vec c,  vec(Y c) = (I ⊗ Y) vec c
    Mat k1 = Mat::Zero(n * n, n * n), k2 = Mat::Zero(n * n, n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        k1.block(a * n, b * n, n, n) = Xt(a, b) * I;
        k2.block(a * n, b * n, n, n) = I(a, b) * Y;
      }
    rows.push_back(k1 - k2);
  }
  Mat ns = null_space(vstack(rows));
  if (ns.cols() != 1) throw std::domain_error("automorphism is not inner");
  return ns.col(0).reshaped(n, n);
}

}  // namespace

TwoGroup pair_two_group(const MatrixGroup& G) {
  TwoGroup tg;
  tg.cm.name = "pair";
  tg.cm.h_size = G.size();
  tg.cm.Phi = [](const Mat& a) { return a; };
  tg.cm.act = [](const Mat& g, const Mat& h) { return Mat(g * h * g.inverse()); };
  tg.cm.sample_h = [G](std::mt19937_64& rng) { return sample(G, hs_full(), rng); };
  tg.cm.sample_g = tg.cm.sample_h;
  return tg;
}

TwoGroup automorphism_two_group(const MatrixGroup& G) {
  auto ma = std::make_shared<MatrixAlgebra>(lie_algebra(G));
  TwoGroup tg;
  tg.cm.name = "automorphism";
  tg.cm.h_size = G.size();
  tg.cm.Phi = [ma](const Mat& a) { return ma->Ad(a); };
  tg.cm.act = [ma](const Mat& sigma, const Mat& h) {
    Mat c = conjugator_from_ad(*ma, sigma);
    return Mat(c * h * c.inverse());
  };
  tg.cm.sample_h = [G](std::mt19937_64& rng) { return sample(G, hs_full(), rng); };
  tg.cm.sample_g = [G, ma](std::mt19937_64& rng) { return ma->Ad(sample(G, hs_full(), rng)); };
  return tg;
}

double two_group_interchange_residual(const TwoGroup& tg, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double r = 0;
  auto arrow_into = [&](const Mat& y) {
    // arrow (b, y) and then (a, Phi(b) y)
    return TwoArrow{tg.cm.sample_h(rng), y};
  };
  for (int s = 0; s < samples; ++s) {
    TwoArrow g1 = arrow_into(tg.cm.sample_g(rng));
    TwoArrow f1{tg.cm.sample_h(rng), tg.target(g1)};
    TwoArrow g2 = arrow_into(tg.cm.sample_g(rng));
    TwoArrow f2{tg.cm.sample_h(rng), tg.target(g2)};
    TwoArrow lhs = tg.mul(tg.compose(f1, g1), tg.compose(f2, g2));
    TwoArrow rhs = tg.compose(tg.mul(f1, f2), tg.mul(g1, g2));
    r = std::max({r, max_abs(lhs.first - rhs.first), max_abs(lhs.second - rhs.second)});
    TwoArrow p = tg.mul(f1, f2);
    r = std::max(r, max_abs(tg.source(p) - tg.source(f1) * tg.source(f2)));
    r = std::max(r, max_abs(tg.target(p) - tg.target(f1) * tg.target(f2)));
    TwoArrow inv = tg.inverse(f1);
    TwoArrow loop = tg.compose(inv, f1);
    r = std::max(r, max_abs(loop.first - Mat::Identity(loop.first.rows(), loop.first.cols())));
  }
  return r;
}

}  // namespace modlab
