#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modlab/linalg.hpp"
#include "modlab/quadlie.hpp"

namespace modlab {

enum class Field { Real, Complex };

// SL(n) over the given field; blocks = 2 realizes SL(n) × SL(n) block-diagonally.
struct MatrixGroup {
  int n = 2;
  int blocks = 1;
  Field field = Field::Real;
  int size() const { return n * blocks; }
  bool operator==(const MatrixGroup&) const = default;
};

// "sl2r", "sl2c", "sl3r", "sl3c"
MatrixGroup group_by_key(const std::string& key);
MatrixGroup pair_group(const MatrixGroup& g);
Mat block(const MatrixGroup& G, const Mat& g, int k);
Mat from_blocks(const Mat& first, const Mat& second);
double group_residual(const MatrixGroup& G, const Mat& g);

Mat expm(const Mat& x);
Mat sqrtm(const Mat& a);
Mat logm(const Mat& g);

// Lie algebra of a MatrixGroup with its matrix realization.  For blocks = 2 the algebra is the
// double (form B ⊖ B) in the basis (X_i, 0), (0, X_i).
struct MatrixAlgebra {
  MatrixGroup grp;
  std::vector<Mat> basis;
  AlgPtr alg;
  Mat solver;  // left inverse of the vectorized basis

  int dim() const { return static_cast<int>(basis.size()); }
  Mat mat(const Vec& c) const;
  Vec coords(const Mat& x) const;
  Mat Ad(const Mat& g) const;
  Mat exp(const Vec& c) const { return expm(mat(c)); }
};
MatrixAlgebra lie_algebra(const MatrixGroup& G);

struct HSpec {
  enum class Kind { Full, BorelUpper, BorelLower, NilUpper, NilLower, Torus, Diagonal, Dual, ConjClass, Generated, Trivial };
  Kind kind = Kind::Full;
  Mat rep;                // ConjClass representative
  std::vector<Mat> gens;  // Generated: matrix basis of the subalgebra
  bool inverted = false;  // the set {g^{-1} : g ∈ H}
  std::string key() const;
};
HSpec hs_full();
HSpec hs_borel_upper();
HSpec hs_borel_lower();
HSpec hs_nil_upper();
HSpec hs_nil_lower();
HSpec hs_torus();
HSpec hs_diagonal();
HSpec hs_dual();
HSpec hs_trivial();
HSpec hs_conj_class(const Mat& rep);
HSpec hs_generated(const MatrixGroup& G, std::vector<Mat> gens);
HSpec hs_inverse(HSpec h);
// "full", "borel+", "borel-", "nil+", "nil-", "torus", "diagonal", "dual", "trivial"
HSpec hspec_by_key(const std::string& key);

bool is_subgroup(const HSpec& h);
std::vector<Mat> subalgebra_basis(const MatrixGroup& G, const HSpec& h);
double membership_residual(const MatrixGroup& G, const HSpec& h, const Mat& g);
bool contains(const MatrixGroup& G, const HSpec& h, const Mat& g);
// inverse closure of a conjugacy class: whether rep^{-1} lies in the class
bool inverse_closed(const MatrixGroup& G, const HSpec& h);

Mat sample_algebra(const MatrixGroup& G, const std::vector<Mat>& basis, std::mt19937_64& rng, double scale = 0.5);
Mat sample(const MatrixGroup& G, const HSpec& h, std::mt19937_64& rng, double scale = 0.5);
Mat sample(const MatrixGroup& G, const HSpec& h, std::uint64_t seed, double scale = 0.5);

struct OffCellError : std::domain_error {
  using std::domain_error::domain_error;
};

// g = (a, a)(b-, b+) in G × G; b- lower, b+ upper, diagonals mutually inverse
struct GaussFactors {
  Mat a, bminus, bplus;
  double residual = 0;
  Mat diag_part() const { return from_blocks(a, a); }
  Mat dual_part() const { return from_blocks(bminus, bplus); }
};
GaussFactors gauss_factorize(const MatrixGroup& D, const Mat& g);

struct GroupCrossedModule {
  std::string name;
  int h_size = 0;
  std::function<Mat(const Mat&)> Phi;
  std::function<Mat(const Mat&, const Mat&)> act;  // (g, h) -> g.h
  std::function<Mat(std::mt19937_64&)> sample_h, sample_g;
};
CrossedModuleResiduals check_group_crossed_module(const GroupCrossedModule& cm, int samples, std::uint64_t seed);

// arrows (a, x) of H ⋊ G with s = x, t = Phi(a) x
using TwoArrow = std::pair<Mat, Mat>;
struct TwoGroup {
  GroupCrossedModule cm;
  Mat source(const TwoArrow& f) const { return f.second; }
  Mat target(const TwoArrow& f) const { return cm.Phi(f.first) * f.second; }
  TwoArrow mul(const TwoArrow& f, const TwoArrow& g) const;
  // f after g; requires s(f) = t(g)
  TwoArrow compose(const TwoArrow& f, const TwoArrow& g) const;
  TwoArrow unit(const Mat& x) const;
  TwoArrow inverse(const TwoArrow& f) const;
};
TwoGroup pair_two_group(const MatrixGroup& G);
// inner automorphisms only; G-arrows are represented by their adjoint matrices
TwoGroup automorphism_two_group(const MatrixGroup& G);
// interchange law and morphism property of s, t, composition on sampled squares
double two_group_interchange_residual(const TwoGroup& tg, int samples, std::uint64_t seed);

}  // namespace modlab
