#pragma once

#include <memory>
#include <string>
#include <vector>

#include "modlab/linalg.hpp"

namespace modlab {

// Lie algebra given by structure constants in a fixed basis, with a symmetric form.
struct QuadLieAlgebra {
  int dim = 0;
  std::vector<Mat> ad;  // ad[i](k, j) = c_{ij}^k, i.e. [x_i, x_j] = sum_k c_{ij}^k x_k
  Mat form;             // B(x_i, x_j)
  int half = 0;         // set by double_algebra: coordinates [0, half) carry +B, [half, 2 half) carry -B
  std::string name;

  cd c(int i, int j, int k) const { return ad[i](k, j); }
  Mat ad_of(const Vec& x) const;
  Vec bracket(const Vec& x, const Vec& y) const;
  cd pair(const Vec& x, const Vec& y) const { return (x.transpose() * form * y)(0, 0); }
  bool is_double() const { return half > 0; }
};
using AlgPtr = std::shared_ptr<const QuadLieAlgebra>;

struct AlgebraResiduals {
  double antisymmetry = 0, jacobi = 0, invariance = 0;
};
AlgebraResiduals check_algebra(const QuadLieAlgebra& g);

QuadLieAlgebra from_structure(std::vector<Mat> ad, Mat form, std::string name = "custom");
// structure constants of span(basis) under the matrix commutator; form defaults to tr(XY)
QuadLieAlgebra from_matrix_basis(const std::vector<Mat>& basis, std::string name, const Mat* form = nullptr);

// n = 2: (h, e, f).  n = 3: (h1, h2, E12, E23, E13, E21, E32, E31).  Other n: diagonal part, then
// E_ij (i<j) in lexicographic order, then E_ji in the same order.
std::vector<Mat> sl_basis(int n);
QuadLieAlgebra sl2();
QuadLieAlgebra sl3();
QuadLieAlgebra abelian(int n);
QuadLieAlgebra abelian(int n, const Mat& form);
// "sl2", "sl3", "abelian(n)"
QuadLieAlgebra named_algebra(const std::string& name);
// {"dim": n, "c": [[[c_ij^k]]], "B": [[..]]}
QuadLieAlgebra algebra_from_json(const std::string& text);

// d = g ⊕ g with the form B ⊖ B
QuadLieAlgebra double_algebra(const QuadLieAlgebra& g);

struct Subspace {
  AlgPtr amb;
  Mat basis;  // columns
  int dim() const { return static_cast<int>(basis.cols()); }
};
Subspace make_subspace(AlgPtr amb, const Mat& basis);
Subspace whole(AlgPtr amb);

// subspaces of a double
Subspace diagonal(AlgPtr d);
Subspace antidiagonal(AlgPtr d);
Subspace direct_sum(AlgPtr d, const Mat& first, const Mat& second);
Subspace bar(const Subspace& l);
// g* = {X ⊕ Y ∈ b- ⊕ b+ : pr_h X = -pr_h Y} in the double of sl(n), sl_basis layout
Subspace sl_dual_subspace(AlgPtr d, int n);

double closure_residual(const Subspace& s);
double isotropy_residual(const Subspace& s);

struct SubspaceVerdict {
  bool pass = false;
  double isotropy = 0;
  double closure = 0;
  double containment = 0;
  std::string reason;
};
SubspaceVerdict is_lagrangian_subalgebra(const Subspace& s);
Subspace orthocomplement(const Subspace& c);
SubspaceVerdict is_coisotropic(const Subspace& c);
// c~ = {u ⊕ v : u, v ∈ c, u - v ∈ c^⊥} inside d
Subspace tilde_c(const Subspace& c, AlgPtr d);

struct RootData {
  Mat cartan;  // B-orthonormal columns
  Mat pos;     // E_alpha
  Mat neg;     // E_{-alpha}, B(E_alpha, E_{-alpha}) = 1
};
RootData sl_root_data(int n);

struct RMatrix {
  Mat tensor;  // R = sum r_ij x_i ⊗ x_j
  Mat skew;    // (R - R^flip) / 2
};
RMatrix standard_r_matrix(const QuadLieAlgebra& g, const RootData& roots);
RMatrix r_matrix_from_tensor(const Mat& tensor);
double check_cybe(const QuadLieAlgebra& g, const RMatrix& r);

struct DiffCrossedModule {
  QuadLieAlgebra h, g;
  Mat phi;               // dim g x dim h
  std::vector<Mat> act;  // act[i]: action of g-basis vector i on h
  Mat action_of(const Vec& x) const;
};
struct CrossedModuleResiduals {
  double cm1 = 0, cm2 = 0;
  double max() const { return std::max(cm1, cm2); }
};
CrossedModuleResiduals check_crossed_module(const DiffCrossedModule& cm);
DiffCrossedModule identity_crossed_module(const QuadLieAlgebra& g);
// phi = bstar : g* -> g, coadjoint action, bracket [a, b] = phi(a).b
DiffCrossedModule bsharp_crossed_module(const QuadLieAlgebra& g, const Mat& bstar);

// g* ⋊ g ⇉ g with coordinates (alpha, x)
struct QuadLie2Algebra {
  DiffCrossedModule cm;
  QuadLieAlgebra total;  // bracket of g* ⋊ g, form = metric Bbar
  Mat bstar;
  Mat s, t;  // dim g x 2 dim g
  int n() const { return cm.g.dim; }
};
double invariance_residual(const QuadLieAlgebra& g, const Mat& sym);
QuadLie2Algebra lie2_from_bilinear(const QuadLieAlgebra& g, const Mat& bstar);

// graph {(g1, g2, g1 g2)} in G^3 with metric Bbar ⊕ Bbar ⊖ Bbar
struct MultiplicativeVerdict {
  bool pass = false;
  int dim = 0;
  double isotropy = 0, closure = 0;
};
Mat composition_graph(const QuadLie2Algebra& l2);
MultiplicativeVerdict check_metric_multiplicative(const QuadLie2Algebra& l2);
// pairing of ker s with ker t, plus rank defect of ker s + ker t against a Lagrangian splitting
double kernel_orthogonality_residual(const QuadLie2Algebra& l2);
// Psi(alpha, x) = (B alpha + x, x) onto the pair 2-algebra g × g with metric K ⊖ K, K = B^{-1}
double pair_isomorphism_residual(const QuadLie2Algebra& l2);

struct QuasiBialgebraData {
  AlgPtr d;
  Mat L;                     // columns u_i
  Mat A;                     // columns a^i, dual: B(u_i, a^j) = delta_ij
  std::vector<Mat> bracket;  // bracket[i](j, k) = c_{ij}^k on L
  std::vector<Mat> delta;    // delta[i](j, k) = B([u_i, a^j], a^k)
  std::vector<Mat> chi;      // chi[j](k, l) = B([a^j, a^k], a^l)
  double delta_norm() const;
  double chi_norm() const;
};
QuasiBialgebraData split_quasi_bialgebra(const Subspace& L, const Subspace& A);
double reconstruction_residual(const QuasiBialgebraData& q);

}  // namespace modlab
