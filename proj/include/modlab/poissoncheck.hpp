#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "modlab/diraclin.hpp"
#include "modlab/report.hpp"

namespace modlab {

using GroupPoint = std::vector<Mat>;

// Bivector on a product of `factors` copies of a matrix group.  Coefficients live in the
// right-trivialized frame: index k * dim + j is the right-invariant field of basis vector j on
// factor k, and {f, h} = sum P_IJ (X_I f) (X_J h).
struct BivectorField {
  std::string name;
  MatrixAlgebra ma;
  int factors = 1;
  std::function<Mat(const GroupPoint&)> eval;
  int dim() const { return factors * ma.dim(); }
  Mat operator()(const GroupPoint& x) const { return eval(x); }
};

BivectorField constant_bivector(const MatrixAlgebra& ma, int factors, const Mat& P, std::string name);
// pi_G = Lambda^r - Lambda^l with Lambda the skew part of r
BivectorField poisson_lie_bivector(const MatrixAlgebra& ma, const RMatrix& r);
// sum of signs[k] * pi0 on factor k, pi0 a bivector on one factor
BivectorField product_bivector(const BivectorField& pi0, const std::vector<int>& signs);
BivectorField shifted(const BivectorField& pi, const Mat& C);

double antisymmetry_residual(const BivectorField& pi, const GroupPoint& x);
// factor index / ma.dim() left-multiplied by exp(t x_j), j = index % ma.dim()
GroupPoint move(const MatrixAlgebra& ma, const GroupPoint& x, int index, double t);
GroupPoint sample_point(const MatrixAlgebra& ma, int factors, std::mt19937_64& rng);

// P(gh) = P(g) + Ad_g P(h) Ad_g^T over sampled pairs
CheckReport check_multiplicative_group(const BivectorField& pi, int samples, std::uint64_t seed);

// Lie quasi-bialgebra L acting on the domain of pi.  Third axiom: pi^# mu^* = rho o a_*.
struct QuasiPoissonData {
  BivectorField pi;
  std::function<Mat(const GroupPoint&)> action;           // frame x dim L, columns rho(u_j)
  std::function<Mat(const GroupPoint&)> moment_pullback;  // frame x moment dimension
  std::function<Mat(const GroupPoint&)> a_star;           // dim L x moment dimension
  std::vector<Mat> chi;    // chi[j](k, l) = B([a^j, a^k], a^l)
  std::vector<Mat> delta;  // delta[i](j, k) = B([u_i, a^j], a^k)
};

// Jacobiator of matrix-entry coordinates, first derivatives by central differences
CheckReport check_jacobi(const BivectorField& pi, const std::vector<GroupPoint>& points);
// Jacobiator against rho(chi)
CheckReport check_jacobi(const QuasiPoissonData& qp, const std::vector<GroupPoint>& points);

// polygon(n) by its first n - 1 edges, pi from A_Gamma o R, L = g_Delta^V
QuasiPoissonData polygon_quasi_poisson(const MatrixAlgebra& ma, int n);
GroupPoint complete_polygon(const MatrixAlgebra& ma, const GroupPoint& free);
QuasiPoissonData perturbed_anchor(const QuasiPoissonData& qp, double size, std::uint64_t seed);
// parts: "third" (exact), "jacobi_defect", "lie_derivative" (finite differences)
CheckReport quasi_poisson_axioms(const QuasiPoissonData& qp, const std::vector<GroupPoint>& points);
double third_axiom_residual(const QuasiPoissonData& qp, const GroupPoint& x);
// L_Gamma o R kernel vs gauge directions and the A_Gamma o R bivector graph, on free polygon points;
// parts: "kernel_dim_gap", "kernel_containment", "not_graph", "antisymmetry"
CheckReport check_polygon_dirac(const MatrixAlgebra& ma, int n, const std::vector<GroupPoint>& points);

// Bruhat square over SL(n, C): edge 1 in B+, corners l = (bar b+~, b+~, g*, bar g*)
struct BruhatSquare {
  MatrixAlgebra ma;
  MarkedSurface surface;
  std::vector<Subspace> corners;
  std::vector<int> gauge_corners;  // corners with l ∩ g_Delta = b+
  RootData roots;
  Mat lambda;
};
BruhatSquare bruhat_square(int n);
GroupPoint sample_bruhat_point(const BruhatSquare& sq, std::mt19937_64& rng);
// the displayed canonical square bivector plus a(pi_v) with pi_v = Lambda on the g* corners,
// on g^E in the right frame
Mat square_bivector_brucel(const BruhatSquare& sq, const GroupPoint& x);
// pi_v in g ⊗ g read off a corner Lagrangian: beta (2K)^{-1} when l = graph of beta : A -> g_Delta,
// zero when l splits along g_Delta ⊕ A; throws otherwise
Mat corner_twist(const MatrixAlgebra& ma, const Subspace& l);
// extracted pi_M plus a(pi_v) with pi_v from corner_twist, chart coordinates
Mat square_bivector_pipeline(const BruhatSquare& sq, const GroupPoint& x);
struct BruhatCalibration {
  int kernel_dim = 0, gauge_dim = 0;
  double kernel_containment = 0;   // Dirac kernel vs gauge directions, both ways
  double basic_gap_pipeline = 0;   // pipeline bivector vs Dirac structure on conormals of gauge orbits
  double basic_gap_formula = 0;    // displayed formula vs Dirac structure, same covectors
  double basic_gap_displayed = 0;  // pi_M plus a(Lambda) on both g* corners vs Dirac structure
  double tangency = 0;             // displayed formula off TM
  double full_tensor_gap = 0;      // displayed formula vs pipeline bivector, chart coordinates
  bool kernel_agrees(double tol = 1e-8) const {
    return kernel_dim == gauge_dim && kernel_containment <= tol && basic_gap_pipeline <= tol;
  }
};
BruhatCalibration bruhat_calibration(const BruhatSquare& sq, const GroupPoint& x);

using ConstraintMap = std::function<Vec(const GroupPoint&)>;
Mat constraint_jacobian(const MatrixAlgebra& ma, const ConstraintMap& c, const GroupPoint& x);
// max over points of the part of pi^#(T°C) normal to TC; parts["conormal_dim"] records dim T°C
CheckReport check_coisotropic(const BivectorField& pi, const ConstraintMap& c, const std::vector<GroupPoint>& points);

// graph {(p, q, pq)} of the pair groupoid multiplication with (pi0, sign pi0) on each arrow
// space, and the third factor carrying the opposite structure
struct CoisotropyFixture {
  BivectorField pi;
  ConstraintMap constraint;
  std::function<GroupPoint(std::mt19937_64&)> sample;
};
CoisotropyFixture pair_multiplication_graph(const BivectorField& pi0, int sign);

struct BivectorRankReport {
  bool pass = false;
  bool odd_dimension = false;
  double min_abs_det = 0;
  int flagged = 0;  // points with |det| below the threshold
  std::string reason;
};
BivectorRankReport check_nondegenerate(const BivectorField& pi, const std::vector<GroupPoint>& points,
                                       double threshold = 1e-8);

// omega on pairs (x, y) in a matrix 2-group with Lie algebra `ma` and metric `metric`;
// v, w = (right-trivialized x-tangent, right-trivialized y-tangent)
cd annulus_twisted_form(const MatrixAlgebra& ma, const Mat& metric, const Mat& x, const Mat& y, const Vec& v,
                        const Vec& w);
// G ⋊ Inn(G) realized inside G × G by (a, conj_c) -> (ac, c)
Mat inner_twist_embed(const Mat& a, const Mat& c);
// the tau, kappa twisted restriction with tau = conj_c, kappa = conj_k; v, w = (xi_a, xi_b)
cd twisted_restriction(const MatrixAlgebra& ma, const Mat& c, const Mat& k, const Mat& a, const Mat& b, const Vec& v,
                       const Vec& w);

}  // namespace modlab
