#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace modlab {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

namespace tol {
inline constexpr double structure = 1e-12;
inline constexpr double subspace = 1e-10;
inline constexpr double rank_rel = 1e-8;
inline constexpr double fd_step = 1e-5;
}  // namespace tol

double max_abs(const Mat& a);

// singular values below rel * sigma_max (absolute floor 1e-13) count as zero
int numeric_rank(const Mat& a, double rel = tol::rank_rel);
Mat null_space(const Mat& a, double rel = tol::rank_rel);
Mat orth(const Mat& a, double rel = tol::rank_rel);

// columns spanning col(a) ∩ col(b)
Mat intersect(const Mat& a, const Mat& b, double rel = tol::rank_rel);

// residual of projecting col(a) onto col(b); zero iff col(a) ⊆ col(b)
double containment_residual(const Mat& a, const Mat& b);
bool same_span(const Mat& a, const Mat& b, double eps);

Mat hstack(const std::vector<Mat>& blocks);
Mat vstack(const std::vector<Mat>& blocks);
Mat block_diag(const std::vector<Mat>& blocks);

// stacks real and imaginary parts of a flattened matrix
RVec realify(const Mat& a);

}  // namespace modlab
