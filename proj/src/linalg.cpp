#include "modlab/linalg.hpp"

#include <algorithm>

namespace modlab {

double max_abs(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

namespace {

double cutoff(const Eigen::VectorXd& s, double rel) {
  double smax = s.size() ? s(0) : 0.0;
  return std::max(rel * smax, 1e-13);
}

}  // namespace

int numeric_rank(const Mat& a, double rel) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  double c = cutoff(s, rel);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > c) ++r;
  return r;
}

Mat null_space(const Mat& a, double rel) {
  const int n = static_cast<int>(a.cols());
  if (a.rows() == 0) return Mat::Identity(n, n);
  if (n == 0) return Mat(0, 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double c = cutoff(s, rel);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > c) ++r;
  return svd.matrixV().rightCols(n - r);
}

Mat orth(const Mat& a, double rel) {
  if (a.cols() == 0 || a.rows() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double c = cutoff(s, rel);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > c) ++r;
  return svd.matrixU().leftCols(r);
}

Mat intersect(const Mat& a, const Mat& b, double rel) {
  if (a.cols() == 0 || b.cols() == 0) return Mat(a.rows(), 0);
  Mat qa = orth(a, rel), qb = orth(b, rel);
  Mat m(qa.rows(), qa.cols() + qb.cols());
  m << qa, -qb;
  Mat ns = null_space(m, rel);
  return orth(qa * ns.topRows(qa.cols()), rel);
}

double containment_residual(const Mat& a, const Mat& b) {
  if (a.cols() == 0) return 0.0;
  if (b.cols() == 0) return max_abs(a);
  Mat qb = orth(b);
  Mat r = a - qb * (qb.adjoint() * a);
  return max_abs(r);
}

bool same_span(const Mat& a, const Mat& b, double eps) {
  return numeric_rank(a) == numeric_rank(b) && containment_residual(a, b) <= eps &&
         containment_residual(b, a) <= eps;
}

Mat hstack(const std::vector<Mat>& blocks) {
  Eigen::Index rows = blocks.empty() ? 0 : blocks.front().rows(), cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Mat out(rows, cols);
  Eigen::Index c = 0;
  for (const auto& b : blocks) {
    out.middleCols(c, b.cols()) = b;
    c += b.cols();
  }
  return out;
}

Mat vstack(const std::vector<Mat>& blocks) {
  Eigen::Index cols = blocks.empty() ? 0 : blocks.front().cols(), rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Mat out(rows, cols);
  Eigen::Index r = 0;
  for (const auto& b : blocks) {
    out.middleRows(r, b.rows()) = b;
    r += b.rows();
  }
  return out;
}

Mat block_diag(const std::vector<Mat>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Mat out = Mat::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

RVec realify(const Mat& a) {
  RVec v(2 * a.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      v(k) = a(i, j).real();
      v(a.size() + k) = a(i, j).imag();
      ++k;
    }
  return v;
}

}  // namespace modlab
