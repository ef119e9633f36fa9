#include "modlab/diraclin.hpp"

#include <sstream>
#include <stdexcept>

namespace modlab {

MetricVS metric_vs(const Mat& form) {
  if (form.rows() != form.cols()) throw std::invalid_argument("form must be square");
  if (form.rows() > 0 && numeric_rank(form, 1e-10) != form.rows()) throw std::invalid_argument("degenerate form");
  return MetricVS{form};
}

MetricVS zero_space() { return MetricVS{Mat(0, 0)}; }

LagCertificate certify(const LagRelation& r) {
  LagCertificate c;
  const int de = r.src.dim(), df = r.tgt.dim();
  c.expected = (de + df) / 2;
  c.dim = numeric_rank(r.basis);
  if (r.basis.cols() > 0) {
    Mat q = orth(r.basis);
    Mat form = block_diag({Mat(-r.src.form), r.tgt.form});
    c.isotropy = max_abs(q.transpose() * form * q);
  }
  c.pass = (de + df) % 2 == 0 && c.dim == c.expected && c.isotropy <= tol::subspace;
  return c;
}

LagRelation graph_relation(const MetricVS& E, const MetricVS& F, const Mat& f) {
  if (f.rows() != F.dim() || f.cols() != E.dim()) throw std::invalid_argument("map has wrong shape");
  return LagRelation{E, F, vstack({Mat(Mat::Identity(E.dim(), E.dim())), f})};
}

LagRelation identity_relation(const MetricVS& E) {
  return graph_relation(E, E, Mat::Identity(E.dim(), E.dim()));
}

LagRelation subspace_relation(const MetricVS& E, const Mat& basis) {
  if (basis.rows() != E.dim()) throw std::invalid_argument("subspace basis has wrong shape");
  return LagRelation{E, zero_space(), basis};
}

Composition compose(const LagRelation& r, const LagRelation& s) {
  if (r.tgt.dim() != s.src.dim() || max_abs(r.tgt.form - s.src.form) > 1e-12)
    throw std::invalid_argument("middle spaces do not match");
  const int de = r.src.dim(), dm = r.tgt.dim(), df = s.tgt.dim();
  Mat RE = r.basis.topRows(de), RM = r.basis.bottomRows(dm);
  Mat SM = s.basis.topRows(dm), SF = s.basis.bottomRows(df);
  Mat N = null_space(hstack({RM, Mat(-SM)}));
  Composition c;
  c.fiber_dim = static_cast<int>(N.cols());
  Mat out = vstack({Mat(RE * N.topRows(r.dim())), Mat(SF * N.bottomRows(s.dim()))});
  c.proj_rank = numeric_rank(out);
  c.kernel_dim = c.fiber_dim - c.proj_rank;
  c.rel = LagRelation{r.src, s.tgt, orth(out)};
  auto cert = certify(c.rel);
  c.clean = cert.pass;
  std::ostringstream d;
  d << "fiber " << c.fiber_dim << ", kernel " << c.kernel_dim << ", rank " << c.proj_rank << " (expected "
    << cert.expected << "), isotropy " << cert.isotropy;
  c.diagnostics = d.str();
  return c;
}

Mat dV_form(const MatrixAlgebra& ma, int nv) {
  const Mat& K = ma.alg->form;
  std::vector<Mat> blocks;
  for (int v = 0; v < nv; ++v) {
    blocks.push_back(K);
    blocks.push_back(-K);
  }
  return block_diag(blocks);
}

Mat diagonal_fiber(const MatrixAlgebra& ma, int nv) {
  const int d = ma.dim();
  Mat b = Mat::Zero(2 * d * nv, d * nv);
  for (int v = 0; v < nv; ++v) {
    b.block(2 * d * v, d * v, d, d) = Mat::Identity(d, d);
    b.block(2 * d * v + d, d * v, d, d) = Mat::Identity(d, d);
  }
  return b;
}

Mat lagrangian_complement_fiber(const BoundaryGraph& g, const MatrixAlgebra& ma) {
  const int d = ma.dim(), nv = g.nv;
  Mat b = Mat::Zero(2 * d * nv, d * nv);
  for (int v = 0; v < nv; ++v) {
    b.block(2 * d * v, d * v, d, d) = Mat::Identity(d, d);
    b.block(2 * d * v + d, d * v, d, d) = -Mat::Identity(d, d);
  }
  return b;
}

CartanFiber cartan_fiber(const BoundaryGraph& g, const MatrixAlgebra& ma, const std::vector<Mat>& pt) {
  if (static_cast<int>(pt.size()) != g.ne()) throw std::invalid_argument("point does not match the graph");
  const int d = ma.dim();
  CartanFiber cf;
  cf.graph = g;
  cf.point = pt;
  cf.space = MetricVS{dV_form(ma, g.nv)};
  cf.anchor = Mat::Zero(d * g.ne(), 2 * d * g.nv);
  for (int e = 0; e < g.ne(); ++e) {
    cf.anchor.block(d * e, 2 * d * g.src[e], d, d) -= ma.Ad(pt[e]);
    cf.anchor.block(d * e, 2 * d * g.tgt[e] + d, d, d) += Mat::Identity(d, d);
  }
  return cf;
}

Mat polygon_chart(const MatrixAlgebra& ma, const std::vector<Mat>& pt) {
  const int n = static_cast<int>(pt.size()), d = ma.dim();
  Mat T = Mat::Zero(n * d, (n - 1) * d);
  const int sz = ma.grp.size();
  Mat prefix = Mat::Identity(sz, sz);  // g_{n-1} ... g_{k+1}
  for (int k = n - 2; k >= 0; --k) {
    prefix = prefix * pt[k + 1];
    T.block(k * d, k * d, d, d) = Mat::Identity(d, d);
    T.block((n - 1) * d, k * d, d, d) = -ma.Ad(prefix);
  }
  return T;
}

MetricVS tangent_cotangent(int m) {
  Mat P = Mat::Zero(2 * m, 2 * m);
  P.topRightCorner(m, m) = Mat::Identity(m, m);
  P.bottomLeftCorner(m, m) = Mat::Identity(m, m);
  return MetricVS{P};
}

PolygonFiber polygon_morphism_fiber(const MarkedSurface& s, const MatrixAlgebra& ma, const std::vector<Mat>& rep) {
  const int n = s.graph.ne(), d = ma.dim();
  if (s.graph.cycles.size() != 1 || s.n_internal() != 0 || s.graph.nv != n)
    throw std::invalid_argument("polygon_morphism_fiber needs a polygon");
  if (static_cast<int>(rep.size()) != n) throw std::invalid_argument("rep does not match the polygon");
  const int sz = ma.grp.size();
  Mat prod = Mat::Identity(sz, sz);
  for (const auto& l : s.relations[0]) prod = prod * rep[l.gen];
  if (max_abs(prod - Mat::Identity(sz, sz)) > 1e-10) throw std::invalid_argument("rep is off the variety");
  PolygonFiber pf;
  pf.cartan = cartan_fiber(s.graph, ma, rep);
  pf.chart = polygon_chart(ma, rep);
  const Mat& A = pf.cartan.anchor;
  const Mat& GD = pf.cartan.space.form;
  const int m = (n - 1) * d, nd = n * d;
  Mat X = diagonal_fiber(ma, n);
  Mat AX = A * X;
  Mat gens = Mat::Zero(2 * m + 2 * nd, nd + nd);
  gens.block(0, 0, m, nd) = AX.topRows(m);
  gens.block(2 * m, 0, 2 * nd, nd) = X;
  gens.block(m, nd, m, nd) = pf.chart.transpose();
  gens.block(2 * m, nd, 2 * nd, nd) = GD.inverse() * A.transpose();
  pf.chart_residual = max_abs(pf.chart * AX.topRows(m) - AX);
  pf.R = LagRelation{tangent_cotangent(m), pf.cartan.space, orth(gens)};
  return pf;
}

Bivector extract_bivector(const LagRelation& r) {
  if (r.tgt.dim() != 0) throw std::invalid_argument("expected a relation into the zero space");
  const int m = r.src.dim() / 2;
  Mat V = r.basis.topRows(m), B = r.basis.bottomRows(m);
  Bivector bv;
  bv.graph = r.dim() == m && numeric_rank(B) == m;
  if (!bv.graph) throw std::domain_error("relation is not the graph of a bivector");
  bv.P = V * B.inverse();
  bv.antisymmetry = max_abs(bv.P + bv.P.transpose());
  return bv;
}

Mat dirac_kernel(const LagRelation& r) {
  const int m = r.src.dim() / 2;
  Mat V = r.basis.topRows(m), B = r.basis.bottomRows(m);
  // rank of the cotangent part measured against the whole basis, not against B itself
  Eigen::JacobiSVD<Mat> whole(r.basis);
  const double scale = whole.singularValues().size() ? whole.singularValues()(0) : 0.0;
  Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol::rank_rel * scale) ++rank;
  Mat N = svd.matrixV().rightCols(B.cols() - rank);
  if (N.cols() == 0) return Mat(m, 0);
  return orth(V * N);
}

}  // namespace modlab
