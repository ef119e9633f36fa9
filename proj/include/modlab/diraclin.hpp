#pragma once

#include <string>
#include <vector>

#include "modlab/matgroups.hpp"
#include "modlab/surface.hpp"

namespace modlab {

struct MetricVS {
  Mat form;
  int dim() const { return static_cast<int>(form.rows()); }
};
MetricVS metric_vs(const Mat& form);  // throws on degenerate form
MetricVS zero_space();

// Lagrangian subspace of E-bar × F; basis rows are (E coordinates, F coordinates)
struct LagRelation {
  MetricVS src, tgt;
  Mat basis;
  int dim() const { return static_cast<int>(basis.cols()); }
};
struct LagCertificate {
  bool pass = false;
  double isotropy = 0;
  int dim = 0, expected = 0;
};
LagCertificate certify(const LagRelation& r);

LagRelation graph_relation(const MetricVS& E, const MetricVS& F, const Mat& f);
LagRelation identity_relation(const MetricVS& E);
// a Lagrangian subspace of E seen as a relation E -> 0
LagRelation subspace_relation(const MetricVS& E, const Mat& basis);

struct Composition {
  LagRelation rel;
  int fiber_dim = 0;   // dimension of r ×_{E'} s
  int kernel_dim = 0;  // part of the fiber product invisible in E × F
  int proj_rank = 0;
  bool clean = false;
  std::string diagnostics;
};
// s after r, where r : E -> E' and s : E' -> F
Composition compose(const LagRelation& r, const LagRelation& s);

// forms and subspaces of d^V = ⊕_v (g ⊕ g) with metric ⊕ (K ⊖ K); per vertex coordinates (X_v, Y_v)
Mat dV_form(const MatrixAlgebra& ma, int nv);
Mat diagonal_fiber(const MatrixAlgebra& ma, int nv);
Mat lagrangian_complement_fiber(const BoundaryGraph& g, const MatrixAlgebra& ma);

struct CartanFiber {
  BoundaryGraph graph;
  std::vector<Mat> point;
  MetricVS space;  // d^V
  Mat anchor;      // d^V -> g^E, right-trivialized
};
CartanFiber cartan_fiber(const BoundaryGraph& g, const MatrixAlgebra& ma, const std::vector<Mat>& pt);

// chart on M = {g_n ... g_1 = 1} by the first n - 1 edges: columns are tangent vectors in g^E
Mat polygon_chart(const MatrixAlgebra& ma, const std::vector<Mat>& pt);
// tangent ⊕ cotangent of the chart, canonical pairing
MetricVS tangent_cotangent(int m);

struct PolygonFiber {
  CartanFiber cartan;
  Mat chart;  // g^E coordinates of the chart basis
  LagRelation R;  // TM ⊕ T*M  ->  d^V
  double chart_residual = 0;  // anchor image of the diagonal vs chart reconstruction
};
PolygonFiber polygon_morphism_fiber(const MarkedSurface& s, const MatrixAlgebra& ma, const std::vector<Mat>& rep);

struct Bivector {
  Mat P;
  bool graph = false;
  double antisymmetry = 0;
};
// r : TM ⊕ T*M -> 0; requires no nonzero purely tangent element
Bivector extract_bivector(const LagRelation& r);
// {v : (v, 0) ∈ r} for r : TM ⊕ T*M -> 0
Mat dirac_kernel(const LagRelation& r);

}  // namespace modlab
