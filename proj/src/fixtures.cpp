#include "modlab/fixtures.hpp"

namespace modlab {

ManinTriple manin_triple(const MatrixGroup& simple) {
  ManinTriple m;
  m.G = pair_group(simple);
  m.ga = lie_algebra(m.G);
  m.d = std::make_shared<QuadLieAlgebra>(double_algebra(*m.ga.alg));
  m.a = diagonal(m.ga.alg).basis;
  m.b = sl_dual_subspace(m.ga.alg, simple.n).basis;
  return m;
}

namespace {
GluedExample square_example(const MatrixGroup& simple, std::vector<HSpec> edges, const Mat& l1a, const Mat& l1b,
                            const Mat& l2a, const Mat& l2b) {
  ManinTriple m = manin_triple(simple);
  Decoration d;
  d.edges = std::move(edges);
  d.vertices = {m.sum(l1a, l1b), m.sum(l2a, l2b), m.diag(), m.diag()};
  return {glue_double(new_polygon(4), {3}), m.G, d};
}
}  // namespace

GluedExample example_poigr(const MatrixGroup& simple) {
  ManinTriple m = manin_triple(simple);
  Decoration d;
  d.edges = {hs_full(), hs_full(), hs_full()};
  d.vertices = {m.sum(m.a, m.b), m.diag(), m.diag()};
  return {glue_double(new_polygon(3), {2}), m.G, d};
}

GluedExample example_poigro0(const MatrixGroup& simple) {
  ManinTriple m = manin_triple(simple);
  return square_example(simple, {hs_full(), m.A(), m.B(), hs_full()}, m.a, m.a, m.a, m.b);
}

GluedExample example_dousym(const MatrixGroup& simple) {
  ManinTriple m = manin_triple(simple);
  return square_example(simple, {m.B(), m.A(), m.B(), hs_full()}, m.a, m.b, m.b, m.a);
}

GluedExample example_brucel() {
  const MatrixGroup G = group_by_key("sl2c");
  MatrixAlgebra ga = lie_algebra(G);
  AlgPtr d = std::make_shared<QuadLieAlgebra>(double_algebra(*ga.alg));
  Mat bplus = Mat::Zero(3, 2);
  bplus(0, 0) = 1;
  bplus(1, 1) = 1;
  const Subspace bt = tilde_c(make_subspace(ga.alg, bplus), d);
  Decoration deco;
  deco.edges = {hs_full(), hs_borel_upper(), hs_full(), hs_full()};
  deco.vertices = {bt, diagonal(d), diagonal(d), sl_dual_subspace(d, 2)};
  return {glue_double(new_polygon(4), {2}), G, deco};
}

}  // namespace modlab
