#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "modlab/matgroups.hpp"
#include "modlab/report.hpp"
#include "modlab/repmoduli.hpp"

namespace modlab {

using Arrow = std::vector<Mat>;
using Object = std::vector<Mat>;

struct NotComposable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// m(g, h) is defined when s(g) = t(h); the pair groupoid has m((a, b), (b, c)) = (a, c)
struct GroupoidHandle {
  std::string name;
  std::function<Object(const Arrow&)> s, t;
  std::function<Arrow(const Object&)> u;
  std::function<Arrow(const Arrow&)> i;
  std::function<Arrow(const Arrow&, const Arrow&)> m;  // throws NotComposable
  std::function<double(const Arrow&, const Arrow&)> arrow_dist;
  std::function<double(const Object&, const Object&)> object_dist;
};
double list_dist(const std::vector<Mat>& x, const std::vector<Mat>& y);

// arrow(rng, nullptr) draws any arrow; arrow(rng, &x) draws one with target x
struct GroupoidSampler {
  std::function<Arrow(std::mt19937_64&, const Object*)> arrow;
};

CheckReport check_axioms(const GroupoidHandle& g, const GroupoidSampler& sampler, int count, std::uint64_t seed,
                         double tol = 1e-9);

// pair groupoid on lists of k matrices; arrows are a ++ b with t = a, s = b
GroupoidHandle pair_groupoid(int k);
GroupoidSampler pair_sampler(const MatrixGroup& G, int k);

// action groupoid of left multiplication: arrows (h, x), s = x, t = h x, m((h, x), (h', x')) = (h h', x')
GroupoidHandle action_groupoid();
GroupoidSampler action_sampler(const MatrixGroup& G, const HSpec& H);

// arrows are flattened glued points (ρ, ρ'), t = ρ, s = ρ'; composition realigns the middle leg
// with a base gauge element when s(g) and t(h) only agree up to the base orbit
struct GluedGroupoid {
  GluedModuliSpec spec;
  GaugeSpec base_gauge;  // K on V', G off V'
  GroupoidHandle handle;
  GroupoidSampler sampler;
};
GluedGroupoid glued_moduli_groupoid(const GluedModuliSpec& spec);

struct DoubleGroupoidHandle {
  std::string name;
  GroupoidHandle h, v;
  GroupoidSampler hs, vs;
  // g11 g12 / g21 g22: horizontal pairs h-composable, vertical pairs v-composable
  std::function<std::array<Arrow, 4>(std::mt19937_64&)> square;
  // local parametrization of arrows near a base arrow and the manifold dimension
  std::function<Arrow(const Arrow&, const RVec&)> perturb;
  int arrow_dim = 0;
  int expected_source_rank = 0;
  // groupoids on the side objects: v-composition acts on h-objects through h_side, and conversely
  GroupoidHandle h_side, v_side;
  std::function<double(const Arrow&)> constraint;  // defining equations of the arrow manifold
};
// axioms in both directions, interchange, structure maps as morphisms, double source rank
CheckReport check_double(const DoubleGroupoidHandle& d, int count, std::uint64_t seed, double tol = 1e-9);
int double_source_rank(const DoubleGroupoidHandle& d, const Arrow& g);

// {(w, x, y, z) ∈ B × A × B × A : x y = w z}; direction h: s = y, t = w, m = (w, x x', y', z z');
// direction v: s = z, t = x, m = (w w', x, y y', z')
DoubleGroupoidHandle lu_weinstein(const MatrixGroup& simple);
// arrows p11 p12 p21 p22 of points of a k-list; horizontal pairs along the first index
DoubleGroupoidHandle pair_double_groupoid(const MatrixGroup& G, int k);
// four-copy glued square: h pairs copies along e4 (a~b, c~d), v along e3 (a~c, b~d)
DoubleGroupoidHandle dousym2_double_groupoid(const MatrixGroup& simple);
Arrow flatten(const QuadRepPoint& q);
QuadRepPoint unflatten_quad(const Arrow& a);

// representations valued in a 2-group: arrow per edge (a_e, x_e), flattened as a_0, x_0, a_1, x_1, ...
struct TwoGroupDecoration {
  std::vector<HSpec> h_part, g_part;
};
// both parts subgroups and Phi(h_part) contained in g_part on samples
std::string multiplicative_problem(const MatrixGroup& G, const TwoGroup& tg, const TwoGroupDecoration& d);
struct TwoGroupModuli {
  MarkedSurface surface;
  MatrixGroup G;
  TwoGroup tg;
  TwoGroupDecoration deco;
  GroupoidHandle handle;
  GroupoidSampler sampler;
};
// throws std::invalid_argument for a non-multiplicative decoration
TwoGroupModuli two_group_moduli_groupoid(const MarkedSurface& s, const MatrixGroup& G, const TwoGroup& tg,
                                         const TwoGroupDecoration& d);
// relation residual of an arrow-valued representation in H ⋊ G
double two_group_relation_residual(const TwoGroupModuli& mod, const Arrow& arrow);

// three commuting pair structures on 2 x 2 x 2 cubes of representations: along S (sharing S edges),
// along T (sharing T edges) and the 2-group direction; T empty drops the second
CheckReport triple_cube_check(const MarkedSurface& s, const std::vector<int>& S, const std::vector<int>& T,
                              const MatrixGroup& G, const TwoGroup& tg, const TwoGroupDecoration& d, int count,
                              std::uint64_t seed);

}  // namespace modlab
