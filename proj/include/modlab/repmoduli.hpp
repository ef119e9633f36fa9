#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "modlab/matgroups.hpp"
#include "modlab/surface.hpp"

namespace modlab {

struct RepPoint {
  std::vector<Mat> edges;
  std::vector<Mat> internal;
};
// (ρ, ρ') on two copies of Σ, agreeing on the glued edges
struct GluedRepPoint {
  RepPoint a, b;
};
using GaugeElement = std::vector<Mat>;  // one group element per vertex

double relation_residual(const MarkedSurface& s, const RepPoint& rep);
std::vector<Mat> moment(const RepPoint& rep);
std::pair<std::vector<Mat>, std::vector<Mat>> moment(const GluedRepPoint& pt);
RepPoint gauge_act(const MarkedSurface& s, const GaugeElement& g, const RepPoint& rep);

// per-vertex subgroup K_v integrating l_v ∩ g_Δ
struct GaugeSpec {
  std::vector<HSpec> K;
};
HSpec kernel_subgroup(const MatrixGroup& G, const Subspace& l);
GaugeSpec kernel_gauge(const MatrixGroup& G, const Decoration& d);

// gauge of a glued pair: shared vertices (off V') carry one element acting on both copies
struct PairGaugeSpec {
  std::vector<HSpec> K;
  std::vector<bool> shared;
};
struct PairGauge {
  GaugeElement a, b;
};
GluedRepPoint gauge_act(const GluingMap& gm, const PairGauge& g, const GluedRepPoint& pt);

struct ModuliSpec {
  MarkedSurface surface;
  MatrixGroup G;
  Decoration deco;
  GaugeSpec K;
};
ModuliSpec polygon_moduli(const MarkedSurface& s, const MatrixGroup& G, const Decoration& d);

struct GluedModuliSpec {
  GluingMap gm;
  MatrixGroup G;
  Decoration deco;  // on Σ
  PairGaugeSpec K;
  int solve_edge = -1;
};
GluedModuliSpec glued_moduli(const GluingMap& gm, const MatrixGroup& G, const Decoration& d);

double constraint_residual(const ModuliSpec& spec, const RepPoint& rep);
double constraint_residual(const GluedModuliSpec& spec, const GluedRepPoint& pt);
bool satisfies(const ModuliSpec& spec, const RepPoint& rep);
bool satisfies(const GluedModuliSpec& spec, const GluedRepPoint& pt);

GaugeElement sample_gauge(const MatrixGroup& G, const GaugeSpec& K, std::mt19937_64& rng);
PairGauge sample_gauge(const GluedModuliSpec& spec, std::mt19937_64& rng);

RepPoint sample_constrained(const ModuliSpec& spec, std::mt19937_64& rng);
GluedRepPoint sample_constrained(const GluedModuliSpec& spec, std::mt19937_64& rng);
// second copy sampled given the first; used for composable pairs
GluedRepPoint sample_with_first(const GluedModuliSpec& spec, const RepPoint& a, std::mt19937_64& rng);
GluedRepPoint sample_with_second(const GluedModuliSpec& spec, const RepPoint& b, std::mt19937_64& rng);

std::vector<Mat> phi_map(const GluedRepPoint& pt, const GluingMap& gm);

// gauge action on a flat list of matrices: x_k -> g[tgt_slot[k]] x_k g[src_slot[k]]^{-1}
struct GaugeProblem {
  MatrixGroup G;
  std::vector<std::vector<Mat>> slot_basis;  // real generators per slot
  std::vector<int> tgt_slot, src_slot;
  int nslots() const { return static_cast<int>(slot_basis.size()); }
};
GaugeProblem gauge_problem(const MarkedSurface& s, const MatrixGroup& G, const GaugeSpec& K);
GaugeProblem gauge_problem(const GluedModuliSpec& spec);
std::vector<Mat> flatten(const GluedRepPoint& pt);
GluedRepPoint unflatten(const std::vector<Mat>& x, int ne);
std::vector<Mat> act(const GaugeProblem& p, const std::vector<Mat>& k, const std::vector<Mat>& x);
// right-trivialized orbit tangent (rows: edge blocks in Lie algebra coordinates)
Mat orbit_tangent(const GaugeProblem& p, const MatrixAlgebra& ma, const std::vector<Mat>& x);

struct GaugeSolve {
  bool converged = false;
  int iterations = 0;
  double residual = 0;
  std::vector<Mat> k;  // per slot
};
GaugeSolve solve_gauge(const GaugeProblem& p, const std::vector<Mat>& x, const std::vector<Mat>& y);

enum class Verdict { True, False, Unknown };
struct OrbitVerdict {
  Verdict verdict = Verdict::Unknown;
  int tier = 0;
  double residual = 0;
  std::vector<Mat> gauge;
};
using ChartDistance = std::function<double(const std::vector<Mat>&, const std::vector<Mat>&)>;
OrbitVerdict same_orbit(const GaugeProblem& p, const std::vector<Mat>& x, const std::vector<Mat>& y,
                        const ChartDistance& chart = nullptr);

// chart maps; edges are 0-based (e1 is index 0)
Mat chart_poigr(const GluedRepPoint& pt);
Mat chart_poigro0(const GluedRepPoint& pt);
struct QuadRepPoint {
  RepPoint a, b, c, d;
};
std::vector<Mat> chart_dousym2(const QuadRepPoint& q);
struct CosetChart {
  Mat coset;  // representative of a class in G/B+
  Mat elem;
};
CosetChart chart_brucel_psi(const GluedRepPoint& pt);
bool same_coset_upper(const Mat& x, const Mat& y, double tol = 1e-8);
double coset_chart_distance(const CosetChart& x, const CosetChart& y);
// slice form [x1, x3^{-1} x2^{-1}] on triples of a square's edges
CosetChart chart_brucel_slice(const std::vector<Mat>& x);

// four copies a, b, c, d of the square: a4 = b4, c4 = d4, a3 = c3, b3 = d3,
// a1 b1^{-1}, c1 d1^{-1} ∈ B and a2^{-1} c2, b2^{-1} d2 ∈ A
struct Dousym2Spec {
  MatrixGroup G;  // pair group
  int max_retries = 8;
};
QuadRepPoint sample_dousym2(const Dousym2Spec& spec, std::mt19937_64& rng);
// completions of a fixed left column (a, c) or top row (a, b)
QuadRepPoint sample_dousym2_given_left(const Dousym2Spec& spec, const RepPoint& a, const RepPoint& c,
                                       std::mt19937_64& rng);
// d from (a, b, c); throws OffCellError
QuadRepPoint complete_dousym2(const Dousym2Spec& spec, const RepPoint& a, const RepPoint& b, const RepPoint& c);
QuadRepPoint sample_dousym2_given_top(const Dousym2Spec& spec, const RepPoint& a, const RepPoint& b,
                                      std::mt19937_64& rng);
double dousym2_constraint_residual(const Dousym2Spec& spec, const QuadRepPoint& q);

std::string rep_to_json(const RepPoint& rep);
RepPoint rep_from_json(const std::string& text);

}  // namespace modlab
