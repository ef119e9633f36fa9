#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "modlab/matgroups.hpp"
#include "modlab/quadlie.hpp"

namespace modlab {

struct BoundaryGraph {
  int nv = 0;
  std::vector<int> src, tgt;             // per edge
  std::vector<std::vector<int>> cycles;  // tgt(c[i]) = src(c[i+1]) cyclically
  int ne() const { return static_cast<int>(src.size()); }
};

// generator of the fundamental groupoid: a boundary edge, or an internal generator
struct Letter {
  int gen = 0;
  bool internal = false;
  int exp = 1;
};
using Word = std::vector<Letter>;  // read left to right as a matrix product

struct MarkedSurface {
  BoundaryGraph graph;
  std::vector<int> int_src, int_tgt;  // internal generators
  std::vector<Word> relations;
  std::vector<std::string> edge_names;
  int n_internal() const { return static_cast<int>(int_src.size()); }
  int euler() const;
};

// throws std::invalid_argument describing the first violated invariant
void validate(const MarkedSurface& s);

// edge k (0-based, named e{k+1}) runs from vertex k-1 to vertex k; relation e_n ... e_1
MarkedSurface new_polygon(int n);

struct NondegeneracyReport {
  bool pass = true;
  std::string diagnostics;
};
NondegeneracyReport check_gluing_nondegenerate(const BoundaryGraph& g, const std::vector<int>& S);

// piece of an edge of a glued surface: an edge of a given copy, traversed forward (+1) or backward (-1)
struct Piece {
  int copy = 0;
  int edge = 0;
  int dir = 1;
  auto operator<=>(const Piece&) const = default;
};

struct GluingMap {
  MarkedSurface base;
  std::vector<int> S;
  MarkedSurface hat;
  std::vector<bool> in_vprime;              // per base vertex
  std::vector<int> i1, i2;                  // base vertex -> hat vertex, -1 off V'
  std::vector<int> j1, j2;                  // base edge -> hat edge, -1 on S; equal on merged edges
  std::vector<bool> merged;                 // per base edge
  std::vector<std::vector<Piece>> pieces;   // per hat edge
  std::vector<bool> hat_from_copy1;         // per hat edge: non-merged copy-1 edge (reversed orientation)
  std::vector<int> hat_origin;              // per hat edge: base edge it comes from
};
GluingMap glue_double(const MarkedSurface& s, const std::vector<int>& S);

struct Decoration {
  std::vector<HSpec> edges;
  std::vector<Subspace> vertices;  // Lagrangian subalgebras of the double
};
// checks every vertex subspace is a Lagrangian subalgebra; returns the first failure or empty
std::string decoration_problem(const Decoration& d);
Decoration symmetric_decoration(const Decoration& d, const GluingMap& gm);
Decoration base_decoration(const Decoration& d, const GluingMap& gm);

// pieces of a four-copy surface carry (S-copy, T-copy, base edge, direction)
using QuadPiece = std::tuple<int, int, int, int>;
struct DoubleGlue {
  GluingMap s_hat, st;  // glue along S, then along the lift of T
  GluingMap t_hat, ts;  // glue along T, then along the lift of S
  std::vector<int> lift_T, lift_S;
  std::vector<std::vector<std::vector<QuadPiece>>> cycles_st, cycles_ts;  // canonical forms
  bool isomorphic = false;
};
std::vector<int> lift_edges(const GluingMap& gm, const std::vector<int>& T);
DoubleGlue double_glue(const MarkedSurface& s, const std::vector<int>& S, const std::vector<int>& T);
// canonical form of a glued surface's boundary cycles, pieces expressed in base edges
std::vector<std::vector<std::vector<Piece>>> canonical_cycles(const GluingMap& gm);

std::string surface_to_json(const MarkedSurface& s);
MarkedSurface surface_from_json(const std::string& text);

}  // namespace modlab
