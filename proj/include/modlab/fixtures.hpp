#pragma once

#include "modlab/matgroups.hpp"
#include "modlab/quadlie.hpp"
#include "modlab/surface.hpp"

namespace modlab {

// G = SL(n) × SL(n) as the double of the standard Lie bialgebra: A = G_Δ, B = B*.
// Vertex data lives in the double of Lie(G).
struct ManinTriple {
  MatrixGroup G;     // pair group, block-diagonal
  MatrixAlgebra ga;  // Lie(G) = sl(n) ⊕ sl(n) with B ⊖ B
  AlgPtr d;          // double of Lie(G)
  Mat a, b;          // bases of Lie(A), Lie(B) in Lie(G) coordinates
  Subspace sum(const Mat& first, const Mat& second) const { return direct_sum(d, first, second); }
  Subspace diag() const { return diagonal(d); }
  HSpec A() const { return hs_diagonal(); }
  HSpec B() const { return hs_dual(); }
};
ManinTriple manin_triple(const MatrixGroup& simple);

// a decorated polygon glued along S; vertex data in the double of Lie(G)
struct GluedExample {
  GluingMap gm;
  MatrixGroup G;
  Decoration deco;
};
// triangle glued along e3 into a bigon: H = G, l_v1 = a ⊕ b
GluedExample example_poigr(const MatrixGroup& simple);
// square glued along e4: H = (G, A, B, G), l_v1 = a ⊕ a, l_v2 = a ⊕ b
GluedExample example_poigro0(const MatrixGroup& simple);
// square glued along e4: H = (B, A, B, G), l_v1 = a ⊕ b, l_v2 = b ⊕ a
GluedExample example_dousym(const MatrixGroup& simple);
// SL(2, C), square glued along e3: H2 = B+, l_v1 = b+~, l_v4 = g*
GluedExample example_brucel();

}  // namespace modlab
