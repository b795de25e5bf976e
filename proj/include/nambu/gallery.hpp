#pragma once

#include "nambu/structure.hpp"

#include <optional>
#include <string>

namespace nambu {

/// Constant decomposable tensor d/dx_1 ^ ... ^ d/dx_r on R^n.
NambuStructure canonical_structure(int n, int r, double box_half = 2.0);

/// Lambda = h * d/dx_1 ^ ... ^ d/dx_r for an exact scalar h; the singular
/// locus is the zero set of h.
NambuStructure scaled_structure(int n, int r, const ScalarField& h, double box_half = 2.0);

/// Truncated sequence-space 3-tensor: Lambda = sum over increasing triples
/// within I of coefficients 1/(i*j*k), with the restriction projecting onto
/// the I-coordinates.  Returns the exact coefficient-mass certificate
/// (sum |coeff| and its bound sum over I of 1/i^3).
struct L1Truncated {
    NambuStructure structure;
    Rat coefficient_sum;
    Rat bound;
};

L1Truncated l1_truncated(int N, const std::vector<int>& index_set, double box_half = 2.0);

/// Truncated canonical weak-symplectic bracket on R^{2N}: coordinates
/// (q_1..q_N, p_1..p_N) and Lambda = sum_k d/dq_k ^ d/dp_k.
NambuStructure sequence_poisson(int N, double box_half = 2.0);

/// A gallery item with its expected verdicts, for census-style batteries.
struct GalleryItem {
    std::string name;
    NambuStructure structure;
    bool expect_filippov = true;
    /// Factor fields of Lambda when a natural global factorization exists
    /// (used by the singular-point involutivity witness).
    std::optional<std::vector<VectorField>> frame;
};

/// The census used by the verification batteries: canonical (3,3), (6,3),
/// (2,2); scaled h = x1 and h = x1^2+1; l1 with I = {1,2,3} and {1..6};
/// sequence Poisson N = 2; Heisenberg full algebra; Heisenberg x R on a
/// non-subalgebra span.
std::vector<GalleryItem> gallery_census();

/// Looks up a single census item by name.
GalleryItem gallery_item(const std::string& name);
std::vector<std::string> gallery_names();

}  // namespace nambu
