#pragma once

#include "nambu/report.hpp"
#include "nambu/structure.hpp"

#include <functional>

namespace nambu {

/// Frame data at a regular point: admissible linear functions f_1..f_r with
/// nonzero bracket at the center, and the signed Hamiltonian fields X_i of
/// the complementary (r-1)-tuples.  By construction <df_j, X_i> = 0 for
/// j != i identically, and after normalization the full bracket and the
/// frame determinant agree (and equal 1) at the center, exactly.
struct CharacteristicFrame {
    std::vector<ScalarField> functions;
    std::vector<VectorField> fields;
    std::vector<int> pivot_rows;     // restriction rows backing the functions
    Rat center_bracket;              // bracket of the functions at the center (post-scale)
    Rat center_determinant;          // det <df_i, X_j> at the center
};

CharacteristicFrame characteristic_frame(const NambuStructure& S, const std::vector<Rat>& x);

/// Commuting frame Z_1..Z_r with Z_1 ^ ... ^ Z_r = Lambda near the center and
/// [Z_i, Z_j] = 0, verified as exact polynomial identities on the cleared
/// denominators.  Components are rational functions (polynomial numerators
/// over powers of the frame pivot determinant), exposed as numeric fields
/// for the chart flows.
struct CommutingFrame {
    std::vector<VectorField> fields;       // numeric-evaluable components
    std::vector<ScalarField> dual_functions;  // affine f-bar with df-bar_i(Z_j)(x) = delta_ij
    std::vector<int> pivot_axes;           // coordinate axes of the pivot block
    std::vector<int> transversal_axes;     // complementary axes (the slice)
    ExactPoly denominator;                 // pivot-block determinant
    std::vector<double> center;
};

CommutingFrame commuting_frame(const NambuStructure& S, const std::vector<Rat>& x);

/// Local diffeomorphism straightening Lambda: the first r target coordinates
/// are leaf coordinates.  Forward and inverse maps are numeric; round-trip
/// accuracy on the validated box is 1e-7.
struct ChartMap {
    std::vector<double> center;                 // source-space center x
    int leaf_dim = 0;                           // r
    Box chart_box;                              // (t, s) coordinates around 0
    std::function<std::vector<double>(const std::vector<double>&)> inverse;  // (t,s) -> M
    std::function<std::vector<double>(const std::vector<double>&)> forward;  // M -> (t,s)
    Mat jacobian_at_center;                     // of the inverse map
    double condition_number = 0;
};

struct DarbouxOptions {
    double roundtrip_tol = 1e-7;
    double min_box_edge = 1e-4;
    int probe_points = 16;
    std::uint64_t seed = 7;
};

ChartMap darboux_chart(const NambuStructure& S, const std::vector<Rat>& x,
                       const DarbouxOptions& opts = {});

/// Pushes Lambda through the chart at sampled chart points and compares with
/// the constant canonical tensor; pass iff the max coefficient deviation
/// stays below tol.
CheckReport verify_chart(const NambuStructure& S, const ChartMap& chart, int samples = 32,
                         double tol = 1e-6, std::uint64_t seed = 11);

}  // namespace nambu
