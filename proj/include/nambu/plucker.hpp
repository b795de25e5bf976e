#pragma once

#include "nambu/alt_tensor.hpp"

#include <optional>
#include <vector>

namespace nambu {

/// Decomposability test for a constant degree-r tensor, r >= 3: exhausts the
/// quadratic relations
///   Lambda_{c_1..c_{r-2},a} ^ Lambda_b + Lambda_{c_1..c_{r-2},b} ^ Lambda_a = 0
/// over all basis covector choices.  When the relations hold and the tensor
/// is nonzero, also returns vectors X_1..X_r with X_1 ^ ... ^ X_r = Lambda,
/// built from contractions against the lexicographically first maximal
/// coefficient.
struct PluckerResult {
    bool decomposable = false;
    std::optional<std::vector<std::vector<Rat>>> factors;
};

PluckerResult plucker_check(const RatTensor& lambda);

/// Numeric variant: max relation residual normalized by |Lambda|^2 compared
/// against the tolerance (the relation is quadratic in Lambda).
struct PluckerNumeric {
    bool decomposable = false;
    double normalized_residual = 0;
};

PluckerNumeric plucker_check_numeric(const NumTensor& lambda, double tol = 1e-9);

}  // namespace nambu
