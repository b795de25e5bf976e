#pragma once

#include "nambu/fields.hpp"
#include "nambu/linalg.hpp"
#include "nambu/structure.hpp"

#include <string>
#include <vector>

namespace nambu {

/// Finite-dimensional Lie algebra given by structure constants
/// [a_i, a_j] = sum_k c[i][j][k] a_k, with an optional matrix realization for
/// flow- and translation-based checks.  Antisymmetry and the Jacobi identity
/// of the constants are validated exactly at construction.
class LieAlgebraPresentation {
public:
    LieAlgebraPresentation(int dim, std::vector<std::string> labels);

    /// Sets c^k_{ij} (and its antisymmetric partner) for i < j.
    void set_bracket(int i, int j, const std::vector<std::pair<int, Rat>>& image);

    /// Must be called after all brackets are set; checks Jacobi exactly.
    void validate() const;

    void set_matrices(std::vector<RatMat> matrices);
    bool has_matrices() const { return !matrices_.empty(); }
    const std::vector<RatMat>& matrices() const { return matrices_; }

    int dim() const { return dim_; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// [u, v] through the structure constants, exact.
    std::vector<Rat> bracket(const std::vector<Rat>& u, const std::vector<Rat>& v) const;

    /// ad_xi as a dim x dim matrix of linear polynomials in the exponential
    /// coordinates (xi = sum x_i a_i).
    std::vector<std::vector<ExactPoly>> ad_matrix() const;

private:
    int dim_;
    std::vector<std::string> labels_;
    // c_[i][j][k], fully populated antisymmetric table
    std::vector<std::vector<std::vector<Rat>>> c_;
    std::vector<RatMat> matrices_;
};

/// Whether the span of the given vectors is closed under the bracket
/// (decided by exact linear algebra; the vectors must be independent).
bool subalgebra_check(const LieAlgebraPresentation& L,
                      const std::vector<std::vector<Rat>>& span);

/// Left-invariant structure in exponential coordinates around the identity:
/// the invariant extension of each basis vector is the Bernoulli series
/// ad_x/(1 - exp(-ad_x)) applied to it, truncated at taylor_order; exact
/// (series terminates) for nilpotent algebras, which the result reports.
struct LeftInvariantStructure {
    NambuStructure structure;
    std::vector<VectorField> fields;
    bool exact = false;
    int taylor_order = 0;
};

LeftInvariantStructure left_invariant_structure(const LieAlgebraPresentation& L,
                                                const std::vector<std::vector<Rat>>& h_basis,
                                                double box_half = 0.5, int taylor_order = 4);

/// Chart <-> matrix-group helpers for the realization (doubles).
Mat group_element(const LieAlgebraPresentation& L, const std::vector<double>& x);
std::vector<double> chart_coordinates(const LieAlgebraPresentation& L, const Mat& g);

/// Max coefficient deviation of the push-forward of Lambda under left
/// translation by g (both g and the sample point in chart coordinates).
double left_invariance_residual(const LieAlgebraPresentation& L,
                                const LeftInvariantStructure& lis,
                                const std::vector<double>& g_coords,
                                const std::vector<double>& y_coords);

/// Matrix exponential / logarithm for small dense matrices (series with
/// scaling; the logarithm expects a matrix near the identity).
Mat expm(const Mat& a);
Mat logm(const Mat& a);

/// Heisenberg algebra (dim 3) with its unitriangular matrix realization.
LieAlgebraPresentation heisenberg_algebra();
/// Heisenberg x R (dim 4), realized block-diagonally.
LieAlgebraPresentation heisenberg_r_algebra();

}  // namespace nambu
