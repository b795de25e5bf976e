#pragma once

#include "nambu/report.hpp"
#include "nambu/structure.hpp"

#include <functional>
#include <optional>

namespace nambu {

enum class FamilyKind { Coords, Quad, Full };

/// Slot-function family for the identity batteries: the linear forms spanned
/// by the restriction rows, their pairwise products, and (Full) seeded random
/// quadratics in those forms.  The first `basis_count` members are a basis of
/// the admissible quadratic space; the random members lie in its span, so an
/// exact pass on the basis extends to them by multilinearity of the residual.
struct TestFamily {
    std::vector<ScalarField> members;
    std::vector<std::string> labels;
    int basis_count = 0;
};

TestFamily build_test_family(const NambuStructure& S, FamilyKind kind, std::uint64_t seed);

struct CheckOptions {
    FamilyKind family = FamilyKind::Full;
    std::uint64_t seed = 2024;
    int samples = 64;              // sample points in numeric mode
    int sampled_assignments = 512; // assignment subsample in numeric mode
    double tol = 1e-9;
    int threads = 0;               // 0 = hardware concurrency
};

/// Leibniz rule in the last slot over a generating family.  The bracket can
/// be overridden (negative-control hook for tests).
using BracketFn =
    std::function<ScalarField(const NambuStructure&, const std::vector<ScalarField>&)>;

CheckReport check_leibniz(const NambuStructure& S, const CheckOptions& opts = {},
                          const BracketFn& bracket = {});

/// Fundamental identity, literal form: residuals of
///   {f_1..f_{r-1},{g_1..g_r}} - sum_i {g_1,..,{f_1..f_{r-1},g_i},..,g_r}
/// over every slot assignment from the family (exact mode exhausts the basis;
/// random members are covered by linearity once the basis passes).
CheckReport check_filippov_direct(const NambuStructure& S, const CheckOptions& opts = {});

/// Same criterion through the Lie-derivative route: L_{X_f}Lambda evaluated
/// on family differentials, assembled from Hamiltonian fields and the
/// directional-derivative pipeline rather than bracket contractions.
CheckReport check_lie_derivative_criterion(const NambuStructure& S,
                                           const CheckOptions& opts = {});

/// Geometric route, sampled: pointwise decomposability plus rank-r
/// involutivity of the characteristic distribution at regular points.
/// Unsupported for r = 2 (the decomposability theorem needs r >= 3).
CheckReport check_filippov_structural(const NambuStructure& S, const CheckOptions& opts = {});

/// Commutator identity for Hamiltonian fields:
///   [X_f, X_g] = sum_i X_{g_1,..,dg_i(X_f),..,g_{r-1}}  as vector fields.
CheckReport commutator_identity_check(const NambuStructure& S,
                                      const std::vector<ScalarField>& fs,
                                      const std::vector<ScalarField>& gs);

/// All three Filippov verifiers (structural only when r >= 3).
std::vector<CheckReport> filippov_battery(const NambuStructure& S,
                                          const CheckOptions& opts = {});

}  // namespace nambu
