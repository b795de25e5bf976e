#pragma once

#include "nambu/fields.hpp"
#include "nambu/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nambu {

/// Partial almost r-Nambu-Poisson structure on a box in R^n: an order-r
/// multivector field Lambda together with a constant-coefficient cotangent
/// restriction (the rows of B span the modeled subbundle fibre; identity for
/// the non-partial case).  The anchor P(a_1..a_{r-1}) = interior product of
/// a_1^...^a_{r-1} into Lambda exists by representation.
///
/// Bracket convention: {f_1,..,f_r} = Lambda(df_1,..,df_r), so the last slot
/// is the bracket's derivation slot and <dg, P(df_1..df_{r-1})> places dg in
/// the final position.
class NambuStructure {
public:
    NambuStructure(int n, int r, MultiVectorField lambda, Box box);
    NambuStructure(int n, int r, MultiVectorField lambda, RatMat restriction, Box box);

    int n() const { return n_; }
    int order() const { return r_; }
    const MultiVectorField& tensor() const { return lambda_; }
    const RatMat& restriction() const { return restriction_; }
    int restriction_rank() const { return static_cast<int>(restriction_.size()); }
    bool is_full() const;  // restriction is all of the cotangent space
    const Box& box() const { return box_; }
    bool is_exact() const { return lambda_.is_exact(); }

    /// Basis of the annihilator of the restriction span (nullspace of B).
    const std::vector<std::vector<Rat>>& restriction_annihilator() const { return annihilator_; }

private:
    int n_;
    int r_;
    MultiVectorField lambda_;
    RatMat restriction_;
    std::vector<std::vector<Rat>> annihilator_;
    Box box_;
};

struct PointClass {
    std::vector<double> point;
    int rank = 0;
    bool regular = false;
    bool rank_bound_violated = false;  // regular with rank < r, which the
                                       // range dimension bound forbids
};

/// Whether df(x) stays inside the restriction span for all x.  Exact and
/// complete for polynomials; numeric fields get a sampled decision (flagged
/// approximate via the `approximate` out-parameter).
bool admissible_fn_check(const NambuStructure& S, const ScalarField& f,
                         bool* approximate = nullptr, int samples = 64,
                         std::uint64_t seed = 0x5eed);

/// Checks that a constant covector lies in the restriction span.
bool covector_admissible(const NambuStructure& S, const std::vector<Rat>& alpha);

/// Checks that an (r-1)-covector lies in the (r-1)-st exterior power of the
/// restriction span.
bool multicovector_admissible(const NambuStructure& S, const RatTensor& omega);

/// Anchor applied to a single (r-1)-covector at a point: the tangent vector
/// Lambda-sharp(omega)(x).  Throws RestrictionViolation when omega is not in
/// the restriction's exterior power.
std::vector<Rat> sharp(const NambuStructure& S, const RatTensor& omega,
                       const std::vector<Rat>& x);
std::vector<double> sharp(const NambuStructure& S, const NumTensor& omega,
                          const std::vector<double>& x);

/// {f_1,..,f_{r-1},g} at a point (any backend).
double bracket_eval(const NambuStructure& S, const std::vector<ScalarField>& fs,
                    const ScalarField& g, const std::vector<double>& x);
Rat bracket_eval_exact(const NambuStructure& S, const std::vector<ScalarField>& fs,
                       const ScalarField& g, const std::vector<Rat>& x);

/// {f_1,..,f_r} as a scalar field (exact mode).
ScalarField bracket_field(const NambuStructure& S, const std::vector<ScalarField>& fs);

/// Hamiltonian vector field of (f_1,..,f_{r-1}).
VectorField hamiltonian_field(const NambuStructure& S, const std::vector<ScalarField>& fs);

/// Sharp as a field: the vector field Lambda-sharp(alpha) for an (r-1)-form.
VectorField sharp_field(const NambuStructure& S, const FormField& alpha);

/// Fixes constant covectors in the leading slots, producing the order-k
/// structure with tensor i_{beta_1^...^beta_{r-k}} Lambda.  Fixing all r
/// slots (k = 0) is an arity error; the k = 1 case is a plain vector field
/// and lives in fixed_slot_field.
NambuStructure fixed_slot_anchor(const NambuStructure& S,
                                 const std::vector<std::vector<Rat>>& betas);

/// The k = 1 contraction: all but one slot fixed.
VectorField fixed_slot_field(const NambuStructure& S,
                             const std::vector<std::vector<Rat>>& betas);

/// Numerical rank of the anchor range at x over all basis (r-1)-covectors of
/// the restriction span; Regular iff rank > 0.
PointClass classify_point(const NambuStructure& S, const std::vector<double>& x,
                          double svd_rel_tol = 1e-10);

/// The matrix whose columns are sharp images of all increasing (r-1)-fold
/// wedges of restriction rows, evaluated at x.  Exposed for the verifiers.
Mat anchor_range_matrix(const NambuStructure& S, const std::vector<double>& x);

}  // namespace nambu
