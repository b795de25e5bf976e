#pragma once

#include "nambu/report.hpp"
#include "nambu/structure.hpp"

namespace nambu {

/// Reading of the correction term paired with the Lie-derivative part of the
/// bracket on (r-1)-forms.  ScalarContraction multiplies beta by the full
/// pairing of d(alpha) with the tensor; SharpInterior contracts the anchored
/// image of beta into d(alpha).  The scalar reading is the one the anchor
/// morphism identity factors through; resolve_correction_convention arbitrates
/// via the exact-forms identity on the canonical structure.
enum class CorrectionConvention { ScalarContraction, SharpInterior };

/// Bracket on (r-1)-forms over the structure:
///   [alpha, beta] = L_{sharp(alpha)} beta + (-1)^r * correction(alpha, beta).
FormField algebroid_bracket(const NambuStructure& S, const FormField& alpha,
                            const FormField& beta,
                            CorrectionConvention conv = CorrectionConvention::ScalarContraction);

/// Dorfman-style alternative bracket:
///   [[alpha, beta]] = L_{sharp(alpha)} beta - i_{sharp(beta)} d(alpha).
FormField hagiwara_bracket(const NambuStructure& S, const FormField& alpha,
                           const FormField& beta);

/// Picks the correction reading that satisfies the exact-forms identity on
/// the canonical order-3 structure over a seeded suite; exactly one must.
CorrectionConvention resolve_correction_convention(std::uint64_t seed = 2024);

struct AlgebroidOptions {
    CorrectionConvention convention = CorrectionConvention::ScalarContraction;
    bool use_hagiwara = false;   // run the bracket-dependent checks on [[.,.]]
    bool filippov_passed = true; // when false, reports carry an advisory note
    std::uint64_t seed = 2024;
};

/// Anchor morphism: sharp([alpha,beta]) = [sharp(alpha), sharp(beta)],
/// symbolically, plus explicit evaluation at sampled singular points when the
/// singular locus is nonempty.
CheckReport check_anchor_morphism(const NambuStructure& S, const FormField& alpha,
                                  const FormField& beta, const AlgebroidOptions& opts = {});

/// Exact-forms identity: [df_1^..^df_{r-1}, dg_1^..^dg_{r-1}] equals
/// sum_i dg_1 ^ .. ^ d{f_1..f_{r-1}, g_i} ^ .. ^ dg_{r-1}.
CheckReport check_exact_forms_identity(const NambuStructure& S,
                                       const std::vector<ScalarField>& fs,
                                       const std::vector<ScalarField>& gs,
                                       const AlgebroidOptions& opts = {});

/// Module rules: [alpha, f beta] = f [alpha, beta] + df(sharp(alpha)) beta and
/// [f alpha, beta] = f [alpha, beta] - i_{sharp(alpha)}(df ^ beta).
CheckReport check_module_rules(const NambuStructure& S, const ScalarField& f,
                               const FormField& alpha, const FormField& beta,
                               const AlgebroidOptions& opts = {});

/// Leibniz identity [[a,b],c] = [[a,c],b] + [a,[b,c]] for the chosen bracket.
CheckReport check_leibniz_identity(const NambuStructure& S, const FormField& alpha,
                                   const FormField& beta, const FormField& gamma,
                                   const AlgebroidOptions& opts = {});

}  // namespace nambu
