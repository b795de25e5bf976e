#pragma once

#include "nambu/structure.hpp"

#include <functional>
#include <optional>

namespace nambu {

/// Uniformly sampled closed curve: samples[k] = curve(k/N), index arithmetic
/// mod N, trapezoidal weights 1/N.
struct DiscretizedLoop {
    std::vector<std::vector<double>> samples;

    int size() const { return static_cast<int>(samples.size()); }
    bool is_constant(double tol = 1e-12) const;
};

DiscretizedLoop sample_loop(const std::function<std::vector<double>(double)>& curve, int N);

/// Quadrature of the loop-space bracket of the induced cylinder functionals:
/// (1/N) sum_k Lambda_{gamma(t_k)}(df_1,..,df_r).
double loop_bracket(const NambuStructure& S, const std::vector<ScalarField>& fs,
                    const DiscretizedLoop& loop);

enum class LoopClass { Regular, Singular };

struct LoopClassification {
    LoopClass cls = LoopClass::Regular;
    /// For regular loops: a slot tuple from the quadratic family with a
    /// nonzero bracket, when the cross-validating search finds one.
    std::optional<std::vector<std::string>> witness_slots;
    double witness_value = 0;
};

/// Singular iff the loop is constant and its value is a singular point;
/// regular classifications are cross-validated by searching the polynomial
/// test family for a nonzero bracket.
LoopClassification classify_loop(const NambuStructure& S, const DiscretizedLoop& loop,
                                 double witness_tol = 1e-9);

}  // namespace nambu
