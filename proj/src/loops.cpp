#include "nambu/loops.hpp"

#include "nambu/checks.hpp"

#include <cmath>

namespace nambu {

bool DiscretizedLoop::is_constant(double tol) const {
    for (const auto& s : samples)
        for (std::size_t i = 0; i < s.size(); ++i)
            if (std::abs(s[i] - samples[0][i]) > tol) return false;
    return true;
}

DiscretizedLoop sample_loop(const std::function<std::vector<double>(double)>& curve, int N) {
    if (N < 4) throw StructuralError("sample_loop: need at least 4 samples");
    DiscretizedLoop loop;
    loop.samples.reserve(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k)
        loop.samples.push_back(curve(static_cast<double>(k) / N));
    return loop;
}

double loop_bracket(const NambuStructure& S, const std::vector<ScalarField>& fs,
                    const DiscretizedLoop& loop) {
    if (static_cast<int>(fs.size()) != S.order())
        throw StructuralError("loop_bracket: expected r slot functions");
    for (const auto& f : fs)
        if (!admissible_fn_check(S, f))
            throw RestrictionViolation("loop_bracket: inadmissible slot function");
    double acc = 0;
    for (const auto& x : loop.samples) {
        if (!S.box().contains(x)) throw DomainError("loop_bracket: loop exits the domain box");
        NumTensor lam = S.tensor().eval(x);
        std::vector<std::vector<double>> grads;
        grads.reserve(fs.size());
        for (const auto& f : fs) grads.push_back(f.jet(x).grad);
        acc += eval_alt(lam, grads);
    }
    return acc / loop.size();
}

LoopClassification classify_loop(const NambuStructure& S, const DiscretizedLoop& loop,
                                 double witness_tol) {
    LoopClassification out;
    if (loop.is_constant()) {
        PointClass pc = classify_point(S, loop.samples[0]);
        if (!pc.regular) {
            out.cls = LoopClass::Singular;
            return out;
        }
    }
    out.cls = LoopClass::Regular;
    // cross-validate with a witness search over the quadratic family
    TestFamily fam = build_test_family(S, FamilyKind::Quad, 1);
    const int r = S.order();
    auto combos = increasing_multiindices(static_cast<int>(fam.members.size()), r);
    for (const auto& combo : combos) {
        std::vector<ScalarField> fs;
        std::vector<std::string> labels;
        for (int i = 0; i < r; ++i) {
            fs.push_back(fam.members[static_cast<std::size_t>(combo[i] - 1)]);
            labels.push_back(fam.labels[static_cast<std::size_t>(combo[i] - 1)]);
        }
        double value = loop_bracket(S, fs, loop);
        if (std::abs(value) > witness_tol) {
            out.witness_slots = std::move(labels);
            out.witness_value = value;
            break;
        }
    }
    return out;
}

}  // namespace nambu
