#include "nambu/algebroid.hpp"

#include "nambu/gallery.hpp"
#include "nambu/rng.hpp"

#include <cmath>
#include <sstream>

namespace nambu {

namespace {

void require_exact_form(const NambuStructure& S, const FormField& alpha) {
    if (alpha.n() != S.n() || alpha.degree() != S.order() - 1 ||
        alpha.variance() != Variance::Covector)
        throw StructuralError("algebroid: expected an (r-1)-form over the structure");
    if (!alpha.is_exact())
        throw UnsupportedModeError("algebroid: numeric-mode coefficients are not supported");
}

std::string poly_preview(const FormField& w) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [I, f] : w.coeffs()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << f.poly().to_string() << ")*d[" << I.to_string() << "]";
        if (os.str().size() > 140) {
            os << " ...";
            break;
        }
    }
    return first ? "0" : os.str();
}

void advisory(CheckReport& rep, const AlgebroidOptions& opts) {
    if (!opts.filippov_passed)
        rep.notes.push_back("structure did not pass the fundamental identity; axioms not guaranteed");
}

}  // namespace

FormField algebroid_bracket(const NambuStructure& S, const FormField& alpha,
                            const FormField& beta, CorrectionConvention conv) {
    require_exact_form(S, alpha);
    require_exact_form(S, beta);
    VectorField xa = sharp_field(S, alpha);
    FormField lie = lie_derivative_form(xa, beta);
    FormField da = d_form(alpha);
    FormField correction(S.n(), S.order() - 1, Variance::Covector);
    if (conv == CorrectionConvention::ScalarContraction) {
        ScalarField pairing = full_contraction(da, S.tensor());
        correction = pairing * beta;
    } else {
        correction = interior_vector(sharp_field(S, beta), da);
    }
    if (S.order() % 2 != 0) correction = Rat(-1) * correction;
    return lie + correction;
}

FormField hagiwara_bracket(const NambuStructure& S, const FormField& alpha,
                           const FormField& beta) {
    require_exact_form(S, alpha);
    require_exact_form(S, beta);
    VectorField xa = sharp_field(S, alpha);
    FormField lie = lie_derivative_form(xa, beta);
    FormField corr = interior_vector(sharp_field(S, beta), d_form(alpha));
    return lie - corr;
}

CheckReport check_exact_forms_identity(const NambuStructure& S,
                                       const std::vector<ScalarField>& fs,
                                       const std::vector<ScalarField>& gs,
                                       const AlgebroidOptions& opts) {
    CheckReport rep;
    rep.name = "algebroid.exact-forms";
    rep.property = "bracket of exact decomposable forms expands slot-wise";
    rep.mode = "exact";
    rep.seed = opts.seed;
    const int r = S.order();
    if (static_cast<int>(fs.size()) != r - 1 || static_cast<int>(gs.size()) != r - 1)
        throw StructuralError("check_exact_forms_identity: slot arity must be r-1");
    auto wedge_of = [&](const std::vector<ScalarField>& hs) {
        FormField acc(S.n(), 0, Variance::Covector);
        acc.set(MultiIndex{}, ScalarField::constant(S.n(), Rat(1)));
        for (const auto& h : hs) acc = wedge(acc, differential(h));
        return acc;
    };
    FormField lhs = algebroid_bracket(S, wedge_of(fs), wedge_of(gs), opts.convention);
    FormField rhs(S.n(), r - 1, Variance::Covector);
    for (int i = 0; i < r - 1; ++i) {
        std::vector<ScalarField> slots = fs;
        slots.push_back(gs[static_cast<std::size_t>(i)]);
        ScalarField inner = bracket_field(S, slots);
        std::vector<ScalarField> replaced = gs;
        replaced[static_cast<std::size_t>(i)] = inner;
        rhs = rhs + wedge_of(replaced);
    }
    FormField residual = lhs - rhs;
    rep.cases = 1;
    if (residual.is_zero()) {
        rep.verdict = Verdict::Pass;
        rep.residual = "0";
    } else {
        rep.verdict = Verdict::Fail;
        rep.residual = poly_preview(residual);
        rep.witness = Witness{"exact-forms identity", {}, "slot-wise expansion mismatch"};
    }
    advisory(rep, opts);
    return rep;
}

CorrectionConvention resolve_correction_convention(std::uint64_t seed) {
    // Exact decomposable forms are closed, so the exact-forms identity alone
    // cannot see the correction term, and at top degree (r = n) the two
    // readings coincide outright.  The arbiter is therefore the module-rule
    // battery on the canonical (4,3) structure, where they differ.
    NambuStructure S = canonical_structure(4, 3);
    std::vector<int> vars{1, 2, 3, 4};
    auto passes = [&](CorrectionConvention conv) {
        AlgebroidOptions opts;
        opts.convention = conv;
        SeededRng local(seed);
        auto rand_form = [&] {
            FormField w(4, 2, Variance::Covector);
            for (const auto& I : increasing_multiindices(4, 2))
                w.add_to(I, ScalarField(4, local.polynomial(4, vars, 2)));
            return w;
        };
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<ScalarField> fs{ScalarField(4, local.polynomial(4, vars, 2)),
                                        ScalarField(4, local.polynomial(4, vars, 2))};
            std::vector<ScalarField> gs{ScalarField(4, local.polynomial(4, vars, 2)),
                                        ScalarField(4, local.polynomial(4, vars, 2))};
            if (!check_exact_forms_identity(S, fs, gs, opts).passed()) return false;
            ScalarField f(4, local.polynomial(4, vars, 2));
            if (!check_module_rules(S, f, rand_form(), rand_form(), opts).passed()) return false;
        }
        return true;
    };
    const bool scalar_ok = passes(CorrectionConvention::ScalarContraction);
    const bool interior_ok = passes(CorrectionConvention::SharpInterior);
    if (scalar_ok == interior_ok)
        throw StructuralError(
            "resolve_correction_convention: the oracle did not single out a reading");
    return scalar_ok ? CorrectionConvention::ScalarContraction
                     : CorrectionConvention::SharpInterior;
}

CheckReport check_anchor_morphism(const NambuStructure& S, const FormField& alpha,
                                  const FormField& beta, const AlgebroidOptions& opts) {
    CheckReport rep;
    rep.name = opts.use_hagiwara ? "algebroid.anchor-morphism.hagiwara"
                                 : "algebroid.anchor-morphism";
    rep.property = "sharp intertwines the form bracket with the field bracket";
    rep.mode = "exact";
    rep.seed = opts.seed;
    FormField br = opts.use_hagiwara ? hagiwara_bracket(S, alpha, beta)
                                     : algebroid_bracket(S, alpha, beta, opts.convention);
    VectorField lhs = sharp_field(S, br);
    VectorField rhs = lie_bracket(sharp_field(S, alpha), sharp_field(S, beta));
    VectorField diff = lhs - rhs;
    rep.cases = 1;
    if (!diff.is_zero()) {
        rep.verdict = Verdict::Fail;
        std::string detail;
        for (int i = 1; i <= S.n(); ++i)
            if (!diff.component(i).is_zero()) {
                detail = "component " + std::to_string(i) + ": " +
                         diff.component(i).poly().to_string();
                break;
            }
        rep.residual = detail.substr(0, 160);
        rep.witness = Witness{"anchor morphism", {}, "field mismatch"};
        advisory(rep, opts);
        return rep;
    }
    // explicit evaluation at sampled singular points, when any exist
    SeededRng rng(opts.seed);
    int singular_found = 0;
    double worst = 0;
    for (int s = 0; s < 64 && singular_found < 8; ++s) {
        std::vector<double> x = rng.point_in(S.box());
        for (int zeroed = -1; zeroed < S.n() && singular_found < 8; ++zeroed) {
            std::vector<double> y = x;
            if (zeroed >= 0) y[static_cast<std::size_t>(zeroed)] = 0.0;
            if (!classify_point(S, y).regular) {
                ++singular_found;
                std::vector<double> lv = lhs.eval(y), rv = rhs.eval(y);
                for (int i = 0; i < S.n(); ++i) {
                    worst = std::max(worst, std::abs(lv[static_cast<std::size_t>(i)]));
                    worst = std::max(worst, std::abs(rv[static_cast<std::size_t>(i)]));
                }
            }
        }
    }
    rep.cases += singular_found;
    if (singular_found > 0) {
        rep.notes.push_back("singular points sampled: " + std::to_string(singular_found));
        if (worst > 1e-12) {
            rep.verdict = Verdict::Fail;
            rep.residual = std::to_string(worst);
            rep.witness = Witness{"anchor morphism at singular points", {}, "nonzero side"};
            advisory(rep, opts);
            return rep;
        }
    }
    rep.verdict = Verdict::Pass;
    rep.residual = "0";
    advisory(rep, opts);
    return rep;
}

CheckReport check_module_rules(const NambuStructure& S, const ScalarField& f,
                               const FormField& alpha, const FormField& beta,
                               const AlgebroidOptions& opts) {
    CheckReport rep;
    rep.name = "algebroid.module-rules";
    rep.property = "function-linearity rules of the form bracket";
    rep.mode = "exact";
    rep.seed = opts.seed;
    VectorField xa = sharp_field(S, alpha);

    FormField lhs1 = algebroid_bracket(S, alpha, f * beta, opts.convention);
    FormField rhs1 = f * algebroid_bracket(S, alpha, beta, opts.convention) +
                     xa.apply(f) * beta;
    FormField res1 = lhs1 - rhs1;

    FormField lhs2 = algebroid_bracket(S, f * alpha, beta, opts.convention);
    FormField rhs2 = f * algebroid_bracket(S, alpha, beta, opts.convention) -
                     interior_vector(xa, wedge(differential(f), beta));
    FormField res2 = lhs2 - rhs2;

    rep.cases = 2;
    if (res1.is_zero() && res2.is_zero()) {
        rep.verdict = Verdict::Pass;
        rep.residual = "0";
    } else {
        rep.verdict = Verdict::Fail;
        rep.residual = poly_preview(res1.is_zero() ? res2 : res1);
        rep.witness = Witness{res1.is_zero() ? "left-slot rule" : "right-slot rule", {},
                              "module rule mismatch"};
    }
    advisory(rep, opts);
    return rep;
}

CheckReport check_leibniz_identity(const NambuStructure& S, const FormField& alpha,
                                   const FormField& beta, const FormField& gamma,
                                   const AlgebroidOptions& opts) {
    CheckReport rep;
    rep.name = opts.use_hagiwara ? "algebroid.leibniz.hagiwara" : "algebroid.leibniz";
    rep.property = "[[a,b],c] = [[a,c],b] + [a,[b,c]]";
    rep.mode = "exact";
    rep.seed = opts.seed;
    auto br = [&](const FormField& a, const FormField& b) {
        return opts.use_hagiwara ? hagiwara_bracket(S, a, b)
                                 : algebroid_bracket(S, a, b, opts.convention);
    };
    FormField residual = br(br(alpha, beta), gamma) - br(br(alpha, gamma), beta) -
                         br(alpha, br(beta, gamma));
    rep.cases = 1;
    if (residual.is_zero()) {
        rep.verdict = Verdict::Pass;
        rep.residual = "0";
    } else {
        rep.verdict = Verdict::Fail;
        rep.residual = poly_preview(residual);
        rep.witness = Witness{"Leibniz identity", {}, "nonzero associator defect"};
        // the left-oriented form [a,[b,c]] = [[a,b],c] + [b,[a,c]] is the
        // robust one below top degree; report whether it survives
        FormField left = br(alpha, br(beta, gamma)) - br(br(alpha, beta), gamma) -
                         br(beta, br(alpha, gamma));
        if (left.is_zero()) rep.notes.push_back("left-oriented identity holds");
    }
    advisory(rep, opts);
    return rep;
}

}  // namespace nambu
