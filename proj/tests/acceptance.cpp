// Acceptance battery: one pass/fail line per criterion, nonzero exit when
// any criterion fails.  Each criterion pins its tolerances in code.

#include "nambu/algebroid.hpp"
#include "nambu/checks.hpp"
#include "nambu/gallery.hpp"
#include "nambu/liegroup.hpp"
#include "nambu/loops.hpp"
#include "nambu/normal_form.hpp"
#include "nambu/plucker.hpp"
#include "nambu/rng.hpp"
#include "nambu/towers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace nambu;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

// ---------------------------------------------------------------- criterion 1

Outcome criterion_filippov_census() {
    Outcome out;
    auto t0 = Clock::now();
    CheckOptions opts;
    opts.seed = 2024;
    for (const auto& item : gallery_census()) {
        CheckReport direct = check_filippov_direct(item.structure, opts);
        out.require(direct.mode == "exact", item.name + ": direct check not exact");
        CheckReport ld = check_lie_derivative_criterion(item.structure, opts);
        out.require(direct.verdict == ld.verdict,
                    item.name + ": direct and Lie-derivative verdicts disagree");
        if (item.structure.order() >= 3) {
            CheckReport structural = check_filippov_structural(item.structure, opts);
            out.require(structural.verdict == direct.verdict,
                        item.name + ": structural verdict disagrees");
        }
        const bool expected = item.expect_filippov;
        out.require(direct.passed() == expected, item.name + ": unexpected verdict");
        if (!expected)
            out.require(direct.witness.has_value(), item.name + ": failing check lacks witness");
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    out.require(secs < 60.0, "census exceeded 60 s");
    char buf[64];
    std::snprintf(buf, sizeof buf, "10 structures, %.1f s", secs);
    out.detail = out.ok ? buf : out.detail;
    return out;
}

// ---------------------------------------------------------------- criterion 2

// brute-force decomposability oracle: nonzero Lambda of degree r is
// decomposable iff contracting any basis (r-1)-covector into it wedges back
// to zero against Lambda
bool decomposable_oracle(const RatTensor& lambda) {
    if (lambda.is_zero()) return true;
    for (const auto& K : increasing_multiindices(lambda.n(), lambda.degree() - 1)) {
        RatTensor phi(lambda.n(), lambda.degree() - 1, Variance::Covector);
        phi.set(K, Rat(1));
        if (!wedge(interior(phi, lambda), lambda).is_zero()) return false;
    }
    return true;
}

Outcome criterion_plucker_oracle() {
    Outcome out;
    auto t0 = Clock::now();
    long checked = 0;
    for (int n = 3; n <= 6 && out.ok; ++n) {
        auto idxs = increasing_multiindices(n, 3);
        const int m = static_cast<int>(idxs.size());
        // all supports of size <= 3, coefficients in {-1, +1}
        std::vector<std::vector<int>> supports;
        supports.push_back({});
        for (int a = 0; a < m; ++a) {
            supports.push_back({a});
            for (int b = a + 1; b < m; ++b) {
                supports.push_back({a, b});
                for (int c = b + 1; c < m; ++c) supports.push_back({a, b, c});
            }
        }
        for (const auto& support : supports) {
            const int k = static_cast<int>(support.size());
            for (int mask = 0; mask < (1 << k) && out.ok; ++mask) {
                RatTensor t(n, 3, Variance::Vector);
                for (int e = 0; e < k; ++e)
                    t.set(idxs[static_cast<std::size_t>(support[static_cast<std::size_t>(e)])],
                          (mask >> e) & 1 ? Rat(1) : Rat(-1));
                PluckerResult res = plucker_check(t);  // throws if factorization breaks
                bool oracle = decomposable_oracle(t);
                ++checked;
                out.require(res.decomposable == oracle, "oracle disagreement at n=" +
                                                            std::to_string(n));
                if (res.decomposable && !t.is_zero())
                    out.require(res.factors.has_value(), "missing factorization");
            }
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    out.require(secs < 300.0, "oracle sweep exceeded 5 min");
    if (out.ok) out.detail = std::to_string(checked) + " tensors, exact agreement";
    return out;
}

// ------------------------------------------------------------ criteria 3 & 4

struct ChartCase {
    std::string label;
    NambuStructure S;
    std::vector<Rat> center;
};

std::vector<ChartCase> chart_cases() {
    std::vector<ChartCase> cases;
    cases.push_back({"canonical-3-3 at 0", canonical_structure(3, 3),
                     {Rat(0), Rat(0), Rat(0)}});
    cases.push_back({"scaled x1 at (1,0,0)",
                     scaled_structure(3, 3, ScalarField::coordinate(3, 1)),
                     {Rat(1), Rat(0), Rat(0)}});
    cases.push_back({"scaled x1^2+1 at 0",
                     scaled_structure(3, 3, ScalarField(3, parse_poly("x1^2+1", 3))),
                     {Rat(0), Rat(0), Rat(0)}});
    {
        MultiVectorField lam(4, 3, Variance::Vector);
        lam.set(MultiIndex({1, 2, 3}), ScalarField::coordinate(4, 1));
        cases.push_back({"d1^d2^(x1 d3) on R4 at (1,0,0,0)",
                         NambuStructure(4, 3, std::move(lam), Box::cube(4, 2.0)),
                         {Rat(1), Rat(0), Rat(0), Rat(0)}});
    }
    return cases;
}

Outcome criterion_darboux() {
    Outcome out;
    for (const auto& c : chart_cases()) {
        auto t0 = Clock::now();
        ChartMap chart = darboux_chart(c.S, c.center);
        CheckReport rep = verify_chart(c.S, chart, 32, 1e-6, 11);
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        out.require(rep.passed(), c.label + ": residual " + rep.residual);
        out.require(secs < 30.0, c.label + ": chart exceeded 30 s");
    }
    if (out.ok) out.detail = "4 charts, residual < 1e-6 at 32 points each";
    return out;
}

Outcome criterion_frame_identities() {
    Outcome out;
    for (const auto& c : chart_cases()) {
        CharacteristicFrame fr = characteristic_frame(c.S, c.center);
        const int r = c.S.order();
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                if (i != j)
                    out.require(fr.fields[static_cast<std::size_t>(i)]
                                    .apply(fr.functions[static_cast<std::size_t>(j)])
                                    .is_zero(),
                                c.label + ": orthogonality fails");
        out.require(fr.center_determinant == fr.center_bracket,
                    c.label + ": determinant identity fails at the center");
        out.require(bracket_field(c.S, fr.functions).value_exact(c.center) ==
                        fr.center_determinant,
                    c.label + ": bracket and determinant disagree");
    }
    if (out.ok) out.detail = "orthogonality exact as fields; determinant exact at centers";
    return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion_algebroid() {
    Outcome out;
    auto t0 = Clock::now();
    std::vector<std::pair<std::string, NambuStructure>> structures;
    structures.emplace_back("canonical-3-3", canonical_structure(3, 3));
    structures.emplace_back("scaled-x1", scaled_structure(3, 3, ScalarField::coordinate(3, 1)));
    std::vector<int> vars{1, 2, 3};
    for (const auto& [label, S] : structures) {
        SeededRng rng(2024);
        AlgebroidOptions opts;
        opts.seed = 2024;
        auto rand_form = [&] {
            FormField w(3, 2, Variance::Covector);
            for (const auto& I : increasing_multiindices(3, 2))
                w.add_to(I, ScalarField(3, rng.polynomial(3, vars, 2)));
            return w;
        };
        for (int t = 0; t < 20; ++t) {
            std::vector<ScalarField> fs{ScalarField(3, rng.polynomial(3, vars, 2)),
                                        ScalarField(3, rng.polynomial(3, vars, 2))};
            std::vector<ScalarField> gs{ScalarField(3, rng.polynomial(3, vars, 2)),
                                        ScalarField(3, rng.polynomial(3, vars, 2))};
            out.require(check_exact_forms_identity(S, fs, gs, opts).passed(),
                        label + ": exact-forms identity");
            FormField a = rand_form(), b = rand_form(), c = rand_form();
            CheckReport anchor = check_anchor_morphism(S, a, b, opts);
            out.require(anchor.passed(), label + ": anchor morphism");
            out.require(check_module_rules(S, ScalarField(3, rng.polynomial(3, vars, 2)), a, b,
                                           opts)
                            .passed(),
                        label + ": module rules");
            out.require(check_leibniz_identity(S, a, b, c, opts).passed(),
                        label + ": Leibniz identity");
            AlgebroidOptions hag = opts;
            hag.use_hagiwara = true;
            out.require(check_leibniz_identity(S, a, b, c, hag).passed(),
                        label + ": Hagiwara Leibniz identity");
            out.require(check_anchor_morphism(S, a, b, hag).passed(),
                        label + ": Hagiwara anchor morphism");
        }
        if (label == "scaled-x1") {
            // the singular locus is nonempty and must actually get sampled
            SeededRng rng2(7);
            FormField a = rand_form(), b = rand_form();
            CheckReport anchor = check_anchor_morphism(S, a, b, opts);
            bool sampled = false;
            for (const auto& note : anchor.notes)
                if (note.find("singular points sampled") != std::string::npos) sampled = true;
            out.require(sampled, "singular locus was not sampled");
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    out.require(secs < 120.0, "axiom battery exceeded 2 min");
    if (out.ok) out.detail = "20 seeded tuples per structure, residuals exactly zero";
    return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome criterion_singular_witness() {
    Outcome out;
    GalleryItem item = gallery_item("scaled-x1");
    const NambuStructure& S = item.structure;
    out.require(item.frame.has_value(), "gallery frame missing");
    if (!item.frame) return out;
    const auto& frame = *item.frame;  // d1, d2, x1*d3

    VectorField bracket13 = lie_bracket(frame[0], frame[2]);
    out.require(bracket13 == VectorField::basis(3, 3), "[d1, x1 d3] != d3");

    // rank jump at x1 = 0, certified by exact elimination
    std::vector<Rat> x{Rat(0), Rat(1, 2), Rat(-1, 3)};
    RatMat values;
    for (const auto& X : frame) {
        std::vector<Rat> v;
        for (int i = 1; i <= 3; ++i) v.push_back(X.component(i).value_exact(x));
        values.push_back(std::move(v));
    }
    out.require(rational_rank(values) == 2, "frame rank at the hypersurface is not 2");
    {
        RatMat extended = values;
        std::vector<Rat> v;
        for (int i = 1; i <= 3; ++i) v.push_back(bracket13.component(i).value_exact(x));
        extended.push_back(std::move(v));
        out.require(rational_rank(extended) == 3, "bracket does not leave the span");
    }

    CheckOptions opts;
    opts.seed = 2024;
    out.require(check_filippov_direct(S, opts).passed(),
                "fundamental identity unexpectedly fails");
    if (out.ok)
        out.detail = "involutivity fails on the hypersurface while the identity holds";
    return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion_lie_group() {
    Outcome out;
    auto t0 = Clock::now();
    auto L = heisenberg_r_algebra();
    CheckOptions opts;
    opts.seed = 2024;
    int subalgebras = 0, rejected = 0;
    for (const auto& combo : increasing_multiindices(4, 3)) {
        std::vector<std::vector<Rat>> span;
        for (int i = 0; i < 3; ++i) {
            std::vector<Rat> v(4, Rat(0));
            v[static_cast<std::size_t>(combo[i] - 1)] = Rat(1);
            span.push_back(std::move(v));
        }
        const bool closed = subalgebra_check(L, span);
        auto lis = left_invariant_structure(L, span);
        out.require(lis.exact, "nilpotent series did not terminate");
        CheckReport fi = check_filippov_direct(lis.structure, opts);
        out.require(fi.passed() == closed,
                    "correspondence fails for the span {" + combo.to_string() + "}");
        if (closed) {
            ++subalgebras;
        } else {
            ++rejected;
            out.require(fi.witness.has_value(), "failing identity lacks a witness");
        }
    }
    out.require(subalgebras == 3 && rejected == 1, "unexpected subspace census");
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    out.require(secs < 120.0, "correspondence sweep exceeded 2 min");
    if (out.ok) out.detail = "all 4 coordinate 3-subspaces, both directions exact";
    return out;
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion_loops() {
    Outcome out;
    NambuStructure S = canonical_structure(3, 3);
    NambuStructure scaled = scaled_structure(3, 3, ScalarField::coordinate(3, 1));
    auto coords = [&](int i) { return ScalarField::coordinate(3, i); };

    // constant loops match pointwise brackets to 1e-12
    SeededRng rng(2024);
    std::vector<int> vars{1, 2, 3};
    for (int t = 0; t < 10; ++t) {
        std::vector<double> pt = rng.point_in(S.box());
        std::vector<ScalarField> fs{ScalarField(3, rng.polynomial(3, vars, 2)),
                                    ScalarField(3, rng.polynomial(3, vars, 2)),
                                    ScalarField(3, rng.polynomial(3, vars, 2))};
        DiscretizedLoop constant = sample_loop([&](double) { return pt; }, 16);
        std::vector<ScalarField> head(fs.begin(), fs.end() - 1);
        double direct = bracket_eval(S, head, fs.back(), pt);
        out.require(std::abs(loop_bracket(S, fs, constant) - direct) <= 1e-12,
                    "constant loop deviates from the pointwise bracket");
    }

    // convergence slope on a smooth, non-bandlimited loop
    {
        std::vector<ScalarField> fs{ScalarField(3, parse_poly("1/2*x1^2", 3)), coords(2),
                                    coords(3)};
        auto curve = [](double t) {
            double rho = 0.4 * std::exp(std::cos(2 * M_PI * t)) / std::exp(1.0);
            return std::vector<double>{rho * std::cos(2 * M_PI * t),
                                       rho * std::sin(2 * M_PI * t), 0.3};
        };
        std::vector<int> ns{8, 16, 32, 64};
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int N : ns) {
            double change = std::abs(loop_bracket(S, fs, sample_loop(curve, 2 * N)) -
                                     loop_bracket(S, fs, sample_loop(curve, N))) +
                            1e-18;
            double lx = std::log(static_cast<double>(N)), ly = std::log(change);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
        out.require(slope <= -1.9, "convergence slope " + std::to_string(-slope) + " < 1.9");
    }

    // the three classification examples
    DiscretizedLoop crossing = sample_loop(
        [](double t) {
            return std::vector<double>{std::cos(2 * M_PI * t), std::sin(2 * M_PI * t), 0.0};
        },
        64);
    LoopClassification c1 = classify_loop(scaled, crossing);
    out.require(c1.cls == LoopClass::Regular && c1.witness_slots.has_value(),
                "crossing loop misclassified");
    LoopClassification c2 = classify_loop(
        scaled, sample_loop([](double) { return std::vector<double>{1, 0, 0}; }, 8));
    out.require(c2.cls == LoopClass::Regular, "regular constant loop misclassified");
    LoopClassification c3 = classify_loop(
        scaled, sample_loop([](double) { return std::vector<double>{0, 0, 0}; }, 8));
    out.require(c3.cls == LoopClass::Singular, "singular constant loop misclassified");

    if (out.ok) out.detail = "pointwise match 1e-12; slope >= 1.9; classifications correct";
    return out;
}

// ---------------------------------------------------------------- criterion 9

Outcome criterion_towers() {
    Outcome out;
    auto t0 = Clock::now();

    TowerSpec canon = canonical_projective_tower(4);
    TowerSpec scaled = scaled_projective_tower(4);
    TowerSpec direct = squared_coefficient_direct_tower(4);
    out.require(check_projective_compat(canon).passed(), "canonical tower compat");
    out.require(check_projective_compat(scaled).passed(), "scaled tower compat");
    out.require(check_direct_compat(direct).passed(), "direct tower compat");

    SeededRng rng(2024);
    for (int t = 0; t < 200; ++t) {
        std::vector<Rat> top = rng.rational_point_in(canon.level(4).box());
        ProjectiveClassification c = classify_tower_point_projective(canon, projective_point(canon, top));
        out.require(!c.mixed, "mixed classification on the canonical tower");
        std::vector<Rat> stop = rng.rational_point_in(scaled.level(4).box());
        if (t % 3 == 0) stop[0] = Rat(0);
        ProjectiveClassification cs =
            classify_tower_point_projective(scaled, projective_point(scaled, stop));
        out.require(!cs.mixed, "mixed classification on the scaled tower");
        int entry = static_cast<int>(rng.uniform_int(1, direct.depth()));
        std::vector<Rat> x = rng.rational_point_in(direct.level(entry).box());
        if (t % 4 == 0)
            for (std::size_t i = 3; i < x.size(); ++i) x[i] = Rat(0);
        DirectClassification cd = classify_tower_point_direct(direct, direct_point(direct, x, entry));
        out.require(cd.monotone, "regularity regressed on the direct tower");
    }

    // pull-back level independence, exactly (throws on any mismatch)
    std::vector<int> vars{1, 2, 3};
    for (int t = 0; t < 20; ++t) {
        TowerPoint p = projective_point(canon, rng.rational_point_in(canon.level(4).box()));
        std::vector<ScalarField> gs;
        for (int i = 0; i < 3; ++i) gs.emplace_back(3, rng.polynomial(3, vars, 2));
        try {
            (void)limit_bracket_eval(canon, 1, gs, p);
        } catch (const StructuralError&) {
            out.require(false, "limit bracket depends on the pull-back level");
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    out.require(secs < 120.0, "tower battery exceeded 2 min");
    if (out.ok) out.detail = "600 tower points, stratification and limits consistent";
    return out;
}

// --------------------------------------------------------------- criterion 10

Outcome criterion_determinism() {
    Outcome out;
#ifndef NAMBU_CLI_PATH
    out.require(false, "CLI path not configured");
    return out;
#else
    const std::string cli = NAMBU_CLI_PATH;
    const std::string specs = NAMBU_SPEC_DIR;
    auto run_stream = [&](const std::string& outfile) {
        std::string cmd;
        cmd += cli + " --seed 424242 check " + specs + "/l1-1to6.json > " + outfile + " 2>&1 && ";
        cmd += cli + " --seed 424242 check " + specs + "/canonical-3.json >> " + outfile + " && ";
        cmd += cli + " --seed 424242 check " + specs + "/heisenberg-r-nonsub.json >> " + outfile + " && ";
        cmd += cli + " --seed 424242 algebroid " + specs + "/scaled-x1.json --suite 5 >> " + outfile + " && ";
        cmd += cli + " --seed 424242 darboux " + specs + "/scaled-x1.json --point 1,0,0 --grid 4 >> " + outfile + " && ";
        cmd += cli + " --seed 424242 tower " + specs + "/tower-projective.json --points 60 >> " + outfile;
        return std::system(cmd.c_str());
    };
    int rc1 = run_stream("/tmp/nambu_stream_1.txt");
    int rc2 = run_stream("/tmp/nambu_stream_2.txt");
    out.require(rc1 == 0 && rc2 == 0, "CLI runs failed");
    std::ifstream f1("/tmp/nambu_stream_1.txt"), f2("/tmp/nambu_stream_2.txt");
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    out.require(s1.str() == s2.str(), "report streams differ between runs");
    out.require(!s1.str().empty(), "empty report stream");

    // witness replay round trip on a failing battery
    {
        std::string cmd = cli + " --seed 424242 --witness-out /tmp/nambu_witness.json check " +
                          specs + "/l1-1to6.json > /dev/null";
        int wrc = std::system(cmd.c_str());
        out.require(wrc == 0, "witness-producing run failed");
        std::string replay = cli + " --seed 424242 replay /tmp/nambu_witness.json > /tmp/nambu_replay.txt";
        int rrc = std::system(replay.c_str());
        out.require(rrc == 0, "witness replay failed to reproduce");
    }
    if (out.ok) out.detail = "byte-identical streams; witnesses replay";
    return out;
#endif
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* label;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> entries = {
        {1, "triple-verifier agreement on the gallery census", criterion_filippov_census},
        {2, "decomposability test agrees with the brute-force oracle", criterion_plucker_oracle},
        {3, "straightening charts reproduce the constant tensor", criterion_darboux},
        {4, "frame orthogonality and determinant identities, exact", criterion_frame_identities},
        {5, "form-bracket axiom battery with exact zero residuals", criterion_algebroid},
        {6, "singular involutivity witness with the identity intact", criterion_singular_witness},
        {7, "subalgebra correspondence over all coordinate 3-subspaces", criterion_lie_group},
        {8, "loop quadrature accuracy, convergence and classification", criterion_loops},
        {9, "tower classification and limit brackets", criterion_towers},
        {10, "deterministic report streams and witness replay", criterion_determinism},
    };
    int failures = 0;
    for (const auto& e : entries) {
        auto t0 = Clock::now();
        Outcome out;
        try {
            out = e.run();
        } catch (const std::exception& ex) {
            out.ok = false;
            out.detail = std::string("exception: ") + ex.what();
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        std::printf("criterion %2d: %s  (%.1fs)  %s%s%s\n", e.id, out.ok ? "PASS" : "FAIL", secs,
                    e.label, out.detail.empty() ? "" : " — ", out.detail.c_str());
        std::fflush(stdout);
        if (!out.ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
