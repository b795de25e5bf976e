#include "nambu/checks.hpp"

#include "nambu/linalg.hpp"
#include "nambu/plucker.hpp"
#include "nambu/rng.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <map>
#include <sstream>
#include <thread>

namespace nambu {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int thread_count(const CheckOptions& opts) {
    if (opts.threads > 0) return opts.threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string truncate(std::string s, std::size_t limit = 160) {
    if (s.size() > limit) {
        s.resize(limit);
        s += "...";
    }
    return s;
}

}  // namespace

TestFamily build_test_family(const NambuStructure& S, FamilyKind kind, std::uint64_t seed) {
    TestFamily fam;
    const int n = S.n();
    const int m = S.restriction_rank();
    // linear forms spanned by the restriction rows
    std::vector<ScalarField> linear;
    for (int k = 0; k < m; ++k) {
        ExactPoly p(n);
        bool is_coordinate = false;
        int coord = 0;
        const auto& row = S.restriction()[static_cast<std::size_t>(k)];
        int nonzero = 0;
        for (int i = 1; i <= n; ++i) {
            const Rat& c = row[static_cast<std::size_t>(i - 1)];
            if (c.is_zero()) continue;
            ++nonzero;
            coord = i;
            p += c * ExactPoly::variable(n, i);
        }
        is_coordinate = nonzero == 1 && row[static_cast<std::size_t>(coord - 1)] == 1;
        linear.emplace_back(n, std::move(p));
        std::ostringstream label;
        if (is_coordinate)
            label << "x" << coord;
        else
            label << "b" << (k + 1);
        fam.labels.push_back(label.str());
        fam.members.push_back(linear.back());
    }
    if (kind != FamilyKind::Coords) {
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                fam.members.push_back(linear[static_cast<std::size_t>(i)] *
                                      linear[static_cast<std::size_t>(j)]);
                std::ostringstream label;
                label << fam.labels[static_cast<std::size_t>(i)] << "*"
                      << fam.labels[static_cast<std::size_t>(j)];
                fam.labels.push_back(label.str());
            }
        }
    }
    fam.basis_count = static_cast<int>(fam.members.size());
    if (kind == FamilyKind::Full) {
        SeededRng rng(seed);
        for (int q = 0; q < 8; ++q) {
            // random quadratic in the admissible linear forms
            ScalarField acc = ScalarField::constant(n, Rat(0));
            for (int i = 0; i < m; ++i) {
                Rat ci(rng.uniform_int(-3, 3), 2);
                if (!ci.is_zero()) acc = acc + ci * linear[static_cast<std::size_t>(i)];
                for (int j = i; j < m; ++j) {
                    Rat cij(rng.uniform_int(-2, 2), 2);
                    if (!cij.is_zero())
                        acc = acc + cij * (linear[static_cast<std::size_t>(i)] *
                                           linear[static_cast<std::size_t>(j)]);
                }
            }
            fam.members.push_back(std::move(acc));
            fam.labels.push_back("q" + std::to_string(q + 1));
        }
    }
    return fam;
}

namespace {

// ---------- exact-mode machinery ----------

struct LambdaEntries {
    std::vector<std::pair<MultiIndex, const ExactPoly*>> items;
    explicit LambdaEntries(const MultiVectorField& lam) {
        for (const auto& [I, f] : lam.coeffs()) items.emplace_back(I, &f.poly());
    }
};

const ExactPoly* form_coeff(const FormField& w, const MultiIndex& I) {
    auto it = w.coeffs().find(I);
    return it == w.coeffs().end() ? nullptr : &it->second.poly();
}

// <Lambda, A ^ B> with deg A = r-1, deg B = 1, accumulated over the support
// of Lambda only.
ExactPoly contract_split(int n, const LambdaEntries& lam, const FormField& a,
                         const FormField& b) {
    ExactPoly acc(n);
    for (const auto& [I, lp] : lam.items) {
        for (int p = 0; p < I.degree(); ++p) {
            const int k = I[p];
            const ExactPoly* bk = form_coeff(b, MultiIndex({k}));
            if (!bk || bk->is_zero()) continue;
            auto split = split_index(I, MultiIndex({k}));
            const ExactPoly* aj = form_coeff(a, split.rest);
            if (!aj || aj->is_zero()) continue;
            // e_{I\k} ^ e_k = sign * e_I
            int sign = merge_indices(split.rest, MultiIndex({k})).sign;
            ExactPoly term = (*aj) * (*bk);
            term = term * (*lp);
            if (sign < 0) term = -term;
            acc += term;
        }
    }
    return acc;
}

// determinant of a k x k matrix of polynomial pointers (nullptr = zero)
ExactPoly det_poly(int n, const std::vector<std::vector<const ExactPoly*>>& m,
                   std::vector<int>& cols, int row) {
    const int k = static_cast<int>(m.size());
    if (row == k) return ExactPoly::constant(n, Rat(1));
    ExactPoly acc(n);
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
        int col = cols[ci];
        if (col < 0) continue;
        const ExactPoly* entry = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
        if (!entry || entry->is_zero()) continue;
        cols[ci] = -1;
        ExactPoly sub = det_poly(n, m, cols, row + 1);
        cols[ci] = col;
        int active_before = 0;
        for (std::size_t cj = 0; cj < ci; ++cj)
            if (cols[cj] >= 0) ++active_before;
        ExactPoly term = (*entry) * sub;
        acc += active_before % 2 == 0 ? term : -term;
    }
    return acc;
}

// slot-ordered evaluation Lambda(w_1,..,w_r) for degree-1 forms w_a
ExactPoly eval_on_forms(int n, const LambdaEntries& lam, const std::vector<const FormField*>& ws) {
    const int r = static_cast<int>(ws.size());
    ExactPoly acc(n);
    // dense views of the forms
    std::vector<std::vector<const ExactPoly*>> dense(
        static_cast<std::size_t>(r), std::vector<const ExactPoly*>(static_cast<std::size_t>(n), nullptr));
    for (int a = 0; a < r; ++a)
        for (const auto& [I, f] : ws[static_cast<std::size_t>(a)]->coeffs())
            dense[static_cast<std::size_t>(a)][static_cast<std::size_t>(I[0] - 1)] = &f.poly();
    for (const auto& [I, lp] : lam.items) {
        std::vector<std::vector<const ExactPoly*>> minor(
            static_cast<std::size_t>(r), std::vector<const ExactPoly*>(static_cast<std::size_t>(r)));
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b)
                minor[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                    dense[static_cast<std::size_t>(a)][static_cast<std::size_t>(I[b] - 1)];
        std::vector<int> cols(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) cols[static_cast<std::size_t>(i)] = i;
        ExactPoly d = det_poly(n, minor, cols, 0);
        if (d.is_zero()) continue;
        acc += d * (*lp);
    }
    return acc;
}

struct ComboTable {
    std::vector<MultiIndex> combos;
    std::map<MultiIndex, int> rank;
    explicit ComboTable(int universe, int k) {
        combos = increasing_multiindices(universe, k);
        for (std::size_t i = 0; i < combos.size(); ++i)
            rank[combos[i]] = static_cast<int>(i);
    }
};

std::string slot_label(const TestFamily& fam, const MultiIndex& combo) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < combo.degree(); ++i) {
        if (i) os << ",";
        os << fam.labels[static_cast<std::size_t>(combo[i] - 1)];
    }
    os << ")";
    return os.str();
}

struct ExactFailure {
    long key = -1;
    std::string slots;
    std::string residual;
};

struct ChunkResult {
    long cases = 0;
    std::optional<ExactFailure> failure;
};

// Deterministic chunked parallel run over [0, total): workers scan disjoint
// blocks, each stopping at its own first failure; the merge keeps the failure
// with the smallest key, so the reported witness is independent of timing.
template <class Fn>
ChunkResult run_parallel(long total, int threads, Fn&& body) {
    if (total <= 0) return {};
    const int nw = static_cast<int>(std::max<long>(1, std::min<long>(threads, total)));
    std::vector<std::future<ChunkResult>> futures;
    const long chunk = (total + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
        const long begin = w * chunk;
        const long end = std::min(total, begin + chunk);
        if (begin >= end) break;
        futures.push_back(std::async(std::launch::async, [begin, end, &body] {
            ChunkResult local;
            for (long i = begin; i < end; ++i) {
                ++local.cases;
                auto fail = body(i);
                if (fail) {
                    local.failure = std::move(fail);
                    break;
                }
            }
            return local;
        }));
    }
    ChunkResult merged;
    for (auto& f : futures) {
        ChunkResult local = f.get();
        merged.cases += local.cases;
        if (local.failure && (!merged.failure || local.failure->key < merged.failure->key))
            merged.failure = std::move(local.failure);
    }
    return merged;
}

// ---------- sampled-mode machinery ----------

// value and gradient of {slots_1,..,slots_r} at x, from 2-jets of the slots
// and 1-jets of the tensor coefficients
Jet1 bracket_jet1(const NambuStructure& S, const std::vector<const ScalarField*>& slots,
                  const std::vector<double>& x) {
    const int n = S.n();
    const int r = S.order();
    std::vector<Jet2> jets;
    jets.reserve(slots.size());
    for (const auto* f : slots) jets.push_back(f->jet(x));
    Jet1 out = Jet1::zero(n);
    for (const auto& [I, coeff] : S.tensor().coeffs()) {
        Jet2 cj = coeff.jet(x);
        // minor of gradient rows
        Mat g(static_cast<std::size_t>(r), std::vector<double>(static_cast<std::size_t>(r)));
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b)
                g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                    jets[static_cast<std::size_t>(a)].grad[static_cast<std::size_t>(I[b] - 1)];
        const double detg = det_dense(g);
        out.v += cj.value * detg;
        for (int k = 0; k < n; ++k) {
            double dd = cj.grad[static_cast<std::size_t>(k)] * detg;
            // derivative of the determinant: replace one row at a time by the
            // Hessian row of that slot
            for (int a = 0; a < r; ++a) {
                Mat h = g;
                for (int b = 0; b < r; ++b)
                    h[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                        jets[static_cast<std::size_t>(a)].h(k, I[b] - 1);
                dd += cj.value * det_dense(h);
            }
            out.g[static_cast<std::size_t>(k)] += dd;
        }
    }
    return out;
}

double fi_residual_at(const NambuStructure& S, const std::vector<const ScalarField*>& fs,
                      const std::vector<const ScalarField*>& gs, const std::vector<double>& x) {
    const int r = S.order();
    NumTensor lam = S.tensor().eval(x);
    std::vector<std::vector<double>> fgrads, ggrads;
    for (const auto* f : fs) fgrads.push_back(f->jet(x).grad);
    for (const auto* g : gs) ggrads.push_back(g->jet(x).grad);

    Jet1 inner = bracket_jet1(S, gs, x);
    std::vector<std::vector<double>> rows = fgrads;
    rows.push_back(inner.g);
    double lhs = eval_alt(lam, rows);

    double rhs = 0;
    for (int i = 0; i < r; ++i) {
        std::vector<const ScalarField*> slots = fs;
        slots.push_back(gs[static_cast<std::size_t>(i)]);
        Jet1 t = bracket_jet1(S, slots, x);
        std::vector<std::vector<double>> grows = ggrads;
        grows[static_cast<std::size_t>(i)] = t.g;
        rhs += eval_alt(lam, grows);
    }
    return lhs - rhs;
}

}  // namespace

CheckReport check_leibniz(const NambuStructure& S, const CheckOptions& opts,
                          const BracketFn& bracket) {
    auto t0 = Clock::now();
    CheckReport rep;
    rep.name = "leibniz.rule";
    rep.property = "bracket is a derivation in its last slot";
    rep.seed = opts.seed;
    if (!S.is_exact()) {
        rep.verdict = Verdict::Unsupported;
        rep.mode = "sampled";
        rep.notes.push_back("Leibniz battery requires exact coefficients");
        rep.elapsed_ms = ms_since(t0);
        return rep;
    }
    rep.mode = "exact";
    BracketFn br = bracket;
    if (!br)
        br = [](const NambuStructure& st, const std::vector<ScalarField>& slots) {
            return bracket_field(st, slots);
        };
    TestFamily fam = build_test_family(S, FamilyKind::Quad, opts.seed);
    const int r = S.order();
    const int m = S.restriction_rank();
    ComboTable fcombos(m, r - 1);  // over the linear members only
    for (const auto& fc : fcombos.combos) {
        std::vector<ScalarField> fs;
        for (int i = 0; i < fc.degree(); ++i)
            fs.push_back(fam.members[static_cast<std::size_t>(fc[i] - 1)]);
        for (int gi = 0; gi < fam.basis_count; ++gi) {
            for (int hi = gi; hi < fam.basis_count; ++hi) {
                const ScalarField& g = fam.members[static_cast<std::size_t>(gi)];
                const ScalarField& h = fam.members[static_cast<std::size_t>(hi)];
                std::vector<ScalarField> slots = fs;
                slots.push_back(g * h);
                ScalarField lhs = br(S, slots);
                slots.back() = g;
                ScalarField term1 = br(S, slots) * h;
                slots.back() = h;
                ScalarField term2 = g * br(S, slots);
                ScalarField residual = lhs - term1 - term2;
                ++rep.cases;
                if (!residual.is_zero()) {
                    rep.verdict = Verdict::Fail;
                    rep.residual = truncate(residual.poly().to_string());
                    Witness w;
                    w.slots = "f=" + slot_label(fam, fc) + " g=" +
                              fam.labels[static_cast<std::size_t>(gi)] + " h=" +
                              fam.labels[static_cast<std::size_t>(hi)];
                    w.detail = "product-rule defect";
                    rep.witness = std::move(w);
                    rep.elapsed_ms = ms_since(t0);
                    return rep;
                }
            }
        }
    }
    rep.verdict = Verdict::Pass;
    rep.residual = "0";
    rep.elapsed_ms = ms_since(t0);
    return rep;
}

CheckReport check_filippov_direct(const NambuStructure& S, const CheckOptions& opts) {
    auto t0 = Clock::now();
    CheckReport rep;
    rep.name = "filippov.direct";
    rep.property = "fundamental identity of the bracket, literal form";
    rep.seed = opts.seed;
    const int r = S.order();
    const int n = S.n();
    TestFamily fam = build_test_family(S, opts.family, opts.seed);
    const int F = opts.family == FamilyKind::Coords ? static_cast<int>(fam.members.size())
                                                    : fam.basis_count;
    if (static_cast<int>(fam.members.size()) < r + 1) {
        throw ConfigError("check_filippov_direct: family smaller than r+1 functions");
    }

    if (S.is_exact()) {
        rep.mode = "exact";
        LambdaEntries lam(S.tensor());
        std::vector<FormField> dF;
        dF.reserve(static_cast<std::size_t>(F));
        for (int i = 0; i < F; ++i) dF.push_back(differential(fam.members[static_cast<std::size_t>(i)]));
        ComboTable fcs(F, r - 1), gcs(F, r);
        // wedges of f-differentials per (r-1)-combination
        std::vector<FormField> W;
        W.reserve(fcs.combos.size());
        for (const auto& c : fcs.combos) {
            FormField acc(n, 0, Variance::Covector);
            acc.set(MultiIndex{}, ScalarField::constant(n, Rat(1)));
            for (int i = 0; i < c.degree(); ++i) acc = wedge(acc, dF[static_cast<std::size_t>(c[i] - 1)]);
            W.push_back(std::move(acc));
        }
        // differentials of inner brackets per r-combination
        std::vector<FormField> dS;
        dS.reserve(gcs.combos.size());
        for (const auto& g : gcs.combos) {
            std::vector<int> head(g.indices().begin(), g.indices().end() - 1);
            ExactPoly inner = contract_split(n, lam, W[static_cast<std::size_t>(fcs.rank.at(MultiIndex(head)))],
                                             dF[static_cast<std::size_t>(g[g.degree() - 1] - 1)]);
            dS.push_back(differential(ScalarField(n, std::move(inner))));
        }
        // differentials of {f_c.., member} per (f-combination, member)
        std::vector<std::vector<FormField>> dT(fcs.combos.size());
        for (std::size_t c = 0; c < fcs.combos.size(); ++c) {
            dT[c].reserve(static_cast<std::size_t>(F));
            for (int i = 0; i < F; ++i) {
                ExactPoly t = contract_split(n, lam, W[c], dF[static_cast<std::size_t>(i)]);
                dT[c].push_back(differential(ScalarField(n, std::move(t))));
            }
        }

        const long total = static_cast<long>(fcs.combos.size()) * static_cast<long>(gcs.combos.size());
        const long n_g = static_cast<long>(gcs.combos.size());
        auto body = [&](long idx) -> std::optional<ExactFailure> {
            const std::size_t ci = static_cast<std::size_t>(idx / n_g);
            const std::size_t gi = static_cast<std::size_t>(idx % n_g);
            const MultiIndex& gc = gcs.combos[gi];
            ExactPoly residual = contract_split(n, lam, W[ci], dS[gi]);
            for (int i = 0; i < r; ++i) {
                std::vector<int> rest;
                for (int j = 0; j < r; ++j)
                    if (j != i) rest.push_back(gc[j]);
                const FormField& dt = dT[ci][static_cast<std::size_t>(gc[i] - 1)];
                ExactPoly term =
                    contract_split(n, lam, W[static_cast<std::size_t>(fcs.rank.at(MultiIndex(rest)))], dt);
                if ((r - 1 - i) % 2 == 0)
                    residual -= term;
                else
                    residual += term;
            }
            if (residual.is_zero()) return std::nullopt;
            ExactFailure fail;
            fail.key = idx;
            fail.slots = "f=" + slot_label(fam, fcs.combos[ci]) + " g=" + slot_label(fam, gc);
            fail.residual = truncate(residual.to_string());
            return fail;
        };
        ChunkResult res = run_parallel(total, thread_count(opts), body);
        rep.cases = res.cases;
        if (res.failure) {
            // canonical count: assignments up to the witness, independent of
            // the worker layout
            rep.cases = res.failure->key + 1;
            rep.verdict = Verdict::Fail;
            rep.residual = res.failure->residual;
            rep.witness = Witness{res.failure->slots, {}, "nonzero fundamental-identity residual"};
        } else {
            rep.verdict = Verdict::Pass;
            rep.residual = "0";
            if (opts.family == FamilyKind::Full)
                rep.notes.push_back(
                    "random quadratics lie in the basis span; residual multilinearity extends the pass");
        }
        rep.elapsed_ms = ms_since(t0);
        return rep;
    }

    // sampled mode: seeded subsample of assignments, residuals at sample points
    rep.mode = "sampled";
    SeededRng rng(opts.seed);
    const int members = static_cast<int>(fam.members.size());
    double worst = 0;
    std::optional<Witness> witness;
    for (int a = 0; a < opts.sampled_assignments; ++a) {
        std::vector<const ScalarField*> fs, gs;
        std::vector<int> fidx, gidx;
        while (static_cast<int>(fidx.size()) < r - 1) {
            int i = static_cast<int>(rng.uniform_int(0, members - 1));
            if (std::find(fidx.begin(), fidx.end(), i) == fidx.end()) fidx.push_back(i);
        }
        while (static_cast<int>(gidx.size()) < r) {
            int i = static_cast<int>(rng.uniform_int(0, members - 1));
            if (std::find(gidx.begin(), gidx.end(), i) == gidx.end()) gidx.push_back(i);
        }
        for (int i : fidx) fs.push_back(&fam.members[static_cast<std::size_t>(i)]);
        for (int i : gidx) gs.push_back(&fam.members[static_cast<std::size_t>(i)]);
        for (int s = 0; s < opts.samples; ++s) {
            std::vector<double> x = rng.point_in(S.box());
            double res = std::abs(fi_residual_at(S, fs, gs, x));
            ++rep.cases;
            if (res > worst) {
                worst = res;
                if (res > opts.tol) {
                    std::ostringstream slots;
                    slots << "f=(";
                    for (std::size_t i = 0; i < fidx.size(); ++i)
                        slots << (i ? "," : "") << fam.labels[static_cast<std::size_t>(fidx[i])];
                    slots << ") g=(";
                    for (std::size_t i = 0; i < gidx.size(); ++i)
                        slots << (i ? "," : "") << fam.labels[static_cast<std::size_t>(gidx[i])];
                    slots << ")";
                    witness = Witness{slots.str(), x, "sampled residual above tolerance"};
                }
            }
        }
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", worst);
    rep.residual = buf;
    rep.verdict = worst <= opts.tol ? Verdict::Pass : Verdict::Fail;
    rep.witness = std::move(witness);
    rep.notes.push_back("sampled mode subsamples slot assignments");
    rep.elapsed_ms = ms_since(t0);
    return rep;
}

CheckReport check_lie_derivative_criterion(const NambuStructure& S, const CheckOptions& opts) {
    auto t0 = Clock::now();
    CheckReport rep;
    rep.name = "filippov.lie-derivative";
    rep.property = "L_{X_f} Lambda vanishes on the restriction for Hamiltonian X_f";
    rep.seed = opts.seed;
    if (!S.is_exact()) {
        rep.verdict = Verdict::Unsupported;
        rep.mode = "sampled";
        rep.notes.push_back("Lie-derivative criterion requires exact coefficients");
        rep.elapsed_ms = ms_since(t0);
        return rep;
    }
    rep.mode = "exact";
    const int r = S.order();
    const int n = S.n();
    TestFamily fam = build_test_family(S, opts.family, opts.seed);
    const int F = opts.family == FamilyKind::Coords ? static_cast<int>(fam.members.size())
                                                    : fam.basis_count;
    if (static_cast<int>(fam.members.size()) < r + 1)
        throw ConfigError("check_lie_derivative_criterion: family smaller than r+1 functions");

    LambdaEntries lam(S.tensor());
    std::vector<FormField> dF;
    for (int i = 0; i < F; ++i) dF.push_back(differential(fam.members[static_cast<std::size_t>(i)]));
    ComboTable fcs(F, r - 1), gcs(F, r);

    // Hamiltonian fields per f-combination, via the sharp pipeline
    std::vector<VectorField> X;
    X.reserve(fcs.combos.size());
    for (const auto& c : fcs.combos) {
        std::vector<ScalarField> fs;
        for (int i = 0; i < c.degree(); ++i) fs.push_back(fam.members[static_cast<std::size_t>(c[i] - 1)]);
        X.push_back(hamiltonian_field(S, fs));
    }
    // inner evaluations Lambda(dg_1..dg_r) per g-combination, slot-ordered
    std::vector<ScalarField> Sg;
    Sg.reserve(gcs.combos.size());
    for (const auto& g : gcs.combos) {
        std::vector<const FormField*> ws;
        for (int i = 0; i < r; ++i) ws.push_back(&dF[static_cast<std::size_t>(g[i] - 1)]);
        Sg.emplace_back(n, eval_on_forms(n, lam, ws));
    }
    // d(dg_i(X_c)) per (f-combination, member)
    std::vector<std::vector<FormField>> dXg(fcs.combos.size());
    for (std::size_t c = 0; c < fcs.combos.size(); ++c) {
        dXg[c].reserve(static_cast<std::size_t>(F));
        for (int i = 0; i < F; ++i)
            dXg[c].push_back(differential(X[c].apply(fam.members[static_cast<std::size_t>(i)])));
    }

    const long n_g = static_cast<long>(gcs.combos.size());
    const long total = static_cast<long>(fcs.combos.size()) * n_g;
    auto body = [&](long idx) -> std::optional<ExactFailure> {
        const std::size_t ci = static_cast<std::size_t>(idx / n_g);
        const std::size_t gi = static_cast<std::size_t>(idx % n_g);
        const MultiIndex& gc = gcs.combos[gi];
        ExactPoly residual = X[ci].apply(Sg[gi]).poly();
        for (int i = 0; i < r; ++i) {
            std::vector<const FormField*> ws;
            for (int j = 0; j < r; ++j)
                ws.push_back(j == i ? &dXg[ci][static_cast<std::size_t>(gc[i] - 1)]
                                    : &dF[static_cast<std::size_t>(gc[j] - 1)]);
            residual -= eval_on_forms(n, lam, ws);
        }
        if (residual.is_zero()) return std::nullopt;
        ExactFailure fail;
        fail.key = idx;
        fail.slots = "f=" + slot_label(fam, fcs.combos[ci]) + " g=" + slot_label(fam, gc);
        fail.residual = truncate(residual.to_string());
        return fail;
    };
    ChunkResult res = run_parallel(total, thread_count(opts), body);
    rep.cases = res.cases;
    if (res.failure) {
        rep.cases = res.failure->key + 1;
        rep.verdict = Verdict::Fail;
        rep.residual = res.failure->residual;
        rep.witness = Witness{res.failure->slots, {}, "Lie derivative of the tensor is nonzero"};
    } else {
        rep.verdict = Verdict::Pass;
        rep.residual = "0";
        if (opts.family == FamilyKind::Full)
            rep.notes.push_back(
                "random quadratics lie in the basis span; residual multilinearity extends the pass");
    }
    rep.elapsed_ms = ms_since(t0);
    return rep;
}

CheckReport check_filippov_structural(const NambuStructure& S, const CheckOptions& opts) {
    auto t0 = Clock::now();
    CheckReport rep;
    rep.name = "filippov.structural";
    rep.property = "pointwise decomposability and involutive rank-r characteristic distribution";
    rep.seed = opts.seed;
    rep.mode = "sampled";
    const int r = S.order();
    if (r < 3) {
        rep.verdict = Verdict::Unsupported;
        rep.notes.push_back("structural criterion needs order >= 3; use the direct check");
        rep.elapsed_ms = ms_since(t0);
        return rep;
    }
    SeededRng rng(opts.seed);
    const int m = S.restriction_rank();
    ComboTable wedge_choices(m, r - 1);
    double worst_plucker = 0;
    int regular_seen = 0;
    for (int s = 0; s < opts.samples; ++s) {
        std::vector<double> x = rng.point_in(S.box());
        PointClass pc = classify_point(S, x);
        ++rep.cases;
        if (!pc.regular) continue;
        ++regular_seen;
        NumTensor lam = S.tensor().eval(x);
        PluckerNumeric pl = plucker_check_numeric(lam, opts.tol);
        worst_plucker = std::max(worst_plucker, pl.normalized_residual);
        if (!pl.decomposable) {
            rep.verdict = Verdict::Fail;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3e", pl.normalized_residual);
            rep.residual = buf;
            rep.witness = Witness{"decomposability relations", x,
                                  "quadratic relation residual above tolerance"};
            rep.elapsed_ms = ms_since(t0);
            return rep;
        }
        if (pc.rank != r) {
            rep.verdict = Verdict::Fail;
            rep.residual = std::to_string(pc.rank);
            rep.witness = Witness{"characteristic rank", x,
                                  "rank " + std::to_string(pc.rank) + " != r = " + std::to_string(r)};
            rep.elapsed_ms = ms_since(t0);
            return rep;
        }
        // involutivity: greedy-pick r sharp fields whose values at x span the
        // range, then test span stability of their pairwise brackets
        Mat range = anchor_range_matrix(S, x);
        // columns of `range` follow wedge_choices.combos
        std::vector<int> picked;
        {
            Mat basis;  // rows chosen so far (as vectors)
            for (std::size_t c = 0; c < wedge_choices.combos.size() && static_cast<int>(picked.size()) < r; ++c) {
                std::vector<double> col(static_cast<std::size_t>(S.n()));
                for (int i = 0; i < S.n(); ++i) col[static_cast<std::size_t>(i)] = range[static_cast<std::size_t>(i)][c];
                Mat trial = basis;
                trial.push_back(col);
                if (numerical_rank(trial, 1e-10) == static_cast<int>(trial.size())) {
                    basis.push_back(col);
                    picked.push_back(static_cast<int>(c));
                }
            }
        }
        if (static_cast<int>(picked.size()) < r) continue;  // numerically defective, skip
        std::vector<VectorField> frame;
        for (int c : picked) {
            const MultiIndex& combo = wedge_choices.combos[static_cast<std::size_t>(c)];
            FormField acc(S.n(), 0, Variance::Covector);
            acc.set(MultiIndex{}, ScalarField::constant(S.n(), Rat(1)));
            for (int a = 0; a < r - 1; ++a) {
                FormField row(S.n(), 1, Variance::Covector);
                const auto& b = S.restriction()[static_cast<std::size_t>(combo[a] - 1)];
                for (int i = 1; i <= S.n(); ++i)
                    if (!b[static_cast<std::size_t>(i - 1)].is_zero())
                        row.set(MultiIndex({i}), ScalarField::constant(S.n(), b[static_cast<std::size_t>(i - 1)]));
                acc = wedge(acc, row);
            }
            frame.push_back(sharp_field(S, acc));
        }
        Mat span_test;
        for (const auto& Y : frame) span_test.push_back(Y.eval(x));
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j)
                span_test.push_back(lie_bracket_at(frame[static_cast<std::size_t>(i)],
                                                   frame[static_cast<std::size_t>(j)], x));
        if (numerical_rank(span_test, 1e-8) > r) {
            rep.verdict = Verdict::Fail;
            rep.residual = "rank>" + std::to_string(r);
            rep.witness = Witness{"involutivity", x,
                                  "a Hamiltonian-frame bracket leaves the distribution"};
            rep.elapsed_ms = ms_since(t0);
            return rep;
        }
    }
    rep.verdict = Verdict::Pass;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", worst_plucker);
    rep.residual = buf;
    rep.notes.push_back("regular points sampled: " + std::to_string(regular_seen));
    rep.elapsed_ms = ms_since(t0);
    return rep;
}

CheckReport commutator_identity_check(const NambuStructure& S,
                                      const std::vector<ScalarField>& fs,
                                      const std::vector<ScalarField>& gs) {
    auto t0 = Clock::now();
    CheckReport rep;
    rep.name = "filippov.commutator";
    rep.property = "[X_f, X_g] = sum_i X_{g_1,..,dg_i(X_f),..,g_{r-1}}";
    rep.mode = "exact";
    const int r = S.order();
    if (static_cast<int>(fs.size()) != r - 1 || static_cast<int>(gs.size()) != r - 1)
        throw StructuralError("commutator_identity_check: slot arity must be r-1");
    VectorField xf = hamiltonian_field(S, fs);
    VectorField xg = hamiltonian_field(S, gs);
    VectorField lhs = lie_bracket(xf, xg);
    VectorField rhs = VectorField::zero(S.n());
    for (int i = 0; i < r - 1; ++i) {
        std::vector<ScalarField> slots = gs;
        slots[static_cast<std::size_t>(i)] = xf.apply(gs[static_cast<std::size_t>(i)]);
        rhs = rhs + hamiltonian_field(S, slots);
    }
    VectorField diff = lhs - rhs;
    rep.cases = 1;
    if (diff.is_zero()) {
        rep.verdict = Verdict::Pass;
        rep.residual = "0";
    } else {
        rep.verdict = Verdict::Fail;
        std::string repr;
        for (int i = 1; i <= S.n(); ++i)
            if (!diff.component(i).is_zero())
                repr += (repr.empty() ? "" : "; ") + std::string("d/dx") + std::to_string(i) +
                        ": " + diff.component(i).poly().to_string();
        rep.residual = truncate(repr);
        rep.witness = Witness{"commutator identity", {}, "vector-field mismatch"};
    }
    rep.elapsed_ms = ms_since(t0);
    return rep;
}

std::vector<CheckReport> filippov_battery(const NambuStructure& S, const CheckOptions& opts) {
    std::vector<CheckReport> out;
    out.push_back(check_filippov_direct(S, opts));
    out.push_back(check_lie_derivative_criterion(S, opts));
    out.push_back(check_filippov_structural(S, opts));
    return out;
}

}  // namespace nambu
