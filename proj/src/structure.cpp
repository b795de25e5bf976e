#include "nambu/structure.hpp"

#include "nambu/rng.hpp"

#include <algorithm>

namespace nambu {

namespace {

RatMat identity_restriction(int n) {
    RatMat b(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(n), Rat(0)));
    for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Rat(1);
    return b;
}

}  // namespace

NambuStructure::NambuStructure(int n, int r, MultiVectorField lambda, Box box)
    : NambuStructure(n, r, std::move(lambda), identity_restriction(n), std::move(box)) {}

NambuStructure::NambuStructure(int n, int r, MultiVectorField lambda, RatMat restriction,
                               Box box)
    : n_(n), r_(r), lambda_(std::move(lambda)), restriction_(std::move(restriction)),
      box_(std::move(box)) {
    if (r_ < 2) throw StructuralError("NambuStructure: order must be at least 2");
    if (r_ > n_) throw StructuralError("NambuStructure: order exceeds dimension");
    if (lambda_.n() != n_ || lambda_.degree() != r_ || lambda_.variance() != Variance::Vector)
        throw StructuralError("NambuStructure: tensor shape mismatch");
    if (box_.n() != n_) throw StructuralError("NambuStructure: box dimension mismatch");
    const int m = static_cast<int>(restriction_.size());
    if (m < 1 || m > n_) throw StructuralError("NambuStructure: restriction row count");
    for (const auto& row : restriction_)
        if (static_cast<int>(row.size()) != n_)
            throw StructuralError("NambuStructure: restriction column count");
    if (rational_rank(restriction_) != m)
        throw StructuralError("NambuStructure: restriction matrix must have full row rank");
    annihilator_ = rational_nullspace(restriction_);
}

bool NambuStructure::is_full() const { return static_cast<int>(restriction_.size()) == n_; }

bool admissible_fn_check(const NambuStructure& S, const ScalarField& f, bool* approximate,
                         int samples, std::uint64_t seed) {
    if (f.n() != S.n()) throw StructuralError("admissible_fn_check: dimension mismatch");
    if (S.is_full()) {
        if (approximate) *approximate = false;
        return true;
    }
    if (f.is_exact()) {
        if (approximate) *approximate = false;
        // df in row-span(B) for all x  <=>  <grad f, v> = 0 identically for
        // every v in the annihilator of the span.
        for (const auto& v : S.restriction_annihilator()) {
            ExactPoly pairing(S.n());
            for (int i = 1; i <= S.n(); ++i) {
                const Rat& vi = v[static_cast<std::size_t>(i - 1)];
                if (vi.is_zero()) continue;
                pairing += vi * f.poly().derivative(i);
            }
            if (!pairing.is_zero()) return false;
        }
        return true;
    }
    if (approximate) *approximate = true;
    SeededRng rng(seed);
    for (int s = 0; s < samples; ++s) {
        std::vector<double> x = rng.point_in(S.box());
        Jet2 j = f.jet(x);
        for (const auto& v : S.restriction_annihilator()) {
            double dot = 0;
            for (int i = 0; i < S.n(); ++i)
                dot += to_double(v[static_cast<std::size_t>(i)]) * j.grad[static_cast<std::size_t>(i)];
            if (std::abs(dot) > 1e-9) return false;
        }
    }
    return true;
}

bool covector_admissible(const NambuStructure& S, const std::vector<Rat>& alpha) {
    if (static_cast<int>(alpha.size()) != S.n())
        throw StructuralError("covector_admissible: dimension mismatch");
    return in_row_span(S.restriction(), alpha);
}

bool multicovector_admissible(const NambuStructure& S, const RatTensor& omega) {
    if (omega.n() != S.n() || omega.variance() != Variance::Covector)
        throw StructuralError("multicovector_admissible: shape mismatch");
    // omega lies in the exterior power of the span iff every annihilator
    // vector contracts it to zero.
    for (const auto& v : S.restriction_annihilator()) {
        RatTensor contracted(S.n(), omega.degree() - 1, Variance::Covector);
        for (const auto& [I, c] : omega.coeffs()) {
            for (int p = 0; p < I.degree(); ++p) {
                const Rat& vk = v[static_cast<std::size_t>(I[p] - 1)];
                if (vk.is_zero()) continue;
                auto split = split_index(I, MultiIndex({I[p]}));
                Rat term = vk * c;
                contracted.add_to(split.rest, split.sign > 0 ? term : Rat(-term));
            }
        }
        if (!contracted.is_zero()) return false;
    }
    return true;
}

std::vector<Rat> sharp(const NambuStructure& S, const RatTensor& omega,
                       const std::vector<Rat>& x) {
    if (omega.degree() != S.order() - 1)
        throw StructuralError("sharp: covector degree must be r-1");
    if (!multicovector_admissible(S, omega))
        throw RestrictionViolation("sharp: covector outside the restriction subspace");
    RatTensor lam = S.tensor().eval_exact(x);
    RatTensor img = interior(omega, lam);
    std::vector<Rat> out(static_cast<std::size_t>(S.n()), Rat(0));
    for (const auto& [I, c] : img.coeffs()) out[static_cast<std::size_t>(I[0] - 1)] = c;
    return out;
}

std::vector<double> sharp(const NambuStructure& S, const NumTensor& omega,
                          const std::vector<double>& x) {
    if (omega.degree() != S.order() - 1)
        throw StructuralError("sharp: covector degree must be r-1");
    NumTensor lam = S.tensor().eval(x);
    NumTensor img = interior(omega, lam);
    std::vector<double> out(static_cast<std::size_t>(S.n()), 0.0);
    for (const auto& [I, c] : img.coeffs()) out[static_cast<std::size_t>(I[0] - 1)] = c;
    return out;
}

namespace {

void require_admissible(const NambuStructure& S, const std::vector<ScalarField>& fs) {
    for (const auto& f : fs)
        if (!admissible_fn_check(S, f))
            throw RestrictionViolation("bracket: inadmissible slot function");
}

}  // namespace

double bracket_eval(const NambuStructure& S, const std::vector<ScalarField>& fs,
                    const ScalarField& g, const std::vector<double>& x) {
    if (static_cast<int>(fs.size()) != S.order() - 1)
        throw StructuralError("bracket_eval: expected r-1 leading slots");
    if (!S.box().contains(x)) throw DomainError("bracket_eval: point outside domain box");
    require_admissible(S, fs);
    require_admissible(S, {g});
    NumTensor lam = S.tensor().eval(x);
    std::vector<std::vector<double>> grads;
    grads.reserve(fs.size() + 1);
    for (const auto& f : fs) grads.push_back(f.jet(x).grad);
    grads.push_back(g.jet(x).grad);
    return eval_alt(lam, grads);
}

Rat bracket_eval_exact(const NambuStructure& S, const std::vector<ScalarField>& fs,
                       const ScalarField& g, const std::vector<Rat>& x) {
    if (static_cast<int>(fs.size()) != S.order() - 1)
        throw StructuralError("bracket_eval_exact: expected r-1 leading slots");
    require_admissible(S, fs);
    require_admissible(S, {g});
    RatTensor lam = S.tensor().eval_exact(x);
    std::vector<std::vector<Rat>> grads;
    grads.reserve(fs.size() + 1);
    auto exact_grad = [&](const ScalarField& f) {
        std::vector<Rat> gvec(static_cast<std::size_t>(S.n()));
        for (int i = 1; i <= S.n(); ++i) gvec[static_cast<std::size_t>(i - 1)] = f.poly().derivative(i).eval(x);
        return gvec;
    };
    for (const auto& f : fs) grads.push_back(exact_grad(f));
    grads.push_back(exact_grad(g));
    return eval_alt(lam, grads);
}

ScalarField bracket_field(const NambuStructure& S, const std::vector<ScalarField>& fs) {
    if (static_cast<int>(fs.size()) != S.order())
        throw StructuralError("bracket_field: expected r slot functions");
    require_admissible(S, fs);
    FormField acc(S.n(), 0, Variance::Covector);
    acc.set(MultiIndex{}, ScalarField::constant(S.n(), Rat(1)));
    for (const auto& f : fs) acc = wedge(acc, differential(f));
    return full_contraction(acc, S.tensor());
}

VectorField hamiltonian_field(const NambuStructure& S, const std::vector<ScalarField>& fs) {
    if (static_cast<int>(fs.size()) != S.order() - 1)
        throw StructuralError("hamiltonian_field: expected r-1 slot functions");
    require_admissible(S, fs);
    FormField acc(S.n(), 0, Variance::Covector);
    acc.set(MultiIndex{}, ScalarField::constant(S.n(), Rat(1)));
    for (const auto& f : fs) acc = wedge(acc, differential(f));
    return sharp_field(S, acc);
}

VectorField sharp_field(const NambuStructure& S, const FormField& alpha) {
    if (alpha.degree() != S.order() - 1)
        throw StructuralError("sharp_field: form degree must be r-1");
    TensorField img = interior_form(alpha, S.tensor());
    std::vector<ScalarField> comps(static_cast<std::size_t>(S.n()),
                                   ScalarField::constant(S.n(), Rat(0)));
    for (const auto& [I, c] : img.coeffs()) comps[static_cast<std::size_t>(I[0] - 1)] = c;
    return {S.n(), std::move(comps)};
}

namespace {

MultiVectorField contract_constant_covectors(const NambuStructure& S,
                                             const std::vector<std::vector<Rat>>& betas) {
    RatTensor wedge_beta(S.n(), 0, Variance::Covector);
    wedge_beta.set(MultiIndex{}, Rat(1));
    for (const auto& b : betas) {
        if (!covector_admissible(S, b))
            throw RestrictionViolation("fixed_slot_anchor: covector outside restriction span");
        RatTensor deg1(S.n(), 1, Variance::Covector);
        for (int i = 1; i <= S.n(); ++i)
            deg1.set(MultiIndex({i}), b[static_cast<std::size_t>(i - 1)]);
        wedge_beta = wedge(wedge_beta, deg1);
    }
    FormField beta_field(S.n(), wedge_beta.degree(), Variance::Covector);
    for (const auto& [I, c] : wedge_beta.coeffs())
        beta_field.set(I, ScalarField::constant(S.n(), c));
    return interior_form(beta_field, S.tensor());
}

}  // namespace

NambuStructure fixed_slot_anchor(const NambuStructure& S,
                                 const std::vector<std::vector<Rat>>& betas) {
    const int k = S.order() - static_cast<int>(betas.size());
    if (k < 1) throw StructuralError("fixed_slot_anchor: order of the result must be positive");
    if (k == 1)
        throw StructuralError(
            "fixed_slot_anchor: order-1 contractions are vector fields; use fixed_slot_field");
    MultiVectorField reduced = contract_constant_covectors(S, betas);
    return {S.n(), k, std::move(reduced), S.restriction(), S.box()};
}

VectorField fixed_slot_field(const NambuStructure& S,
                             const std::vector<std::vector<Rat>>& betas) {
    if (static_cast<int>(betas.size()) != S.order() - 1)
        throw StructuralError("fixed_slot_field: expects r-1 covectors");
    MultiVectorField reduced = contract_constant_covectors(S, betas);
    std::vector<ScalarField> comps(static_cast<std::size_t>(S.n()),
                                   ScalarField::constant(S.n(), Rat(0)));
    for (const auto& [I, c] : reduced.coeffs()) comps[static_cast<std::size_t>(I[0] - 1)] = c;
    return {S.n(), std::move(comps)};
}

Mat anchor_range_matrix(const NambuStructure& S, const std::vector<double>& x) {
    const int m = S.restriction_rank();
    const int r = S.order();
    NumTensor lam = S.tensor().eval(x);
    Mat cols;
    for (const auto& combo : increasing_multiindices(m, r - 1)) {
        NumTensor omega(S.n(), 0, Variance::Covector);
        omega.set(MultiIndex{}, 1.0);
        for (int a = 0; a < r - 1; ++a) {
            NumTensor row(S.n(), 1, Variance::Covector);
            const auto& b = S.restriction()[static_cast<std::size_t>(combo[a] - 1)];
            for (int i = 1; i <= S.n(); ++i) {
                double v = to_double(b[static_cast<std::size_t>(i - 1)]);
                if (v != 0) row.set(MultiIndex({i}), v);
            }
            omega = wedge(omega, row);
        }
        NumTensor img = interior(omega, lam);
        std::vector<double> col(static_cast<std::size_t>(S.n()), 0.0);
        for (const auto& [I, c] : img.coeffs()) col[static_cast<std::size_t>(I[0] - 1)] = c;
        cols.push_back(std::move(col));
    }
    // transpose: rows are R^n coordinates, columns the wedge choices
    Mat out(static_cast<std::size_t>(S.n()), std::vector<double>(cols.size(), 0.0));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (int i = 0; i < S.n(); ++i)
            out[static_cast<std::size_t>(i)][c] = cols[c][static_cast<std::size_t>(i)];
    return out;
}

PointClass classify_point(const NambuStructure& S, const std::vector<double>& x,
                          double svd_rel_tol) {
    if (!S.box().contains(x)) throw DomainError("classify_point: point outside domain box");
    PointClass pc;
    pc.point = x;
    Mat range = anchor_range_matrix(S, x);
    pc.rank = numerical_rank(range, svd_rel_tol);
    pc.regular = pc.rank > 0;
    pc.rank_bound_violated = pc.regular && pc.rank < S.order();
    return pc;
}

}  // namespace nambu
