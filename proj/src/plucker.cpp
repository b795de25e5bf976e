#include "nambu/plucker.hpp"

#include "nambu/errors.hpp"

#include <cmath>

namespace nambu {

namespace {

template <class S>
AltTensor<S> basis_contraction(const AltTensor<S>& lambda, const MultiIndex& K) {
    AltTensor<S> form(lambda.n(), K.degree(), Variance::Covector);
    form.set(K, S(1));
    return interior(form, lambda);
}

// Lambda_{C,a} ^ Lambda_b; zero when the contraction tuple repeats an index.
template <class S>
void relation_term(const AltTensor<S>& lambda, const MultiIndex& C, int a, int b,
                   AltTensor<S>* out) {
    std::vector<int> tuple = C.indices();
    tuple.push_back(a);
    auto nrm = normalize_indices(tuple);
    if (nrm.sign == 0) return;
    AltTensor<S> first = basis_contraction(lambda, nrm.index);
    if (nrm.sign < 0) first *= S(-1);
    AltTensor<S> second = basis_contraction(lambda, MultiIndex({b}));
    *out = wedge(first, second);
}

}  // namespace

PluckerResult plucker_check(const RatTensor& lambda) {
    if (lambda.variance() != Variance::Vector)
        throw StructuralError("plucker_check: expects a multivector");
    const int r = lambda.degree();
    const int n = lambda.n();
    if (r < 3)
        throw UnsupportedModeError("plucker_check: order must be at least 3");

    for (const auto& C : increasing_multiindices(n, r - 2)) {
        for (int a = 1; a <= n; ++a) {
            for (int b = a; b <= n; ++b) {
                RatTensor t1(n, r, Variance::Vector), t2(n, r, Variance::Vector);
                relation_term(lambda, C, a, b, &t1);
                relation_term(lambda, C, b, a, &t2);
                if (!(t1 + t2).is_zero()) return {false, std::nullopt};
            }
        }
    }

    if (lambda.is_zero()) return {true, std::nullopt};

    // Factorization: contract against the duals of one maximal coefficient.
    MultiIndex best;
    Rat best_abs(-1);
    for (const auto& [I, c] : lambda.coeffs()) {
        Rat a = c < 0 ? Rat(-c) : c;
        if (a > best_abs) {
            best_abs = a;
            best = I;
        }
    }
    std::vector<std::vector<Rat>> factors;
    for (int i = 0; i < r; ++i) {
        std::vector<int> K;
        for (int j = 0; j < r; ++j)
            if (j != i) K.push_back(best[j]);
        RatTensor xi = basis_contraction(lambda, MultiIndex(K));
        std::vector<Rat> v(static_cast<std::size_t>(n), Rat(0));
        for (const auto& [I, c] : xi.coeffs()) v[static_cast<std::size_t>(I[0] - 1)] = c;
        factors.push_back(std::move(v));
    }
    // rescale so the wedge reproduces lambda exactly
    RatTensor w(n, r, Variance::Vector);
    {
        RatTensor acc(n, 0, Variance::Vector);
        acc.set(MultiIndex{}, Rat(1));
        for (const auto& v : factors) {
            RatTensor deg1(n, 1, Variance::Vector);
            for (int i = 1; i <= n; ++i) deg1.set(MultiIndex({i}), v[static_cast<std::size_t>(i - 1)]);
            acc = wedge(acc, deg1);
        }
        w = acc;
    }
    Rat scale = w.coeff(best) / lambda.coeff(best);
    if (scale.is_zero())
        throw StructuralError("plucker_check: degenerate contraction in factorization");
    for (auto& c : factors[0]) c /= scale;
    // exactness check of the factorization
    RatTensor acc(n, 0, Variance::Vector);
    acc.set(MultiIndex{}, Rat(1));
    for (const auto& v : factors) {
        RatTensor deg1(n, 1, Variance::Vector);
        for (int i = 1; i <= n; ++i) deg1.set(MultiIndex({i}), v[static_cast<std::size_t>(i - 1)]);
        acc = wedge(acc, deg1);
    }
    if (!(acc - lambda).is_zero())
        throw StructuralError("plucker_check: factorization does not reproduce the tensor");
    return {true, std::move(factors)};
}

PluckerNumeric plucker_check_numeric(const NumTensor& lambda, double tol) {
    if (lambda.variance() != Variance::Vector)
        throw StructuralError("plucker_check_numeric: expects a multivector");
    const int r = lambda.degree();
    const int n = lambda.n();
    if (r < 3)
        throw UnsupportedModeError("plucker_check_numeric: order must be at least 3");
    double norm2 = 0;
    for (const auto& [I, c] : lambda.coeffs()) norm2 += c * c;
    if (norm2 == 0) return {true, 0.0};
    double worst = 0;
    for (const auto& C : increasing_multiindices(n, r - 2)) {
        for (int a = 1; a <= n; ++a) {
            for (int b = a; b <= n; ++b) {
                NumTensor t1(n, r, Variance::Vector), t2(n, r, Variance::Vector);
                relation_term(lambda, C, a, b, &t1);
                relation_term(lambda, C, b, a, &t2);
                NumTensor sum = t1 + t2;
                for (const auto& [I, c] : sum.coeffs()) worst = std::max(worst, std::abs(c));
            }
        }
    }
    const double normalized = worst / norm2;
    return {normalized <= tol, normalized};
}

}  // namespace nambu
