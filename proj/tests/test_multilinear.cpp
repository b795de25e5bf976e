#include <doctest.h>

#include "nambu/alt_tensor.hpp"
#include "nambu/rng.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

using namespace nambu;

namespace {

std::vector<Rat> unit_covector(int n, int i) {
    std::vector<Rat> v(static_cast<std::size_t>(n), Rat(0));
    v[static_cast<std::size_t>(i - 1)] = Rat(1);
    return v;
}

int perm_sign(std::vector<int> p) {
    int sign = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) sign = -sign;
    return sign;
}

// Brute-force oracle for eval: full permutation expansion of the minor
// determinants, written independently of the library's recursion.
Rat eval_oracle(const RatTensor& t, const std::vector<std::vector<Rat>>& args) {
    const int k = t.degree();
    if (k == 0) return t.coeff(MultiIndex{});
    std::vector<int> perm(static_cast<std::size_t>(k));
    Rat total(0);
    for (const auto& [I, c] : t.coeffs()) {
        std::iota(perm.begin(), perm.end(), 0);
        Rat det(0);
        do {
            Rat prod(1);
            for (int a = 0; a < k; ++a)
                prod *= args[static_cast<std::size_t>(a)]
                            [static_cast<std::size_t>(I[perm[static_cast<std::size_t>(a)]] - 1)];
            det += perm_sign(perm) > 0 ? prod : Rat(-prod);
        } while (std::next_permutation(perm.begin(), perm.end()));
        total += c * det;
    }
    return total;
}

// Brute-force alternator: apply every permutation to the raw tuples, then
// read components at increasing tuples.
RatTensor alternate_oracle(int n, int k, const std::map<std::vector<int>, Rat>& raw) {
    std::map<std::vector<int>, Rat> full;
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    Rat kfact(1);
    for (int i = 2; i <= k; ++i) kfact *= i;
    do {
        int sign = perm_sign(perm);
        for (const auto& [tuple, c] : raw) {
            std::vector<int> permuted(static_cast<std::size_t>(k));
            for (int a = 0; a < k; ++a)
                permuted[static_cast<std::size_t>(a)] = tuple[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])];
            full[permuted] += (sign > 0 ? c : Rat(-c)) / kfact;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    RatTensor out(n, k, Variance::Vector);
    for (const auto& I : increasing_multiindices(n, k)) {
        auto it = full.find(I.indices());
        if (it != full.end() && !it->second.is_zero()) out.set(I, it->second);
    }
    return out;
}

// Interior-product oracle via dual-basis evaluation of every output slot.
RatTensor interior_oracle(const RatTensor& form, const RatTensor& mv) {
    const int q = mv.degree(), p = form.degree();
    RatTensor out(mv.n(), q - p, Variance::Vector);
    for (const auto& J : increasing_multiindices(mv.n(), q - p)) {
        Rat value(0);
        for (const auto& [K, fk] : form.coeffs()) {
            std::vector<std::vector<Rat>> args;
            for (int i = 0; i < p; ++i) args.push_back(unit_covector(mv.n(), K[i]));
            for (int i = 0; i < q - p; ++i) args.push_back(unit_covector(mv.n(), J[i]));
            value += fk * eval_oracle(mv, args);
        }
        if (!value.is_zero()) out.set(J, value);
    }
    return out;
}

RatTensor random_tensor(SeededRng& rng, int n, int k, Variance var, int entries) {
    RatTensor t(n, k, var);
    auto idxs = increasing_multiindices(n, k);
    for (int e = 0; e < entries; ++e) {
        const auto& I = idxs[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(idxs.size()) - 1))];
        t.add_to(I, Rat(rng.uniform_int(-4, 4), rng.uniform_int(1, 3)));
    }
    return t;
}

RatTensor basis_mv(int n, std::vector<int> idx) {
    return RatTensor::basis(n, MultiIndex(std::move(idx)), Variance::Vector);
}

}  // namespace

TEST_CASE("multi-index normalization") {
    auto nrm = normalize_indices({3, 1, 2});
    CHECK(nrm.sign == 1);  // (3,1,2) is an even permutation of (1,2,3)
    CHECK(nrm.index == MultiIndex({1, 2, 3}));
    CHECK(normalize_indices({2, 1}).sign == -1);
    CHECK(normalize_indices({1, 1, 3}).sign == 0);
    CHECK_THROWS_AS(MultiIndex({2, 1}), StructuralError);
    CHECK_THROWS_AS(MultiIndex({0, 1}), StructuralError);
}

TEST_CASE("wedge basics") {
    RatTensor e1 = basis_mv(4, {1});
    RatTensor e2 = basis_mv(4, {2});
    RatTensor w = wedge(e1, e2);
    CHECK(w.coeff(MultiIndex({1, 2})) == 1);
    CHECK(w.coeffs().size() == 1);

    CHECK(wedge(e1, e1).is_zero());

    RatTensor e3 = basis_mv(4, {3});
    RatTensor e4 = basis_mv(4, {4});
    RatTensor sum = wedge(wedge(e1, e2), e3 + e4);
    RatTensor expect = wedge(wedge(e1, e2), e3) + wedge(wedge(e1, e2), e4);
    CHECK(sum == expect);
    CHECK(sum.coeff(MultiIndex({1, 2, 3})) == 1);
    CHECK(sum.coeff(MultiIndex({1, 2, 4})) == 1);

    RatTensor f1(3, 1, Variance::Covector);
    CHECK_THROWS_AS(wedge(e1, f1), StructuralError);
    RatTensor g1 = basis_mv(5, {1});
    CHECK_THROWS_AS(wedge(e1, g1), StructuralError);
}

TEST_CASE("graded anticommutativity, exact") {
    SeededRng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        int n = static_cast<int>(rng.uniform_int(2, 6));
        int p = static_cast<int>(rng.uniform_int(0, 2));
        int q = static_cast<int>(rng.uniform_int(0, 2));
        if (p + q > n) continue;
        RatTensor a = random_tensor(rng, n, p, Variance::Vector, 3);
        RatTensor b = random_tensor(rng, n, q, Variance::Vector, 3);
        RatTensor lhs = wedge(a, b);
        RatTensor rhs = wedge(b, a);
        if ((p * q) % 2 == 1) rhs *= Rat(-1);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("alternate matches the brute-force alternator") {
    // already alternating input
    std::map<std::vector<int>, Rat> raw1{{{1, 2}, Rat(1)}, {{2, 1}, Rat(-1)}};
    RatTensor t1 = alternate(3, 2, Variance::Vector, raw1);
    CHECK(t1.coeff(MultiIndex({1, 2})) == 1);
    CHECK(t1.coeffs().size() == 1);

    // repeated index
    std::map<std::vector<int>, Rat> raw2{{{1, 1}, Rat(5)}};
    CHECK(alternate(3, 2, Variance::Vector, raw2).is_zero());

    // single out-of-order tuple: frozen from the brute-force sum over S2
    std::map<std::vector<int>, Rat> raw3{{{2, 1}, Rat(1)}};
    RatTensor t3 = alternate(3, 2, Variance::Vector, raw3);
    CHECK(t3.coeff(MultiIndex({1, 2})) == Rat(-1, 2));
    CHECK(t3 == alternate_oracle(3, 2, raw3));

    // random raw tensors against the oracle
    SeededRng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        int n = static_cast<int>(rng.uniform_int(2, 5));
        int k = static_cast<int>(rng.uniform_int(1, 3));
        std::map<std::vector<int>, Rat> raw;
        for (int e = 0; e < 4; ++e) {
            std::vector<int> tuple;
            for (int i = 0; i < k; ++i) tuple.push_back(static_cast<int>(rng.uniform_int(1, n)));
            raw[tuple] += Rat(rng.uniform_int(-3, 3));
        }
        CHECK(alternate(n, k, Variance::Vector, raw) == alternate_oracle(n, k, raw));
    }

    CHECK_THROWS_AS(alternate(2, 2, Variance::Vector,
                              std::map<std::vector<int>, Rat>{{{1, 3}, Rat(1)}}),
                    StructuralError);
}

TEST_CASE("alternate is idempotent") {
    SeededRng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        int n = static_cast<int>(rng.uniform_int(2, 5));
        int k = static_cast<int>(rng.uniform_int(1, 3));
        std::map<std::vector<int>, Rat> raw;
        for (int e = 0; e < 5; ++e) {
            std::vector<int> tuple;
            for (int i = 0; i < k; ++i) tuple.push_back(static_cast<int>(rng.uniform_int(1, n)));
            raw[tuple] += Rat(rng.uniform_int(-3, 3), rng.uniform_int(1, 2));
        }
        RatTensor once = alternate(n, k, Variance::Vector, raw);
        // feed the alternating tensor back in, expanded to raw tuple form
        std::map<std::vector<int>, Rat> expanded;
        std::vector<int> perm(static_cast<std::size_t>(k));
        for (const auto& [I, c] : once.coeffs()) {
            std::iota(perm.begin(), perm.end(), 0);
            do {
                std::vector<int> tuple(static_cast<std::size_t>(k));
                for (int a = 0; a < k; ++a) tuple[static_cast<std::size_t>(a)] = I[perm[static_cast<std::size_t>(a)]];
                expanded[tuple] = perm_sign(perm) > 0 ? c : Rat(-c);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        CHECK(alternate(n, k, Variance::Vector, expanded) == once);
    }
}

TEST_CASE("interior product") {
    RatTensor lam = basis_mv(6, {1, 2, 3});

    RatTensor full(6, 3, Variance::Covector);
    full.set(MultiIndex({1, 2, 3}), Rat(1));
    RatTensor pair = interior(full, lam);
    CHECK(pair.degree() == 0);
    CHECK(pair.coeff(MultiIndex{}) == 1);

    RatTensor half(6, 2, Variance::Covector);
    half.set(MultiIndex({1, 2}), Rat(1));
    RatTensor rest = interior(half, lam);
    CHECK(rest == basis_mv(6, {3}));

    RatTensor disj(6, 3, Variance::Covector);
    disj.set(MultiIndex({4, 5, 6}), Rat(1));
    CHECK(interior(disj, lam).is_zero());

    RatTensor deep(6, 4, Variance::Covector);
    deep.set(MultiIndex({1, 2, 3, 4}), Rat(1));
    CHECK_THROWS_AS(interior(deep, lam), StructuralError);

    SeededRng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        int n = static_cast<int>(rng.uniform_int(2, 5));
        int q = static_cast<int>(rng.uniform_int(1, std::min(n, 4)));
        int p = static_cast<int>(rng.uniform_int(1, q));
        RatTensor mv = random_tensor(rng, n, q, Variance::Vector, 4);
        RatTensor form = random_tensor(rng, n, p, Variance::Covector, 3);
        CHECK(interior(form, mv) == interior_oracle(form, mv));
    }
}

TEST_CASE("evaluation against the determinant oracle") {
    RatTensor lam = basis_mv(3, {1, 2, 3});
    auto dx = [&](int i) { return unit_covector(3, i); };
    CHECK(eval_alt(lam, {dx(1), dx(2), dx(3)}) == 1);
    CHECK(eval_alt(lam, {dx(1), dx(1), dx(3)}) == 0);
    CHECK(eval_alt(lam, {dx(2), dx(1), dx(3)}) == -1);
    CHECK_THROWS_AS(eval_alt(lam, {dx(1), dx(2)}), StructuralError);

    SeededRng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        int n = static_cast<int>(rng.uniform_int(2, 6));
        int k = static_cast<int>(rng.uniform_int(1, std::min(4, n)));
        RatTensor t = random_tensor(rng, n, k, Variance::Vector, 4);
        std::vector<std::vector<Rat>> args;
        for (int a = 0; a < k; ++a) {
            std::vector<Rat> v(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = Rat(rng.uniform_int(-3, 3));
            args.push_back(std::move(v));
        }
        CHECK(eval_alt(t, args) == eval_oracle(t, args));
    }
}

TEST_CASE("evaluation is alternating under argument permutations, exhaustively") {
    SeededRng rng(29);
    for (int n = 2; n <= 8; n += 2) {
        for (int k = 1; k <= std::min(4, n); ++k) {
            RatTensor t = random_tensor(rng, n, k, Variance::Vector, 5);
            std::vector<std::vector<Rat>> args;
            for (int a = 0; a < k; ++a) {
                std::vector<Rat> v(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = Rat(rng.uniform_int(-2, 2));
                args.push_back(std::move(v));
            }
            Rat base = eval_alt(t, args);
            std::vector<int> perm(static_cast<std::size_t>(k));
            std::iota(perm.begin(), perm.end(), 0);
            do {
                std::vector<std::vector<Rat>> permuted;
                for (int a = 0; a < k; ++a) permuted.push_back(args[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])]);
                Rat expect = perm_sign(perm) > 0 ? base : Rat(-base);
                CHECK(eval_alt(t, permuted) == expect);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    }
}

TEST_CASE("full contraction agrees with dual-basis evaluation") {
    SeededRng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        int n = static_cast<int>(rng.uniform_int(2, 5));
        int k = static_cast<int>(rng.uniform_int(1, std::min(3, n)));
        RatTensor mv = random_tensor(rng, n, k, Variance::Vector, 4);
        for (const auto& K : increasing_multiindices(n, k)) {
            RatTensor form(n, k, Variance::Covector);
            form.set(K, Rat(1));
            std::vector<std::vector<Rat>> args;
            for (int i = 0; i < k; ++i) args.push_back(unit_covector(n, K[i]));
            CHECK(interior(form, mv).coeff(MultiIndex{}) == eval_alt(mv, args));
        }
    }
}

TEST_CASE("canonical sparse form drops zeros") {
    RatTensor t(3, 2, Variance::Vector);
    t.set(MultiIndex({1, 2}), Rat(2));
    t.add_to(MultiIndex({1, 2}), Rat(-2));
    CHECK(t.is_zero());
    t.add_raw({2, 1}, Rat(3));
    CHECK(t.coeff(MultiIndex({1, 2})) == -3);
    t.add_raw({1, 1}, Rat(7));
    CHECK(t.coeff(MultiIndex({1, 2})) == -3);
    CHECK(t.coeffs().size() == 1);
}
