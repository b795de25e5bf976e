#include "nambu/rng.hpp"

namespace nambu {

ExactPoly SeededRng::polynomial(int n, const std::vector<int>& vars, int deg, int coeff_range) {
    // enumerate monomials in the allowed variables up to total degree
    std::vector<Monomial> pool;
    std::vector<Monomial> frontier{Monomial{}};
    pool.push_back(Monomial{});
    for (int d = 1; d <= deg; ++d) {
        std::vector<Monomial> next;
        for (const auto& m : frontier) {
            for (int v : vars) {
                Monomial w = m;
                ++w.e[static_cast<std::size_t>(v - 1)];
                next.push_back(w);
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        pool.insert(pool.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    ExactPoly p(n);
    for (const auto& m : pool) {
        std::int64_t num = uniform_int(-coeff_range, coeff_range);
        if (num == 0) continue;
        std::int64_t den = uniform_int(1, 2);
        p.add_term(m, Rat(num, den));
    }
    return p;
}

}  // namespace nambu
