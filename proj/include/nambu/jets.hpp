#pragma once

#include "nambu/errors.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace nambu {

/// 2-jet of a scalar function at a point: value, gradient, symmetric Hessian
/// (row-major n*n).  hess_valid is false for jets derived from first-order
/// data (e.g. coefficients of a numeric differential).
struct Jet2 {
    double value = 0;
    std::vector<double> grad;
    std::vector<double> hess;
    bool hess_valid = true;

    int n() const { return static_cast<int>(grad.size()); }
    double h(int i, int j) const {
        return hess[static_cast<std::size_t>(i) * grad.size() + static_cast<std::size_t>(j)];
    }
    double& h(int i, int j) {
        return hess[static_cast<std::size_t>(i) * grad.size() + static_cast<std::size_t>(j)];
    }

    static Jet2 zero(int n) {
        Jet2 j;
        j.grad.assign(static_cast<std::size_t>(n), 0.0);
        j.hess.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
        return j;
    }
};

/// Checks relative symmetry of the Hessian; numeric evaluators must stay
/// within 1e-10 relative.
bool jet_hessian_symmetric(const Jet2& j, double rel_tol = 1e-10);

using NumericFn = std::function<Jet2(const std::vector<double>&)>;

/// Truncated first-order jet used by sampled identity checks.
struct Jet1 {
    double v = 0;
    std::vector<double> g;

    static Jet1 zero(int n) { return {0.0, std::vector<double>(static_cast<std::size_t>(n), 0.0)}; }
    static Jet1 constant(int n, double c) {
        Jet1 j = zero(n);
        j.v = c;
        return j;
    }

    Jet1& operator+=(const Jet1& o) {
        v += o.v;
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.g[i];
        return *this;
    }
    Jet1& operator-=(const Jet1& o) {
        v -= o.v;
        for (std::size_t i = 0; i < g.size(); ++i) g[i] -= o.g[i];
        return *this;
    }
    friend Jet1 operator+(Jet1 a, const Jet1& b) { return a += b; }
    friend Jet1 operator-(Jet1 a, const Jet1& b) { return a -= b; }
    friend Jet1 operator*(const Jet1& a, const Jet1& b) {
        Jet1 out = zero(static_cast<int>(a.g.size()));
        out.v = a.v * b.v;
        for (std::size_t i = 0; i < a.g.size(); ++i) out.g[i] = a.v * b.g[i] + b.v * a.g[i];
        return out;
    }
    friend Jet1 operator*(double s, Jet1 a) {
        a.v *= s;
        for (auto& x : a.g) x *= s;
        return a;
    }
};

inline bool scalar_is_zero(const Jet1& j) {
    if (j.v != 0.0) return false;
    for (double x : j.g)
        if (x != 0.0) return false;
    return true;
}

}  // namespace nambu
