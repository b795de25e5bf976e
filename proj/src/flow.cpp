#include "nambu/flow.hpp"

#include <cmath>

namespace nambu {

namespace {

std::vector<double> axpy(const std::vector<double>& x, double a, const std::vector<double>& d) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + a * d[i];
    return y;
}

// one RK4 step
std::vector<double> rk4_step(const VectorField& X, const std::vector<double>& x, double h) {
    std::vector<double> k1 = X.eval(x);
    std::vector<double> k2 = X.eval(axpy(x, 0.5 * h, k1));
    std::vector<double> k3 = X.eval(axpy(x, 0.5 * h, k2));
    std::vector<double> k4 = X.eval(axpy(x, h, k3));
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = x[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return y;
}

std::vector<double> integrate(const VectorField& X, std::vector<double> x, double t,
                              int steps, const std::optional<Box>& box) {
    const double h = t / steps;
    for (int s = 0; s < steps; ++s) {
        std::vector<double> next = rk4_step(X, x, h);
        if (box && !box->contains(next, 1e-9 + 1e-9 * std::abs(t)))
            throw FlowError("flow: trajectory left the domain box", x);
        x = std::move(next);
    }
    return x;
}

}  // namespace

FlowResult flow(const VectorField& X, const std::vector<double>& x0, double t,
                const FlowOptions& opts) {
    if (static_cast<int>(x0.size()) != X.n())
        throw StructuralError("flow: point dimension mismatch");
    if (!std::isfinite(t)) throw StructuralError("flow: time must be finite");
    if (opts.box && !opts.box->contains(x0))
        throw FlowError("flow: initial point outside the domain box", x0);
    if (t == 0.0) return {x0, 0.0, 0};

    int steps = static_cast<int>(std::ceil(std::abs(t) / opts.step));
    if (steps < 1) steps = 1;

    std::vector<double> coarse = integrate(X, x0, t, steps, opts.box);
    std::vector<double> fine = integrate(X, x0, t, 2 * steps, opts.box);
    double err = 0;
    for (std::size_t i = 0; i < coarse.size(); ++i)
        err = std::max(err, std::abs(coarse[i] - fine[i]) / 15.0);
    if (err > opts.tol)
        throw FlowError("flow: Richardson step check failed", fine);
    return {fine, err, 2 * steps};
}

}  // namespace nambu
