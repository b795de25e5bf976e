#pragma once

#include "nambu/fields.hpp"

#include <optional>
#include <vector>

namespace nambu {

struct FlowOptions {
    double step = 1.0 / 256.0;   // base step size (callers scale by box edge)
    double tol = 1e-9;           // Richardson error budget for the whole flow
    std::optional<Box> box;      // optional containment check along the way
};

struct FlowResult {
    std::vector<double> point;
    double error_estimate = 0;
    int steps = 0;
};

/// Integrates the flow of X from x0 for time t with fixed-step RK4, then
/// re-integrates at half step; the Richardson comparison |y_h - y_{h/2}|/15
/// must stay below tol.  Leaving the box or failing the check raises
/// FlowError carrying the last valid state.
FlowResult flow(const VectorField& X, const std::vector<double>& x0, double t,
                const FlowOptions& opts = {});

}  // namespace nambu
