#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace nambu {

// Exact scalar backend.  All symbolic computation (polynomials, tensors,
// identity checks) runs over Rat; numeric kernels (flows, charts, SVD ranks)
// run over double.  The two are never mixed inside one tensor.
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

inline Rat rat(std::int64_t num, std::int64_t den = 1) { return Rat(num, den); }

std::string rat_to_string(const Rat& q);

// Shared zero/one tests so templated tensor code works for both backends.
inline bool scalar_is_zero(const Rat& q) { return q.is_zero(); }
inline bool scalar_is_zero(double x) { return x == 0.0; }

}  // namespace nambu
