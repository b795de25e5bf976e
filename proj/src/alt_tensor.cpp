#include "nambu/alt_tensor.hpp"

namespace nambu {

NumTensor to_numeric(const RatTensor& t) {
    NumTensor out(t.n(), t.degree(), t.variance());
    for (const auto& [I, c] : t.coeffs()) out.set(I, to_double(c));
    return out;
}

}  // namespace nambu
