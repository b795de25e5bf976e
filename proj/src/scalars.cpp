#include "nambu/scalars.hpp"

#include <sstream>

namespace nambu {

std::string rat_to_string(const Rat& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << '/' << denominator(q);
    return os.str();
}

}  // namespace nambu
