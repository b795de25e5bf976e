#pragma once

#include "nambu/errors.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace nambu {

/// Strictly increasing list of coordinate indices in 1..n.  A MultiIndex of
/// length k labels one basis element of the degree-k exterior power.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> increasing) : idx_(std::move(increasing)) {
        for (std::size_t i = 0; i + 1 < idx_.size(); ++i)
            if (idx_[i] >= idx_[i + 1])
                throw StructuralError("MultiIndex: indices must be strictly increasing");
        if (!idx_.empty() && idx_.front() < 1)
            throw StructuralError("MultiIndex: indices are 1-based");
    }

    static MultiIndex empty() { return MultiIndex(); }

    int degree() const { return static_cast<int>(idx_.size()); }
    int max_index() const { return idx_.empty() ? 0 : idx_.back(); }
    const std::vector<int>& indices() const { return idx_; }
    int operator[](int i) const { return idx_[static_cast<std::size_t>(i)]; }

    bool contains(int index) const {
        return std::binary_search(idx_.begin(), idx_.end(), index);
    }

    /// Position of `index` inside the list, or -1.
    int position_of(int index) const {
        auto it = std::lower_bound(idx_.begin(), idx_.end(), index);
        if (it == idx_.end() || *it != index) return -1;
        return static_cast<int>(it - idx_.begin());
    }

    auto operator<=>(const MultiIndex&) const = default;

    std::string to_string() const;

private:
    std::vector<int> idx_;
};

/// Normalizes a raw index tuple.  Returns sign 0 for a repeated index,
/// otherwise the parity of the sort permutation and the sorted MultiIndex.
struct NormalizedIndex {
    MultiIndex index;
    int sign = 0;  // -1, 0, +1
};

NormalizedIndex normalize_indices(const std::vector<int>& raw);

/// Sign of the interleave (a, b) -> sorted union, or 0 when a and b overlap.
/// This is the coefficient sign in a basis wedge e_a ^ e_b = sign * e_{a u b}.
struct MergedIndex {
    MultiIndex index;
    int sign = 0;
};

MergedIndex merge_indices(const MultiIndex& a, const MultiIndex& b);

/// Splits `whole` as (sub, rest) and reports the permutation sign of
/// reordering `whole` into the concatenation (sub, rest).  Requires
/// sub to be contained in whole.
struct SplitIndex {
    MultiIndex rest;
    int sign = 0;
};

SplitIndex split_index(const MultiIndex& whole, const MultiIndex& sub);

/// Sign of inserting single index k into `rest` (k not in rest), i.e. the
/// coefficient in e_k ^ e_rest = sign * e_{rest u k}.
int insertion_sign(int k, const MultiIndex& rest);

/// All strictly increasing k-subsets of {1..n}, lexicographic order.
std::vector<MultiIndex> increasing_multiindices(int n, int k);

}  // namespace nambu
