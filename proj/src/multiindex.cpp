#include "nambu/multiindex.hpp"

#include <numeric>
#include <sstream>

namespace nambu {

std::string MultiIndex::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < idx_.size(); ++i) {
        if (i) os << ',';
        os << idx_[i];
    }
    return os.str();
}

NormalizedIndex normalize_indices(const std::vector<int>& raw) {
    std::vector<int> v = raw;
    int sign = 1;
    // insertion sort, counting transpositions
    for (std::size_t i = 1; i < v.size(); ++i) {
        int x = v[i];
        std::size_t j = i;
        while (j > 0 && v[j - 1] > x) {
            v[j] = v[j - 1];
            --j;
            sign = -sign;
        }
        v[j] = x;
    }
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] == v[i + 1]) return {MultiIndex{}, 0};
    return {MultiIndex(std::move(v)), sign};
}

MergedIndex merge_indices(const MultiIndex& a, const MultiIndex& b) {
    const auto& u = a.indices();
    const auto& w = b.indices();
    std::vector<int> merged;
    merged.reserve(u.size() + w.size());
    int sign = 1;
    std::size_t i = 0, j = 0;
    while (i < u.size() && j < w.size()) {
        if (u[i] == w[j]) return {MultiIndex{}, 0};
        if (u[i] < w[j]) {
            merged.push_back(u[i++]);
        } else {
            // w[j] jumps over the remaining u entries
            if ((u.size() - i) % 2 != 0) sign = -sign;
            merged.push_back(w[j++]);
        }
    }
    while (i < u.size()) merged.push_back(u[i++]);
    while (j < w.size()) merged.push_back(w[j++]);
    return {MultiIndex(std::move(merged)), sign};
}

SplitIndex split_index(const MultiIndex& whole, const MultiIndex& sub) {
    std::vector<int> rest;
    rest.reserve(static_cast<std::size_t>(whole.degree() - sub.degree()));
    // Sign of moving the sub entries to the front of `whole`, keeping order.
    // Each sub entry at position p with s earlier sub entries contributes
    // (p - s) transpositions.
    int sign = 1;
    int taken = 0;
    for (int p = 0; p < whole.degree(); ++p) {
        int k = whole[p];
        if (sub.contains(k)) {
            if ((p - taken) % 2 != 0) sign = -sign;
            ++taken;
        } else {
            rest.push_back(k);
        }
    }
    if (taken != sub.degree())
        throw StructuralError("split_index: sub is not contained in whole");
    return {MultiIndex(std::move(rest)), sign};
}

int insertion_sign(int k, const MultiIndex& rest) {
    int before = 0;
    for (int v : rest.indices())
        if (v < k) ++before;
    return before % 2 == 0 ? 1 : -1;
}

std::vector<MultiIndex> increasing_multiindices(int n, int k) {
    std::vector<MultiIndex> out;
    if (k < 0 || k > n) return out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    std::iota(cur.begin(), cur.end(), 1);
    if (k == 0) {
        out.push_back(MultiIndex{});
        return out;
    }
    while (true) {
        out.push_back(MultiIndex(cur));
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - (k - 1 - i)) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

}  // namespace nambu
