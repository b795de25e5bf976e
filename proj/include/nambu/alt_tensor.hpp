#pragma once

#include "nambu/errors.hpp"
#include "nambu/multiindex.hpp"
#include "nambu/scalars.hpp"

#include <map>
#include <sstream>
#include <vector>

namespace nambu {

enum class Variance { Vector, Covector };

/// Point-wise alternating tensor over R^n in canonical sparse form: a map
/// from increasing multi-indices of length `degree` to nonzero coefficients.
/// Degree 0 is a scalar (single coefficient at the empty index).
///
/// Pairing normalization: dual increasing-multi-index bases pair to exactly 1,
/// so eval on basis covectors reads coefficients directly (up to permutation
/// sign) and full contractions carry no factorial factors.
template <class S>
class AltTensor {
public:
    AltTensor(int n, int degree, Variance var)
        : n_(n), degree_(degree), var_(var) {
        if (n < 0 || degree < 0) throw StructuralError("AltTensor: negative shape");
    }

    static AltTensor zero(int n, int degree, Variance var) { return AltTensor(n, degree, var); }

    static AltTensor basis(int n, const MultiIndex& I, Variance var, S coeff = S(1)) {
        AltTensor t(n, I.degree(), var);
        t.set(I, std::move(coeff));
        return t;
    }

    int n() const { return n_; }
    int degree() const { return degree_; }
    Variance variance() const { return var_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<MultiIndex, S>& coeffs() const { return coeffs_; }

    S coeff(const MultiIndex& I) const {
        auto it = coeffs_.find(I);
        return it == coeffs_.end() ? S(0) : it->second;
    }

    /// Inserts with canonical-form maintenance: zero coefficients are dropped.
    void set(const MultiIndex& I, S value) {
        check_index(I);
        if (scalar_is_zero(value))
            coeffs_.erase(I);
        else
            coeffs_[I] = std::move(value);
    }

    void add_to(const MultiIndex& I, const S& value) {
        check_index(I);
        if (scalar_is_zero(value)) return;
        auto [it, fresh] = coeffs_.try_emplace(I, value);
        if (!fresh) {
            it->second += value;
            if (scalar_is_zero(it->second)) coeffs_.erase(it);
        }
    }

    /// Accepts an arbitrary (possibly unsorted / repeated) index tuple.
    void add_raw(const std::vector<int>& raw, const S& value) {
        auto nrm = normalize_indices(raw);
        if (nrm.sign == 0) return;
        add_to(nrm.index, nrm.sign > 0 ? value : S(-value));
    }

    AltTensor& operator+=(const AltTensor& other) {
        require_same_shape(other);
        for (const auto& [I, c] : other.coeffs_) add_to(I, c);
        return *this;
    }
    AltTensor& operator-=(const AltTensor& other) {
        require_same_shape(other);
        for (const auto& [I, c] : other.coeffs_) add_to(I, S(-c));
        return *this;
    }
    AltTensor& operator*=(const S& s) {
        if (scalar_is_zero(s)) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [I, c] : coeffs_) c *= s;
        return *this;
    }

    friend AltTensor operator+(AltTensor a, const AltTensor& b) { return a += b; }
    friend AltTensor operator-(AltTensor a, const AltTensor& b) { return a -= b; }
    friend AltTensor operator*(AltTensor a, const S& s) { return a *= s; }
    friend AltTensor operator*(const S& s, AltTensor a) { return a *= s; }

    bool operator==(const AltTensor& other) const {
        return n_ == other.n_ && degree_ == other.degree_ && var_ == other.var_ &&
               coeffs_ == other.coeffs_;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << (var_ == Variance::Vector ? "mv" : "form") << degree_ << "[";
        bool first = true;
        for (const auto& [I, c] : coeffs_) {
            if (!first) os << ", ";
            first = false;
            os << "{" << I.to_string() << "}:" << scalar_repr(c);
        }
        os << "]";
        return os.str();
    }

private:
    static std::string scalar_repr(const Rat& q) { return rat_to_string(q); }
    static std::string scalar_repr(double x) { return std::to_string(x); }

    void check_index(const MultiIndex& I) const {
        if (I.degree() != degree_)
            throw StructuralError("AltTensor: multi-index degree mismatch");
        if (I.max_index() > n_)
            throw StructuralError("AltTensor: index exceeds ambient dimension");
    }
    void require_same_shape(const AltTensor& other) const {
        if (n_ != other.n_ || degree_ != other.degree_ || var_ != other.var_)
            throw StructuralError("AltTensor: shape or variance mismatch");
    }

    int n_;
    int degree_;
    Variance var_;
    std::map<MultiIndex, S> coeffs_;
};

/// Graded wedge product.  Bilinear, associative, and wedge(a,b) equals
/// (-1)^{deg a * deg b} wedge(b,a).  Degree overflow past n yields zero.
template <class S>
AltTensor<S> wedge(const AltTensor<S>& a, const AltTensor<S>& b) {
    if (a.n() != b.n() || a.variance() != b.variance())
        throw StructuralError("wedge: dimension or variance mismatch");
    AltTensor<S> out(a.n(), a.degree() + b.degree(), a.variance());
    if (a.degree() + b.degree() > a.n()) return out;
    for (const auto& [I, ci] : a.coeffs()) {
        for (const auto& [J, cj] : b.coeffs()) {
            auto merged = merge_indices(I, J);
            if (merged.sign == 0) continue;
            S term = ci * cj;
            out.add_to(merged.index, merged.sign > 0 ? term : S(-term));
        }
    }
    return out;
}

/// Alternation of a raw k-tensor given by ordered index tuples: the image of
/// (1/k!) sum_sigma eps(sigma) sigma(t), in canonical sparse form.  Idempotent
/// on input that is already alternating.
template <class S>
AltTensor<S> alternate(int n, int k, Variance var,
                       const std::map<std::vector<int>, S>& raw) {
    AltTensor<S> out(n, k, var);
    if (k == 0) {
        for (const auto& [tuple, c] : raw) {
            if (!tuple.empty()) throw StructuralError("alternate: tuple length mismatch");
            out.add_to(MultiIndex{}, c);
        }
        return out;
    }
    S factorial(1);
    for (int i = 2; i <= k; ++i) factorial *= S(i);
    for (const auto& [tuple, c] : raw) {
        if (static_cast<int>(tuple.size()) != k)
            throw StructuralError("alternate: tuple length mismatch");
        for (int v : tuple)
            if (v < 1 || v > n) throw StructuralError("alternate: index out of range");
        auto nrm = normalize_indices(tuple);
        if (nrm.sign == 0) continue;
        S term = c / factorial;
        out.add_to(nrm.index, nrm.sign > 0 ? term : S(-term));
    }
    return out;
}

/// Interior product: contracts a degree-p covector-type tensor into the first
/// p slots of a degree-q vector-type tensor (p <= q).  For p == q this is the
/// full dual pairing, returned as a degree-0 tensor.
template <class S>
AltTensor<S> interior(const AltTensor<S>& form, const AltTensor<S>& mv) {
    if (form.n() != mv.n()) throw StructuralError("interior: dimension mismatch");
    if (form.variance() != Variance::Covector || mv.variance() != Variance::Vector)
        throw StructuralError("interior: expects covector form into vector tensor");
    if (form.degree() > mv.degree())
        throw StructuralError("interior: form degree exceeds tensor degree");
    AltTensor<S> out(mv.n(), mv.degree() - form.degree(), Variance::Vector);
    for (const auto& [I, cl] : mv.coeffs()) {
        for (const auto& [J, cf] : form.coeffs()) {
            bool contained = true;
            for (int v : J.indices())
                if (!I.contains(v)) {
                    contained = false;
                    break;
                }
            if (!contained) continue;
            auto split = split_index(I, J);
            S term = cf * cl;
            out.add_to(split.rest, split.sign > 0 ? term : S(-term));
        }
    }
    return out;
}

namespace detail {
template <class S>
S det_recursive(const std::vector<std::vector<S>>& m, std::vector<int>& cols, int row) {
    const int k = static_cast<int>(m.size());
    if (row == k) return S(1);
    S acc(0);
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
        int col = cols[ci];
        if (col < 0) continue;
        const S& entry = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
        if (scalar_is_zero(entry)) continue;
        cols[ci] = -1;
        S sub = det_recursive(m, cols, row + 1);
        cols[ci] = col;
        int active_before = 0;
        for (std::size_t cj = 0; cj < ci; ++cj)
            if (cols[cj] >= 0) ++active_before;
        S term = entry * sub;
        acc += (active_before % 2 == 0) ? term : S(-term);
    }
    return acc;
}
}  // namespace detail

/// Exact k x k determinant of the minor picking columns I from k row vectors.
template <class S>
S det_minor(const std::vector<std::vector<S>>& args, const MultiIndex& I) {
    const int k = I.degree();
    std::vector<std::vector<S>> m(static_cast<std::size_t>(k),
                                  std::vector<S>(static_cast<std::size_t>(k)));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                args[static_cast<std::size_t>(a)][static_cast<std::size_t>(I[b] - 1)];
    std::vector<int> cols(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cols[static_cast<std::size_t>(i)] = i;
    return detail::det_recursive(m, cols, 0);
}

/// Full pairing of a degree-k tensor with k arguments of the opposite
/// variance, each given as a dense length-n coordinate vector.  Equals the
/// determinant expansion sum_I t_I det[ args[a][I_b] ].
template <class S>
S eval_alt(const AltTensor<S>& t, const std::vector<std::vector<S>>& args) {
    const int k = t.degree();
    if (static_cast<int>(args.size()) != k)
        throw StructuralError("eval_alt: arity mismatch");
    for (const auto& a : args)
        if (static_cast<int>(a.size()) != t.n())
            throw StructuralError("eval_alt: argument dimension mismatch");
    if (k == 0) return t.coeff(MultiIndex{});
    S total(0);
    for (const auto& [I, c] : t.coeffs()) total += c * det_minor(args, I);
    return total;
}

using RatTensor = AltTensor<Rat>;
using NumTensor = AltTensor<double>;

/// Converts an exact tensor to the double backend (for numeric kernels).
NumTensor to_numeric(const RatTensor& t);

}  // namespace nambu
