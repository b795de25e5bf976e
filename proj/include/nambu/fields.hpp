#pragma once

#include "nambu/alt_tensor.hpp"
#include "nambu/jets.hpp"
#include "nambu/poly.hpp"

#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace nambu {

/// Axis-aligned open box in R^n; the concrete stand-in for the open sets all
/// fields and structures live on.
struct Box {
    std::vector<double> lo, hi;

    int n() const { return static_cast<int>(lo.size()); }
    bool contains(const std::vector<double>& x, double slack = 1e-12) const;
    std::vector<double> center() const;
    double min_edge() const;
    static Box cube(int n, double half_width);
    Box shrunk(double factor) const;
};

/// Smooth scalar function on a box: exact sparse polynomial or a black-box
/// 2-jet evaluator.  The two backends never mix inside one expression.
class ScalarField {
public:
    ScalarField() : n_(0), body_(ExactPoly(0)) {}
    ScalarField(int n, ExactPoly p) : n_(n), body_(std::move(p)) {
        if (std::get<ExactPoly>(body_).n() != n)
            throw StructuralError("ScalarField: polynomial dimension mismatch");
    }
    ScalarField(int n, NumericFn f) : n_(n), body_(std::move(f)) {}

    static ScalarField constant(int n, Rat c) { return {n, ExactPoly::constant(n, std::move(c))}; }
    static ScalarField coordinate(int n, int index) {
        return {n, ExactPoly::variable(n, index)};
    }

    int n() const { return n_; }
    bool is_exact() const { return std::holds_alternative<ExactPoly>(body_); }
    bool is_zero() const { return is_exact() && poly().is_zero(); }

    const ExactPoly& poly() const {
        if (!is_exact())
            throw UnsupportedModeError("ScalarField: symbolic operation on numeric field");
        return std::get<ExactPoly>(body_);
    }

    Jet2 jet(const std::vector<double>& x) const;
    double value(const std::vector<double>& x) const;
    Rat value_exact(const std::vector<Rat>& x) const { return poly().eval(x); }

    ScalarField derivative(int var) const { return {n_, poly().derivative(var)}; }

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b) {
        return {a.n_, a.poly() + b.poly()};
    }
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b) {
        return {a.n_, a.poly() - b.poly()};
    }
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b) {
        return {a.n_, a.poly() * b.poly()};
    }
    friend ScalarField operator*(const Rat& s, const ScalarField& a) {
        return {a.n_, s * a.poly()};
    }
    ScalarField operator-() const { return {n_, -poly()}; }

    bool operator==(const ScalarField& o) const {
        return n_ == o.n_ && is_exact() && o.is_exact() && poly() == o.poly();
    }

private:
    int n_;
    std::variant<ExactPoly, NumericFn> body_;
};

/// Jet evaluation with a domain check against the declared box.
Jet2 eval_scalar(const ScalarField& f, const std::vector<double>& x, const Box& box);

class VectorField {
public:
    VectorField() = default;
    VectorField(int n, std::vector<ScalarField> components)
        : n_(n), comps_(std::move(components)) {
        if (static_cast<int>(comps_.size()) != n)
            throw StructuralError("VectorField: component count must equal n");
    }

    static VectorField zero(int n);
    /// Constant field along coordinate axis `index` (1-based).
    static VectorField basis(int n, int index);

    int n() const { return n_; }
    const ScalarField& component(int i) const { return comps_[static_cast<std::size_t>(i - 1)]; }
    const std::vector<ScalarField>& components() const { return comps_; }
    bool is_exact() const;
    bool is_zero() const;

    std::vector<double> eval(const std::vector<double>& x) const;

    /// Directional derivative X(g), exact mode.
    ScalarField apply(const ScalarField& g) const;

    friend VectorField operator+(const VectorField& a, const VectorField& b);
    friend VectorField operator-(const VectorField& a, const VectorField& b);
    friend VectorField operator*(const ScalarField& h, const VectorField& X);
    friend VectorField operator*(const Rat& s, const VectorField& X);

    bool operator==(const VectorField& o) const { return n_ == o.n_ && comps_ == o.comps_; }

private:
    int n_ = 0;
    std::vector<ScalarField> comps_;
};

/// Field of alternating tensors: sparse increasing multi-indices with
/// ScalarField coefficients.  Covector variance models differential forms,
/// vector variance models multivector fields.
class TensorField {
public:
    TensorField(int n, int degree, Variance var) : n_(n), degree_(degree), var_(var) {}

    static TensorField zero(int n, int degree, Variance var) { return {n, degree, var}; }
    static TensorField basis(int n, const MultiIndex& I, Variance var,
                             ScalarField coefficient);

    int n() const { return n_; }
    int degree() const { return degree_; }
    Variance variance() const { return var_; }
    const std::map<MultiIndex, ScalarField>& coeffs() const { return coeffs_; }
    bool is_exact() const;
    /// Exact zero test; requires exact coefficients.
    bool is_zero() const;

    ScalarField coeff(const MultiIndex& I) const;
    void set(const MultiIndex& I, ScalarField value);
    void add_to(const MultiIndex& I, const ScalarField& value);

    RatTensor eval_exact(const std::vector<Rat>& x) const;
    NumTensor eval(const std::vector<double>& x) const;
    /// Coefficient-wise 1-jets at x, for sampled identity checks.
    AltTensor<Jet1> eval_jet1(const std::vector<double>& x) const;

    friend TensorField operator+(const TensorField& a, const TensorField& b);
    friend TensorField operator-(const TensorField& a, const TensorField& b);
    friend TensorField operator*(const ScalarField& h, const TensorField& t);
    friend TensorField operator*(const Rat& s, const TensorField& t);
    TensorField operator-() const;

    bool operator==(const TensorField& o) const;

private:
    int n_;
    int degree_;
    Variance var_;
    std::map<MultiIndex, ScalarField> coeffs_;
};

using FormField = TensorField;        // covector variance
using MultiVectorField = TensorField; // vector variance

/// d of a scalar: the exact differential, or a first-order numeric 1-form.
FormField differential(const ScalarField& f);

/// Exterior derivative of a k-form with exact coefficients.
FormField d_form(const FormField& alpha);

/// Wedge of two tensor fields of equal variance (exact coefficients).
TensorField wedge(const TensorField& a, const TensorField& b);

/// Wedge of vector fields into a decomposable multivector field.
MultiVectorField wedge_fields(const std::vector<VectorField>& xs);

/// Interior product of a vector field into the first slot of a form.
FormField interior_vector(const VectorField& X, const FormField& alpha);

/// Contracts a degree-p form field into the first p slots of a degree-q
/// multivector field (p <= q).
TensorField interior_form(const FormField& alpha, const MultiVectorField& mv);

/// Full pairing of a degree-k form with a degree-k multivector field.
ScalarField full_contraction(const FormField& alpha, const MultiVectorField& mv);

/// Commutator of vector fields, exact mode.
VectorField lie_bracket(const VectorField& X, const VectorField& Y);

/// Pointwise commutator from 1-jets; works for numeric components.
std::vector<double> lie_bracket_at(const VectorField& X, const VectorField& Y,
                                   const std::vector<double>& x);

/// L_X Lambda evaluated on exact differentials dg_1..dg_r:
///   d(Lambda(dg_1..dg_r))(X) - sum_i Lambda(dg_1,..,d(dg_i(X)),..,dg_r).
ScalarField lie_derivative_multivector(const VectorField& X, const MultiVectorField& mv,
                                       const std::vector<ScalarField>& gs);

/// Cartan formula L_X alpha = i_X d(alpha) + d(i_X alpha), exact mode.
FormField lie_derivative_form(const VectorField& X, const FormField& alpha);

}  // namespace nambu
