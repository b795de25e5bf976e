#include "nambu/fields.hpp"

#include <algorithm>
#include <cmath>

namespace nambu {

bool Box::contains(const std::vector<double>& x, double slack) const {
    if (x.size() != lo.size()) return false;
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    return true;
}

std::vector<double> Box::center() const {
    std::vector<double> c(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
}

double Box::min_edge() const {
    double e = hi.empty() ? 0.0 : hi[0] - lo[0];
    for (std::size_t i = 1; i < lo.size(); ++i) e = std::min(e, hi[i] - lo[i]);
    return e;
}

Box Box::cube(int n, double half_width) {
    Box b;
    b.lo.assign(static_cast<std::size_t>(n), -half_width);
    b.hi.assign(static_cast<std::size_t>(n), half_width);
    return b;
}

Box Box::shrunk(double factor) const {
    Box b = *this;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        double c = 0.5 * (lo[i] + hi[i]);
        double h = 0.5 * (hi[i] - lo[i]) * factor;
        b.lo[i] = c - h;
        b.hi[i] = c + h;
    }
    return b;
}

bool jet_hessian_symmetric(const Jet2& j, double rel_tol) {
    const int n = j.n();
    double scale = 0;
    for (double v : j.hess) scale = std::max(scale, std::abs(v));
    if (scale == 0) return true;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (std::abs(j.h(a, b) - j.h(b, a)) > rel_tol * scale) return false;
    return true;
}

namespace {

Jet2 jet_of_poly(const ExactPoly& p, const std::vector<double>& x) {
    const int n = p.n();
    Jet2 j = Jet2::zero(n);
    for (const auto& t : p.terms()) {
        const double c = to_double(t.c);
        // value
        double v = c;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < t.m.e[static_cast<std::size_t>(i)]; ++k)
                v *= x[static_cast<std::size_t>(i)];
        j.value += v;
        // first and second partials, computed monomial-wise
        auto partial = [&](int a, int b) {
            // derivative of the monomial by x_a then x_b (b < 0: first order)
            std::array<int, kMaxVars> e{};
            for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = t.m.e[static_cast<std::size_t>(i)];
            double factor = c;
            factor *= e[static_cast<std::size_t>(a)];
            if (e[static_cast<std::size_t>(a)] == 0) return 0.0;
            --e[static_cast<std::size_t>(a)];
            if (b >= 0) {
                factor *= e[static_cast<std::size_t>(b)];
                if (e[static_cast<std::size_t>(b)] == 0) return 0.0;
                --e[static_cast<std::size_t>(b)];
            }
            double w = factor;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k)
                    w *= x[static_cast<std::size_t>(i)];
            return w;
        };
        for (int a = 0; a < n; ++a) {
            if (t.m.e[static_cast<std::size_t>(a)] == 0) continue;
            j.grad[static_cast<std::size_t>(a)] += partial(a, -1);
            for (int b = 0; b < n; ++b) {
                double w = partial(a, b);
                if (w != 0.0) j.h(a, b) += w;
            }
        }
    }
    return j;
}

}  // namespace

Jet2 ScalarField::jet(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw StructuralError("ScalarField: point dimension mismatch");
    if (is_exact()) return jet_of_poly(poly(), x);
    Jet2 j = std::get<NumericFn>(body_)(x);
    if (j.n() != n_) throw StructuralError("ScalarField: numeric jet dimension mismatch");
    if (j.hess_valid && !jet_hessian_symmetric(j))
        throw StructuralError("ScalarField: numeric Hessian is not symmetric");
    return j;
}

double ScalarField::value(const std::vector<double>& x) const {
    if (is_exact()) return poly().eval(x);
    return jet(x).value;
}

Jet2 eval_scalar(const ScalarField& f, const std::vector<double>& x, const Box& box) {
    if (!box.contains(x)) throw DomainError("eval_scalar: point outside domain box");
    return f.jet(x);
}

VectorField VectorField::zero(int n) {
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) comps.push_back(ScalarField::constant(n, Rat(0)));
    return {n, std::move(comps)};
}

VectorField VectorField::basis(int n, int index) {
    VectorField out = zero(n);
    out.comps_[static_cast<std::size_t>(index - 1)] = ScalarField::constant(n, Rat(1));
    return out;
}

bool VectorField::is_exact() const {
    return std::all_of(comps_.begin(), comps_.end(),
                       [](const ScalarField& f) { return f.is_exact(); });
}

bool VectorField::is_zero() const {
    return std::all_of(comps_.begin(), comps_.end(),
                       [](const ScalarField& f) { return f.is_zero(); });
}

std::vector<double> VectorField::eval(const std::vector<double>& x) const {
    std::vector<double> v(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) v[static_cast<std::size_t>(i)] = comps_[static_cast<std::size_t>(i)].value(x);
    return v;
}

ScalarField VectorField::apply(const ScalarField& g) const {
    ScalarField acc = ScalarField::constant(n_, Rat(0));
    for (int i = 1; i <= n_; ++i) acc = acc + component(i) * g.derivative(i);
    return acc;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    if (a.n_ != b.n_) throw StructuralError("VectorField: dimension mismatch");
    std::vector<ScalarField> comps;
    comps.reserve(a.comps_.size());
    for (std::size_t i = 0; i < a.comps_.size(); ++i) comps.push_back(a.comps_[i] + b.comps_[i]);
    return {a.n_, std::move(comps)};
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    if (a.n_ != b.n_) throw StructuralError("VectorField: dimension mismatch");
    std::vector<ScalarField> comps;
    comps.reserve(a.comps_.size());
    for (std::size_t i = 0; i < a.comps_.size(); ++i) comps.push_back(a.comps_[i] - b.comps_[i]);
    return {a.n_, std::move(comps)};
}

VectorField operator*(const ScalarField& h, const VectorField& X) {
    std::vector<ScalarField> comps;
    comps.reserve(X.comps_.size());
    for (const auto& c : X.comps_) comps.push_back(h * c);
    return {X.n_, std::move(comps)};
}

VectorField operator*(const Rat& s, const VectorField& X) {
    std::vector<ScalarField> comps;
    comps.reserve(X.comps_.size());
    for (const auto& c : X.comps_) comps.push_back(s * c);
    return {X.n_, std::move(comps)};
}

TensorField TensorField::basis(int n, const MultiIndex& I, Variance var, ScalarField coefficient) {
    TensorField t(n, I.degree(), var);
    t.set(I, std::move(coefficient));
    return t;
}

bool TensorField::is_exact() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const auto& kv) { return kv.second.is_exact(); });
}

bool TensorField::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const auto& kv) { return kv.second.is_zero(); });
}

ScalarField TensorField::coeff(const MultiIndex& I) const {
    auto it = coeffs_.find(I);
    return it == coeffs_.end() ? ScalarField::constant(n_, Rat(0)) : it->second;
}

void TensorField::set(const MultiIndex& I, ScalarField value) {
    if (I.degree() != degree_ || I.max_index() > n_)
        throw StructuralError("TensorField: bad multi-index");
    if (value.n() != n_) throw StructuralError("TensorField: coefficient dimension mismatch");
    if (value.is_zero())
        coeffs_.erase(I);
    else
        coeffs_[I] = std::move(value);
}

void TensorField::add_to(const MultiIndex& I, const ScalarField& value) {
    auto it = coeffs_.find(I);
    if (it == coeffs_.end())
        set(I, value);
    else {
        ScalarField sum = it->second + value;
        if (sum.is_zero())
            coeffs_.erase(it);
        else
            it->second = std::move(sum);
    }
}

RatTensor TensorField::eval_exact(const std::vector<Rat>& x) const {
    RatTensor out(n_, degree_, var_);
    for (const auto& [I, f] : coeffs_) out.add_to(I, f.value_exact(x));
    return out;
}

NumTensor TensorField::eval(const std::vector<double>& x) const {
    NumTensor out(n_, degree_, var_);
    for (const auto& [I, f] : coeffs_) out.add_to(I, f.value(x));
    return out;
}

AltTensor<Jet1> TensorField::eval_jet1(const std::vector<double>& x) const {
    AltTensor<Jet1> out(n_, degree_, var_);
    for (const auto& [I, f] : coeffs_) {
        Jet2 j = f.jet(x);
        Jet1 j1{j.value, j.grad};
        out.set(I, std::move(j1));
    }
    return out;
}

TensorField operator+(const TensorField& a, const TensorField& b) {
    if (a.n_ != b.n_ || a.degree_ != b.degree_ || a.var_ != b.var_)
        throw StructuralError("TensorField: shape mismatch");
    TensorField out = a;
    for (const auto& [I, f] : b.coeffs_) out.add_to(I, f);
    return out;
}

TensorField operator-(const TensorField& a, const TensorField& b) { return a + (-b); }

TensorField TensorField::operator-() const {
    TensorField out(n_, degree_, var_);
    for (const auto& [I, f] : coeffs_) out.set(I, -f);
    return out;
}

TensorField operator*(const ScalarField& h, const TensorField& t) {
    TensorField out(t.n_, t.degree_, t.var_);
    for (const auto& [I, f] : t.coeffs_) out.set(I, h * f);
    return out;
}

TensorField operator*(const Rat& s, const TensorField& t) {
    TensorField out(t.n_, t.degree_, t.var_);
    for (const auto& [I, f] : t.coeffs_) out.set(I, s * f);
    return out;
}

bool TensorField::operator==(const TensorField& o) const {
    if (n_ != o.n_ || degree_ != o.degree_ || var_ != o.var_) return false;
    return (*this - o).is_zero();
}

FormField differential(const ScalarField& f) {
    const int n = f.n();
    FormField df(n, 1, Variance::Covector);
    if (f.is_exact()) {
        for (int i = 1; i <= n; ++i) {
            ExactPoly p = f.poly().derivative(i);
            if (!p.is_zero()) df.set(MultiIndex({i}), ScalarField(n, std::move(p)));
        }
        return df;
    }
    // numeric: each coefficient carries a first-order jet of the gradient
    for (int i = 1; i <= n; ++i) {
        ScalarField fi(n, NumericFn([f, i, n](const std::vector<double>& x) {
                           Jet2 base = f.jet(x);
                           Jet2 out = Jet2::zero(n);
                           out.value = base.grad[static_cast<std::size_t>(i - 1)];
                           for (int j = 0; j < n; ++j)
                               out.grad[static_cast<std::size_t>(j)] = base.h(i - 1, j);
                           out.hess_valid = false;
                           return out;
                       }));
        df.set(MultiIndex({i}), std::move(fi));
    }
    return df;
}

FormField d_form(const FormField& alpha) {
    if (alpha.variance() != Variance::Covector)
        throw StructuralError("d_form: expects a differential form");
    if (!alpha.is_exact())
        throw UnsupportedModeError("d_form: numeric coefficients are not supported");
    FormField out(alpha.n(), alpha.degree() + 1, Variance::Covector);
    if (alpha.degree() + 1 > alpha.n()) return out;
    for (const auto& [I, f] : alpha.coeffs()) {
        for (int i = 1; i <= alpha.n(); ++i) {
            if (I.contains(i)) continue;
            ExactPoly p = f.poly().derivative(i);
            if (p.is_zero()) continue;
            auto merged = merge_indices(MultiIndex({i}), I);
            ExactPoly signed_p = merged.sign > 0 ? p : -p;
            out.add_to(merged.index, ScalarField(alpha.n(), std::move(signed_p)));
        }
    }
    return out;
}

TensorField wedge(const TensorField& a, const TensorField& b) {
    if (a.n() != b.n() || a.variance() != b.variance())
        throw StructuralError("wedge: shape or variance mismatch");
    TensorField out(a.n(), a.degree() + b.degree(), a.variance());
    if (a.degree() + b.degree() > a.n()) return out;
    for (const auto& [I, f] : a.coeffs()) {
        for (const auto& [J, g] : b.coeffs()) {
            auto merged = merge_indices(I, J);
            if (merged.sign == 0) continue;
            ScalarField prod = f * g;
            out.add_to(merged.index, merged.sign > 0 ? prod : -prod);
        }
    }
    return out;
}

MultiVectorField wedge_fields(const std::vector<VectorField>& xs) {
    if (xs.empty()) throw StructuralError("wedge_fields: empty factor list");
    const int n = xs[0].n();
    TensorField acc(n, 0, Variance::Vector);
    acc.set(MultiIndex{}, ScalarField::constant(n, Rat(1)));
    for (const auto& X : xs) {
        TensorField deg1(n, 1, Variance::Vector);
        for (int i = 1; i <= n; ++i)
            if (!X.component(i).is_zero()) deg1.set(MultiIndex({i}), X.component(i));
        acc = wedge(acc, deg1);
    }
    return acc;
}

FormField interior_vector(const VectorField& X, const FormField& alpha) {
    if (alpha.variance() != Variance::Covector)
        throw StructuralError("interior_vector: expects a form");
    if (alpha.degree() == 0)
        throw StructuralError("interior_vector: cannot contract a 0-form");
    FormField out(alpha.n(), alpha.degree() - 1, Variance::Covector);
    for (const auto& [I, f] : alpha.coeffs()) {
        for (int p = 0; p < I.degree(); ++p) {
            int k = I[p];
            const ScalarField& xk = X.component(k);
            if (xk.is_zero()) continue;
            auto split = split_index(I, MultiIndex({k}));
            ScalarField term = xk * f;
            out.add_to(split.rest, split.sign > 0 ? term : -term);
        }
    }
    return out;
}

TensorField interior_form(const FormField& alpha, const MultiVectorField& mv) {
    if (alpha.variance() != Variance::Covector || mv.variance() != Variance::Vector)
        throw StructuralError("interior_form: variance mismatch");
    if (alpha.degree() > mv.degree())
        throw StructuralError("interior_form: form degree exceeds multivector degree");
    TensorField out(mv.n(), mv.degree() - alpha.degree(), Variance::Vector);
    for (const auto& [I, cl] : mv.coeffs()) {
        for (const auto& [J, cf] : alpha.coeffs()) {
            bool contained = true;
            for (int v : J.indices())
                if (!I.contains(v)) {
                    contained = false;
                    break;
                }
            if (!contained) continue;
            auto split = split_index(I, J);
            ScalarField term = cf * cl;
            out.add_to(split.rest, split.sign > 0 ? term : -term);
        }
    }
    return out;
}

ScalarField full_contraction(const FormField& alpha, const MultiVectorField& mv) {
    if (alpha.degree() != mv.degree())
        throw StructuralError("full_contraction: degree mismatch");
    TensorField scalar = interior_form(alpha, mv);
    return scalar.coeff(MultiIndex{});
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
    if (X.n() != Y.n()) throw StructuralError("lie_bracket: dimension mismatch");
    const int n = X.n();
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        ScalarField acc = ScalarField::constant(n, Rat(0));
        for (int j = 1; j <= n; ++j)
            acc = acc + X.component(j) * Y.component(i).derivative(j) -
                  Y.component(j) * X.component(i).derivative(j);
        comps.push_back(std::move(acc));
    }
    return {n, std::move(comps)};
}

std::vector<double> lie_bracket_at(const VectorField& X, const VectorField& Y,
                                   const std::vector<double>& x) {
    const int n = X.n();
    std::vector<double> xv = X.eval(x), yv = Y.eval(x);
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i <= n; ++i) {
        Jet2 jy = Y.component(i).jet(x);
        Jet2 jx = X.component(i).jet(x);
        double acc = 0;
        for (int j = 0; j < n; ++j)
            acc += xv[static_cast<std::size_t>(j)] * jy.grad[static_cast<std::size_t>(j)] -
                   yv[static_cast<std::size_t>(j)] * jx.grad[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i - 1)] = acc;
    }
    return out;
}

ScalarField lie_derivative_multivector(const VectorField& X, const MultiVectorField& mv,
                                       const std::vector<ScalarField>& gs) {
    if (static_cast<int>(gs.size()) != mv.degree())
        throw StructuralError("lie_derivative_multivector: arity mismatch");
    if (!X.is_exact() || !mv.is_exact())
        throw UnsupportedModeError("lie_derivative_multivector: exact mode only");
    const int n = mv.n();
    std::vector<FormField> dgs;
    dgs.reserve(gs.size());
    for (const auto& g : gs) dgs.push_back(differential(g));
    auto wedge_all = [&](const std::vector<FormField>& forms) {
        TensorField acc(n, 0, Variance::Covector);
        acc.set(MultiIndex{}, ScalarField::constant(n, Rat(1)));
        for (const auto& w : forms) acc = wedge(acc, w);
        return acc;
    };
    ScalarField inner = full_contraction(wedge_all(dgs), mv);
    ScalarField first = X.apply(inner);
    ScalarField second = ScalarField::constant(n, Rat(0));
    for (std::size_t i = 0; i < gs.size(); ++i) {
        std::vector<FormField> forms = dgs;
        forms[i] = differential(X.apply(gs[i]));
        second = second + full_contraction(wedge_all(forms), mv);
    }
    return first - second;
}

FormField lie_derivative_form(const VectorField& X, const FormField& alpha) {
    if (!X.is_exact() || !alpha.is_exact())
        throw UnsupportedModeError("lie_derivative_form: exact mode only");
    if (alpha.degree() == 0) {
        FormField out(alpha.n(), 0, Variance::Covector);
        out.set(MultiIndex{}, X.apply(alpha.coeff(MultiIndex{})));
        return out;
    }
    return interior_vector(X, d_form(alpha)) + d_form(interior_vector(X, alpha));
}

}  // namespace nambu
