#include "nambu/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace nambu {

ExactPoly ExactPoly::constant(int n, Rat c) {
    ExactPoly p(n);
    if (!c.is_zero()) p.terms_.push_back({Monomial{}, std::move(c)});
    return p;
}

ExactPoly ExactPoly::variable(int n, int index) {
    if (index < 1 || index > n) throw StructuralError("ExactPoly: variable index out of range");
    Monomial m;
    m.e[static_cast<std::size_t>(index - 1)] = 1;
    return monomial(n, m, Rat(1));
}

ExactPoly ExactPoly::monomial(int n, const Monomial& m, Rat c) {
    ExactPoly p(n);
    for (int i = n; i < kMaxVars; ++i)
        if (m.e[static_cast<std::size_t>(i)] != 0)
            throw StructuralError("ExactPoly: monomial uses variable beyond n");
    if (!c.is_zero()) p.terms_.push_back({m, std::move(c)});
    return p;
}

bool ExactPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].m == Monomial{});
}

Rat ExactPoly::constant_value() const {
    if (!is_constant()) throw StructuralError("ExactPoly: not a constant");
    return terms_.empty() ? Rat(0) : terms_[0].c;
}

int ExactPoly::total_degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.m.degree());
    return d;
}

ExactPoly ExactPoly::operator-() const {
    ExactPoly out(n_);
    out.terms_ = terms_;
    for (auto& t : out.terms_) t.c = -t.c;
    return out;
}

ExactPoly& ExactPoly::operator+=(const ExactPoly& o) {
    if (n_ != o.n_) throw StructuralError("ExactPoly: dimension mismatch");
    std::vector<Term> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() && b != o.terms_.end()) {
        if (a->m < b->m) {
            merged.push_back(*a++);
        } else if (b->m < a->m) {
            merged.push_back(*b++);
        } else {
            Rat c = a->c + b->c;
            if (!c.is_zero()) merged.push_back({a->m, std::move(c)});
            ++a;
            ++b;
        }
    }
    merged.insert(merged.end(), a, terms_.end());
    merged.insert(merged.end(), b, o.terms_.end());
    terms_ = std::move(merged);
    return *this;
}

ExactPoly& ExactPoly::operator-=(const ExactPoly& o) { return *this += -o; }

ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
    if (a.n_ != b.n_) throw StructuralError("ExactPoly: dimension mismatch");
    ExactPoly out(a.n_);
    if (a.is_zero() || b.is_zero()) return out;
    for (const auto& ta : a.terms_) {
        for (const auto& tb : b.terms_) {
            Monomial m = ta.m;
            for (int i = 0; i < kMaxVars; ++i) {
                int e = m.e[static_cast<std::size_t>(i)] + tb.m.e[static_cast<std::size_t>(i)];
                if (e > 255) throw StructuralError("ExactPoly: exponent overflow");
                m.e[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(e);
            }
            out.add_term(m, ta.c * tb.c);
        }
    }
    return out;
}

ExactPoly& ExactPoly::operator*=(const Rat& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.c *= s;
    return *this;
}

void ExactPoly::add_term(const Monomial& m, const Rat& c) {
    if (c.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.m < key; });
    if (it != terms_.end() && it->m == m) {
        it->c += c;
        if (it->c.is_zero()) terms_.erase(it);
    } else {
        terms_.insert(it, {m, c});
    }
}

void ExactPoly::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.m < b.m; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().m == t.m)
            merged.back().c += t.c;
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return t.c.is_zero(); });
    terms_ = std::move(merged);
}

ExactPoly ExactPoly::derivative(int var) const {
    if (var < 1 || var > n_) throw StructuralError("ExactPoly: derivative variable out of range");
    ExactPoly out(n_);
    const std::size_t vi = static_cast<std::size_t>(var - 1);
    for (const auto& t : terms_) {
        int e = t.m.e[vi];
        if (e == 0) continue;
        Term d{t.m, t.c * Rat(e)};
        d.m.e[vi] = static_cast<std::uint8_t>(e - 1);
        out.terms_.push_back(std::move(d));
    }
    out.normalize();
    return out;
}

Rat ExactPoly::eval(const std::vector<Rat>& x) const {
    if (static_cast<int>(x.size()) != n_) throw StructuralError("ExactPoly: eval dimension");
    Rat acc(0);
    for (const auto& t : terms_) {
        Rat v = t.c;
        for (int i = 0; i < n_; ++i) {
            int e = t.m.e[static_cast<std::size_t>(i)];
            for (int k = 0; k < e; ++k) v *= x[static_cast<std::size_t>(i)];
        }
        acc += v;
    }
    return acc;
}

double ExactPoly::eval(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_) throw StructuralError("ExactPoly: eval dimension");
    double acc = 0;
    for (const auto& t : terms_) {
        double v = to_double(t.c);
        for (int i = 0; i < n_; ++i) {
            int e = t.m.e[static_cast<std::size_t>(i)];
            double xi = x[static_cast<std::size_t>(i)];
            for (int k = 0; k < e; ++k) v *= xi;
        }
        acc += v;
    }
    return acc;
}

ExactPoly ExactPoly::substitute(const std::vector<ExactPoly>& images) const {
    if (static_cast<int>(images.size()) != n_)
        throw StructuralError("ExactPoly: substitute needs one image per variable");
    const int m = images.empty() ? 0 : images[0].n();
    for (const auto& img : images)
        if (img.n() != m) throw StructuralError("ExactPoly: image dimension mismatch");
    ExactPoly out(m);
    for (const auto& t : terms_) {
        ExactPoly term = ExactPoly::constant(m, t.c);
        for (int i = 0; i < n_; ++i) {
            int e = t.m.e[static_cast<std::size_t>(i)];
            for (int k = 0; k < e; ++k) term = term * images[static_cast<std::size_t>(i)];
        }
        out += term;
    }
    return out;
}

ExactPoly ExactPoly::extended(int new_n) const {
    if (new_n < n_) throw StructuralError("ExactPoly: cannot shrink variable count");
    check_n(new_n);
    ExactPoly out(new_n);
    out.terms_ = terms_;
    return out;
}

std::string ExactPoly::to_string() const {
    if (terms_.empty()) return "0";
    // print highest-degree first for readability
    std::vector<const Term*> order;
    order.reserve(terms_.size());
    for (const auto& t : terms_) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](const Term* a, const Term* b) {
        if (a->m.degree() != b->m.degree()) return a->m.degree() > b->m.degree();
        return b->m < a->m;
    });
    std::ostringstream os;
    bool first = true;
    for (const Term* t : order) {
        Rat c = t->c;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        Rat ac = c < 0 ? Rat(-c) : c;
        bool has_vars = t->m.degree() > 0;
        if (ac != 1 || !has_vars) {
            os << rat_to_string(ac);
            if (has_vars) os << "*";
        }
        bool first_var = true;
        for (int i = 0; i < n_; ++i) {
            int e = t->m.e[static_cast<std::size_t>(i)];
            if (e == 0) continue;
            if (!first_var) os << "*";
            first_var = false;
            os << "x" << (i + 1);
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

namespace {

struct PolyParser {
    const std::string& s;
    int n;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

    ExactPoly parse_expr() {
        ExactPoly acc = eat('-') ? -parse_term() : (static_cast<void>(eat('+')), parse_term());
        while (true) {
            skip_ws();
            if (eat('+'))
                acc += parse_term();
            else if (eat('-'))
                acc -= parse_term();
            else
                break;
        }
        return acc;
    }

    ExactPoly parse_term() {
        ExactPoly acc = parse_factor();
        while (true) {
            skip_ws();
            if (eat('*'))
                acc = acc * parse_factor();
            else
                break;
        }
        return acc;
    }

    ExactPoly parse_factor() {
        ExactPoly base = parse_base();
        skip_ws();
        if (eat('^')) {
            long e = parse_uint();
            ExactPoly out = ExactPoly::constant(base.n(), Rat(1));
            for (long k = 0; k < e; ++k) out = out * base;
            return out;
        }
        return base;
    }

    ExactPoly parse_base() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of polynomial");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            ExactPoly inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (c == 'x' || c == 'X') {
            ++pos;
            long idx = parse_uint();
            if (idx < 1 || idx > n) fail("variable index out of range");
            return ExactPoly::variable(n, static_cast<int>(idx));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        fail("unexpected character in polynomial");
    }

    long parse_uint() {
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            fail("expected integer");
        long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + (s[pos] - '0');
            if (v > 1000000000L) fail("integer literal too large");
            ++pos;
        }
        return v;
    }

    ExactPoly parse_number() {
        long whole = parse_uint();
        Rat value(whole);
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            Rat frac(0);
            Rat scale(1);
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
                fail("expected digits after decimal point");
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                frac = frac * 10 + Rat(s[pos] - '0');
                scale *= 10;
                ++pos;
            }
            value += frac / scale;
        } else if (eat('/')) {
            long den = parse_uint();
            if (den == 0) fail("zero denominator");
            value /= Rat(den);
        }
        return ExactPoly::constant(n, value);
    }
};

}  // namespace

ExactPoly parse_poly(const std::string& text, int n) {
    if (n < 0 || n > kMaxVars) throw StructuralError("parse_poly: dimension out of range");
    PolyParser p{text, n};
    ExactPoly out = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) throw ParseError("trailing characters in polynomial", p.pos);
    return out;
}

}  // namespace nambu
