#include <doctest.h>

#include "nambu/fields.hpp"
#include "nambu/flow.hpp"
#include "nambu/rng.hpp"

#include <cmath>

using namespace nambu;

namespace {

ScalarField poly_field(int n, const std::string& text) { return {n, parse_poly(text, n)}; }

VectorField vf(int n, std::vector<std::string> comps) {
    std::vector<ScalarField> fields;
    for (const auto& c : comps) fields.push_back(poly_field(n, c));
    return {n, std::move(fields)};
}

// independent central finite differences of the plain evaluator; the second
// derivatives use a wider step so roundoff stays below the 1e-6 budget
Jet2 fd_jet(const ScalarField& f, const std::vector<double>& x, double h1 = 1e-6,
            double h2 = 1e-4) {
    const int n = f.n();
    Jet2 j = Jet2::zero(n);
    j.value = f.value(x);
    auto at = [&](int i, double di, int k, double dk) {
        std::vector<double> y = x;
        y[static_cast<std::size_t>(i)] += di;
        if (k >= 0) y[static_cast<std::size_t>(k)] += dk;
        return f.value(y);
    };
    for (int i = 0; i < n; ++i) {
        j.grad[static_cast<std::size_t>(i)] = (at(i, h1, -1, 0) - at(i, -h1, -1, 0)) / (2 * h1);
        j.h(i, i) = (at(i, h2, -1, 0) - 2 * j.value + at(i, -h2, -1, 0)) / (h2 * h2);
        for (int k = i + 1; k < n; ++k) {
            double v = (at(i, h2, k, h2) - at(i, h2, k, -h2) - at(i, -h2, k, h2) +
                        at(i, -h2, k, -h2)) /
                       (4 * h2 * h2);
            j.h(i, k) = v;
            j.h(k, i) = v;
        }
    }
    return j;
}

}  // namespace

TEST_CASE("jet evaluation matches hand differentiation") {
    Box box = Box::cube(2, 10.0);
    ScalarField f = poly_field(2, "x1*x2");
    Jet2 j = eval_scalar(f, {2.0, 3.0}, box);
    CHECK(j.value == doctest::Approx(6.0));
    CHECK(j.grad[0] == doctest::Approx(3.0));
    CHECK(j.grad[1] == doctest::Approx(2.0));
    CHECK(j.h(0, 1) == doctest::Approx(1.0));
    CHECK(j.h(0, 0) == doctest::Approx(0.0));

    ScalarField c = ScalarField::constant(2, Rat(5));
    Jet2 jc = eval_scalar(c, {0.3, -0.7}, box);
    CHECK(jc.value == doctest::Approx(5.0));
    for (double g : jc.grad) CHECK(g == 0.0);
    for (double h : jc.hess) CHECK(h == 0.0);

    ScalarField sq = poly_field(1, "x1^2");
    Jet2 js = sq.jet({1.0});
    CHECK(js.value == doctest::Approx(1.0));
    CHECK(js.grad[0] == doctest::Approx(2.0));
    CHECK(js.h(0, 0) == doctest::Approx(2.0));

    CHECK_THROWS_AS(eval_scalar(f, {11.0, 0.0}, box), DomainError);
}

TEST_CASE("exact jets agree with central finite differences") {
    SeededRng rng(41);
    for (int trial = 0; trial < 4; ++trial) {
        int n = static_cast<int>(rng.uniform_int(1, 4));
        std::vector<int> vars;
        for (int i = 1; i <= n; ++i) vars.push_back(i);
        ScalarField f(n, rng.polynomial(n, vars, 3));
        Box box = Box::cube(n, 1.5);
        for (int s = 0; s < 100; ++s) {
            std::vector<double> x = rng.point_in(box);
            Jet2 exact = f.jet(x);
            Jet2 fd = fd_jet(f, x);
            double scale = 1.0 + std::abs(exact.value);
            CHECK(std::abs(exact.value - fd.value) < 1e-9 * scale);
            for (int i = 0; i < n; ++i)
                CHECK(std::abs(exact.grad[static_cast<std::size_t>(i)] - fd.grad[static_cast<std::size_t>(i)]) <
                      1e-6 * (1.0 + std::abs(exact.grad[static_cast<std::size_t>(i)])));
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    CHECK(std::abs(exact.h(i, k) - fd.h(i, k)) < 1e-6 * (1.0 + std::abs(exact.h(i, k))));
        }
    }
}

TEST_CASE("numeric evaluators: pass-through and symmetry validation") {
    const int n = 2;
    ScalarField good(n, NumericFn([](const std::vector<double>& x) {
                         Jet2 j = Jet2::zero(2);
                         j.value = x[0] * x[1];
                         j.grad = {x[1], x[0]};
                         j.h(0, 1) = 1.0;
                         j.h(1, 0) = 1.0;
                         return j;
                     }));
    Jet2 j = good.jet({2.0, 3.0});
    CHECK(j.value == doctest::Approx(6.0));
    CHECK_FALSE(good.is_exact());
    CHECK_THROWS_AS(good.poly(), UnsupportedModeError);

    ScalarField bad(n, NumericFn([](const std::vector<double>&) {
                        Jet2 j = Jet2::zero(2);
                        j.h(0, 1) = 1.0;
                        j.h(1, 0) = 0.5;
                        return j;
                    }));
    CHECK_THROWS_AS(bad.jet({0.0, 0.0}), StructuralError);
}

TEST_CASE("differential examples") {
    FormField d1 = differential(poly_field(2, "x1*x2"));
    FormField expect(2, 1, Variance::Covector);
    expect.set(MultiIndex({1}), poly_field(2, "x2"));
    expect.set(MultiIndex({2}), poly_field(2, "x1"));
    CHECK(d1 == expect);

    FormField const_form(3, 2, Variance::Covector);
    const_form.set(MultiIndex({1, 2}), ScalarField::constant(3, Rat(4)));
    CHECK(d_form(const_form).is_zero());

    FormField alpha(3, 1, Variance::Covector);
    alpha.set(MultiIndex({2}), poly_field(3, "x1"));
    FormField da = d_form(alpha);
    FormField expect2(3, 2, Variance::Covector);
    expect2.set(MultiIndex({1, 2}), ScalarField::constant(3, Rat(1)));
    CHECK(da == expect2);
}

TEST_CASE("d compose d vanishes on random forms") {
    SeededRng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        int n = static_cast<int>(rng.uniform_int(2, 6));
        int deg = static_cast<int>(rng.uniform_int(0, std::min(3, n - 1)));
        std::vector<int> vars;
        for (int i = 1; i <= n; ++i) vars.push_back(i);
        FormField alpha(n, deg, Variance::Covector);
        auto idxs = increasing_multiindices(n, deg);
        for (int e = 0; e < 3; ++e) {
            const auto& I = idxs[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(idxs.size()) - 1))];
            alpha.add_to(I, ScalarField(n, rng.polynomial(n, vars, 3)));
        }
        CHECK(d_form(d_form(alpha)).is_zero());
    }
}

TEST_CASE("graded Leibniz for d on wedges") {
    SeededRng rng(47);
    for (int trial = 0; trial < 15; ++trial) {
        int n = 4;
        std::vector<int> vars{1, 2, 3, 4};
        int p = static_cast<int>(rng.uniform_int(0, 2));
        int q = static_cast<int>(rng.uniform_int(0, 2));
        FormField a(n, p, Variance::Covector), b(n, q, Variance::Covector);
        auto ip = increasing_multiindices(n, p);
        auto iq = increasing_multiindices(n, q);
        a.add_to(ip[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(ip.size()) - 1))],
                 ScalarField(n, rng.polynomial(n, vars, 2)));
        b.add_to(iq[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(iq.size()) - 1))],
                 ScalarField(n, rng.polynomial(n, vars, 2)));
        FormField lhs = d_form(wedge(a, b));
        FormField rhs = wedge(d_form(a), b) +
                        (p % 2 == 0 ? wedge(a, d_form(b)) : Rat(-1) * wedge(a, d_form(b)));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("lie bracket coordinate formulas") {
    VectorField d1 = VectorField::basis(3, 1);
    VectorField x1d3 = vf(3, {"0", "0", "x1"});
    VectorField b = lie_bracket(d1, x1d3);
    CHECK(b == VectorField::basis(3, 3));

    CHECK(lie_bracket(VectorField::basis(3, 1), VectorField::basis(3, 2)).is_zero());

    VectorField x2d1 = vf(3, {"x2", "0", "0"});
    VectorField x1d2 = vf(3, {"0", "x1", "0"});
    VectorField expect = vf(3, {"0-x1", "x2", "0"});
    CHECK(lie_bracket(x2d1, x1d2) == expect);
}

TEST_CASE("Jacobi identity for the Lie bracket, exact") {
    SeededRng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        int n = static_cast<int>(rng.uniform_int(2, 4));
        std::vector<int> vars;
        for (int i = 1; i <= n; ++i) vars.push_back(i);
        auto rand_vf = [&] {
            std::vector<ScalarField> comps;
            for (int i = 0; i < n; ++i) comps.emplace_back(n, rng.polynomial(n, vars, 2));
            return VectorField(n, std::move(comps));
        };
        VectorField X = rand_vf(), Y = rand_vf(), Z = rand_vf();
        VectorField jac = lie_bracket(lie_bracket(X, Y), Z) + lie_bracket(lie_bracket(Y, Z), X) +
                          lie_bracket(lie_bracket(Z, X), Y);
        CHECK(jac.is_zero());
    }
}

TEST_CASE("Lie derivative of a multivector on exact differentials") {
    const int n = 3;
    auto coords = [&](int i) { return ScalarField::coordinate(n, i); };
    MultiVectorField lam(3, 3, Variance::Vector);
    lam.set(MultiIndex({1, 2, 3}), ScalarField::constant(n, Rat(1)));

    // constant tensor, constant field
    ScalarField r1 = lie_derivative_multivector(VectorField::basis(3, 3), lam,
                                                {poly_field(3, "x1*x2"), coords(2), coords(3)});
    CHECK(r1.is_zero());

    // linear-coefficient tensor along a constant field
    MultiVectorField xlam(3, 3, Variance::Vector);
    xlam.set(MultiIndex({1, 2, 3}), coords(1));
    ScalarField r2 = lie_derivative_multivector(VectorField::basis(3, 1), xlam,
                                                {coords(1), coords(2), coords(3)});
    CHECK(r2 == ScalarField::constant(3, Rat(1)));

    // both terms cancel
    VectorField x1d3 = vf(3, {"0", "0", "x1"});
    ScalarField r3 =
        lie_derivative_multivector(x1d3, lam, {coords(1), coords(2), coords(3)});
    CHECK(r3.is_zero());
}

TEST_CASE("Lie derivative of forms via the Cartan formula") {
    FormField w12(3, 2, Variance::Covector);
    w12.set(MultiIndex({1, 2}), ScalarField::constant(3, Rat(1)));
    CHECK(lie_derivative_form(VectorField::basis(3, 1), w12).is_zero());

    FormField a(3, 2, Variance::Covector);
    a.set(MultiIndex({2, 3}), ScalarField::coordinate(3, 1));
    FormField la = lie_derivative_form(VectorField::basis(3, 1), a);
    FormField expect(3, 2, Variance::Covector);
    expect.set(MultiIndex({2, 3}), ScalarField::constant(3, Rat(1)));
    CHECK(la == expect);

    FormField dx1(3, 1, Variance::Covector);
    dx1.set(MultiIndex({1}), ScalarField::constant(3, Rat(1)));
    VectorField x1d1 = vf(3, {"x1", "0", "0"});
    CHECK(lie_derivative_form(x1d1, dx1) == dx1);

    // L_X(f a) = (Xf) a + f L_X a
    SeededRng rng(59);
    std::vector<int> vars{1, 2, 3};
    for (int trial = 0; trial < 10; ++trial) {
        ScalarField f(3, rng.polynomial(3, vars, 2));
        FormField alpha(3, 1, Variance::Covector);
        alpha.set(MultiIndex({static_cast<int>(rng.uniform_int(1, 3))}),
                  ScalarField(3, rng.polynomial(3, vars, 2)));
        std::vector<ScalarField> comps;
        for (int i = 0; i < 3; ++i) comps.emplace_back(3, rng.polynomial(3, vars, 2));
        VectorField X(3, std::move(comps));
        FormField lhs = lie_derivative_form(X, f * alpha);
        FormField rhs = X.apply(f) * alpha + f * lie_derivative_form(X, alpha);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("flow: constant, exponential, identity, semigroup") {
    Box box = Box::cube(3, 10.0);
    FlowOptions opts;
    opts.box = box;

    FlowResult r1 = flow(VectorField::basis(3, 1), {0, 0, 0}, 1.0, opts);
    CHECK(r1.point[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r1.point[1] == 0.0);

    Box box1 = Box::cube(1, 10.0);
    FlowOptions o1;
    o1.box = box1;
    VectorField xdx = vf(1, {"x1"});
    FlowResult re = flow(xdx, {1.0}, 1.0, o1);
    CHECK(std::abs(re.point[0] - std::exp(1.0)) < 1e-8);

    FlowResult r0 = flow(xdx, {1.25}, 0.0, o1);
    CHECK(r0.point[0] == 1.25);
    CHECK(r0.steps == 0);

    // semigroup within 10x the step tolerance
    VectorField rot = vf(3, {"0-x2", "x1", "0"});
    std::vector<double> x0{1.0, 0.0, 0.5};
    double s = 0.4, t = 0.7;
    FlowResult once = flow(rot, x0, s + t, opts);
    FlowResult twice = flow(rot, flow(rot, x0, s, opts).point, t, opts);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(once.point[static_cast<std::size_t>(i)] - twice.point[static_cast<std::size_t>(i)]) < 1e-8);

    // leaving the box raises with the last valid state
    Box tiny = Box::cube(1, 1.5);
    FlowOptions ot;
    ot.box = tiny;
    CHECK_THROWS_AS(flow(xdx, {1.0}, 2.0, ot), FlowError);
}
