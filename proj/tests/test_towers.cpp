#include <doctest.h>

#include "nambu/gallery.hpp"
#include "nambu/normal_form.hpp"
#include "nambu/rng.hpp"
#include "nambu/towers.hpp"

#include <cmath>

using namespace nambu;

namespace {

std::vector<Rat> rpoint(SeededRng& rng, const Box& box) { return rng.rational_point_in(box); }

TowerSpec broken_projective_tower() {
    // level-2 tensor scaled by the new coordinate: the anchors no longer
    // intertwine through the drop-last submersion
    std::vector<NambuStructure> ls;
    {
        MultiVectorField lam(3, 3, Variance::Vector);
        lam.set(MultiIndex({1, 2, 3}), ScalarField::constant(3, Rat(1)));
        ls.emplace_back(3, 3, std::move(lam), Box::cube(3, 2.0));
    }
    {
        MultiVectorField lam(4, 3, Variance::Vector);
        lam.set(MultiIndex({1, 2, 3}), ScalarField::coordinate(4, 4));
        ls.emplace_back(4, 3, std::move(lam), Box::cube(4, 2.0));
    }
    RatMat link(3, std::vector<Rat>(4, Rat(0)));
    for (int i = 0; i < 3; ++i) link[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Rat(1);
    return {TowerKind::Projective, std::move(ls), {link}};
}

TowerSpec broken_direct_tower() {
    // level-2 coefficient gains a term that survives the restriction to the
    // embedded image, so the pulled-back anchor disagrees
    std::vector<NambuStructure> ls;
    {
        MultiVectorField lam(4, 3, Variance::Vector);
        ExactPoly c = parse_poly("x4^2", 4);
        lam.set(MultiIndex({1, 2, 3}), ScalarField(4, std::move(c)));
        ls.emplace_back(4, 3, std::move(lam), Box::cube(4, 2.0));
    }
    {
        MultiVectorField lam(5, 3, Variance::Vector);
        ExactPoly c = parse_poly("x4^2 + x5^2 + x1^2", 5);
        lam.set(MultiIndex({1, 2, 3}), ScalarField(5, std::move(c)));
        ls.emplace_back(5, 3, std::move(lam), Box::cube(5, 2.0));
    }
    RatMat link(5, std::vector<Rat>(4, Rat(0)));
    for (int i = 0; i < 4; ++i) link[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Rat(1);
    return {TowerKind::Direct, std::move(ls), {link}};
}

}  // namespace

TEST_CASE("tower construction validates shapes and ranks") {
    TowerSpec T = canonical_projective_tower(4);
    CHECK(T.depth() == 4);
    CHECK(T.level(1).n() == 3);
    CHECK(T.level(4).n() == 6);

    // single level: vacuously compatible
    std::vector<NambuStructure> one;
    one.push_back(canonical_structure(3, 3));
    TowerSpec single(TowerKind::Projective, std::move(one), {});
    CHECK(check_projective_compat(single).passed());

    // rank-deficient link rejected
    std::vector<NambuStructure> ls;
    ls.push_back(canonical_structure(3, 3));
    ls.push_back(canonical_structure(4, 3));
    RatMat bad(3, std::vector<Rat>(4, Rat(0)));
    CHECK_THROWS_AS(TowerSpec(TowerKind::Projective, std::move(ls), {bad}), StructuralError);
}

TEST_CASE("projective compatibility: canonical and scaled pass, corrupted fails") {
    CHECK(check_projective_compat(canonical_projective_tower(4)).passed());
    CHECK(check_projective_compat(scaled_projective_tower(4)).passed());

    CheckReport bad = check_projective_compat(broken_projective_tower());
    CHECK(bad.verdict == Verdict::Fail);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->slots.find("covectors") != std::string::npos);
}

TEST_CASE("direct compatibility: squared-coefficient tower passes, corrupted fails") {
    CHECK(check_direct_compat(squared_coefficient_direct_tower(4)).passed());

    CheckReport bad = check_direct_compat(broken_direct_tower());
    CHECK(bad.verdict == Verdict::Fail);
    CHECK(bad.witness.has_value());
}

TEST_CASE("projective classification never mixes on compatible towers") {
    TowerSpec canon = canonical_projective_tower(4);
    SeededRng rng(101);
    for (int t = 0; t < 40; ++t) {
        TowerPoint p = projective_point(canon, rpoint(rng, canon.level(4).box()));
        ProjectiveClassification c = classify_tower_point_projective(canon, p);
        CHECK_FALSE(c.mixed);
        CHECK(c.regular);
        for (int rank : c.ranks) CHECK(rank == 3);
    }

    TowerSpec scaled = scaled_projective_tower(4);
    int singular_seen = 0, regular_seen = 0;
    for (int t = 0; t < 40; ++t) {
        std::vector<Rat> top = rpoint(rng, scaled.level(4).box());
        if (t % 2 == 0) top[0] = Rat(0);  // land on the singular hypersurface
        TowerPoint p = projective_point(scaled, top);
        ProjectiveClassification c = classify_tower_point_projective(scaled, p);
        CHECK_FALSE(c.mixed);
        if (c.regular) {
            ++regular_seen;
            for (int rank : c.ranks) CHECK(rank == 3);
        } else {
            ++singular_seen;
            for (int rank : c.ranks) CHECK(rank == 0);
        }
        // monotone ranks up the tower
        for (std::size_t i = 0; i + 1 < c.ranks.size(); ++i)
            CHECK(c.ranks[i] <= c.ranks[i + 1]);
    }
    CHECK(singular_seen > 0);
    CHECK(regular_seen > 0);
}

TEST_CASE("direct stratification") {
    TowerSpec T = squared_coefficient_direct_tower(4);  // levels R^4..R^7

    // entering at level 2 with the first extra coordinate zero and the next
    // nonzero: singular at the entry level is impossible here since x5 != 0
    // feeds the level-2 coefficient; the stratum is the entry level
    {
        std::vector<Rat> x{Rat(1, 2), Rat(1, 3), Rat(-1, 4), Rat(0), Rat(2, 3)};
        TowerPoint p = direct_point(T, x, 2);
        DirectClassification c = classify_tower_point_direct(T, p);
        CHECK(c.monotone);
        CHECK(c.stratum == 2);
        CHECK(c.ranks[0] == 3);
    }
    // entry-level singular, regular one level later
    {
        std::vector<Rat> x{Rat(1, 2), Rat(1, 3), Rat(-1, 4), Rat(0)};
        TowerPoint p = direct_point(T, x, 1);
        // push up, then perturb is not allowed (links fix the family), so the
        // higher coordinates stay zero: singular at every level
        DirectClassification c = classify_tower_point_direct(T, p);
        CHECK(c.monotone);
        CHECK(c.stratum == 0);
        for (int rank : c.ranks) CHECK(rank == 0);
    }
    // nonzero extra coordinate from the entry level onward
    {
        std::vector<Rat> x{Rat(1, 2), Rat(1, 3), Rat(-1, 4), Rat(3, 4)};
        TowerPoint p = direct_point(T, x, 1);
        DirectClassification c = classify_tower_point_direct(T, p);
        CHECK(c.monotone);
        CHECK(c.stratum == 1);
        for (int rank : c.ranks) CHECK(rank == 3);
    }

    // canonical direct tower: every point is regular from its entry level
    std::vector<NambuStructure> ls;
    std::vector<RatMat> links;
    for (int i = 0; i < 3; ++i) {
        int n = 3 + i;
        MultiVectorField lam(n, 3, Variance::Vector);
        lam.set(MultiIndex({1, 2, 3}), ScalarField::constant(n, Rat(1)));
        ls.emplace_back(n, 3, std::move(lam), Box::cube(n, 2.0));
        if (i > 0) {
            RatMat m(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(n - 1), Rat(0)));
            for (int k = 0; k < n - 1; ++k) m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = Rat(1);
            links.push_back(std::move(m));
        }
    }
    TowerSpec canon(TowerKind::Direct, std::move(ls), std::move(links));
    CHECK(check_direct_compat(canon).passed());
    for (int h = 1; h <= 3; ++h) {
        std::vector<Rat> x(static_cast<std::size_t>(2 + h), Rat(1, 3));
        TowerPoint p = direct_point(canon, x, h);
        DirectClassification c = classify_tower_point_direct(canon, p);
        CHECK(c.stratum == h);
    }
}

TEST_CASE("limit bracket is pull-back-level independent") {
    TowerSpec T = canonical_projective_tower(4);
    SeededRng rng(103);
    std::vector<int> vars{1, 2, 3};
    for (int t = 0; t < 20; ++t) {
        TowerPoint p = projective_point(T, rpoint(rng, T.level(4).box()));
        std::vector<ScalarField> gs;
        for (int i = 0; i < 3; ++i) gs.emplace_back(3, rng.polynomial(3, vars, 2));
        Rat value = limit_bracket_eval(T, 1, gs, p);  // throws on any mismatch
        // coordinates of level 1 give the canonical bracket value 1
        std::vector<ScalarField> coords{ScalarField::coordinate(3, 1),
                                        ScalarField::coordinate(3, 2),
                                        ScalarField::coordinate(3, 3)};
        CHECK(limit_bracket_eval(T, 1, coords, p) == 1);
        // constants kill the bracket
        std::vector<ScalarField> with_const = coords;
        with_const[1] = ScalarField::constant(3, Rat(7));
        CHECK(limit_bracket_eval(T, 1, with_const, p) == 0);
        (void)value;
    }
    // pulling back from level 2 and level 3 agrees as well
    SeededRng rng2(104);
    for (int t = 0; t < 5; ++t) {
        TowerPoint p = projective_point(T, rpoint(rng2, T.level(4).box()));
        std::vector<int> vars4{1, 2, 3, 4};
        std::vector<ScalarField> gs;
        for (int i = 0; i < 3; ++i) gs.emplace_back(4, rng2.polynomial(4, vars4, 2));
        (void)limit_bracket_eval(T, 2, gs, p);
    }
}

TEST_CASE("level-1 chart lifts to straighten the tower tensor") {
    TowerSpec T = canonical_projective_tower(2);  // levels R^3 and R^4
    const NambuStructure& base = T.level(1);
    const NambuStructure& top = T.level(2);
    ChartMap chart = darboux_chart(base, {Rat(0), Rat(0), Rat(0)});

    // lift: chart on the first three coordinates, identity on the new one
    ChartMap lifted;
    lifted.center = {0, 0, 0, 0};
    lifted.leaf_dim = 3;
    Box cb = Box::cube(4, 0.25);
    lifted.chart_box = cb;
    lifted.inverse = [chart](const std::vector<double>& w) {
        std::vector<double> base_w(w.begin(), w.begin() + 3);
        std::vector<double> y = chart.inverse(base_w);
        y.push_back(w[3]);
        return y;
    };
    lifted.forward = [chart](const std::vector<double>& y) {
        std::vector<double> base_y(y.begin(), y.begin() + 3);
        std::vector<double> w = chart.forward(base_y);
        w.push_back(y[3]);
        return w;
    };
    CheckReport rep = verify_chart(top, lifted);
    CHECK(rep.passed());
}
