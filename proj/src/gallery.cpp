#include "nambu/gallery.hpp"

#include "nambu/liegroup.hpp"

#include <algorithm>

namespace nambu {

namespace {

MultiVectorField leading_block(int n, int r, const ScalarField& coeff) {
    std::vector<int> idx(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
    MultiVectorField lam(n, r, Variance::Vector);
    lam.set(MultiIndex(idx), coeff);
    return lam;
}

}  // namespace

NambuStructure canonical_structure(int n, int r, double box_half) {
    if (r > n) throw StructuralError("canonical_structure: order exceeds dimension");
    return {n, r, leading_block(n, r, ScalarField::constant(n, Rat(1))), Box::cube(n, box_half)};
}

NambuStructure scaled_structure(int n, int r, const ScalarField& h, double box_half) {
    if (r > n) throw StructuralError("scaled_structure: order exceeds dimension");
    if (!h.is_exact()) throw UnsupportedModeError("scaled_structure: exact scalar required");
    if (h.n() != n) throw StructuralError("scaled_structure: scalar dimension mismatch");
    return {n, r, leading_block(n, r, h), Box::cube(n, box_half)};
}

L1Truncated l1_truncated(int N, const std::vector<int>& index_set, double box_half) {
    if (static_cast<int>(index_set.size()) < 3)
        throw StructuralError("l1_truncated: need at least three indices");
    std::vector<int> I = index_set;
    std::sort(I.begin(), I.end());
    if (I.front() < 1 || I.back() > N)
        throw StructuralError("l1_truncated: index outside 1..N");
    if (std::adjacent_find(I.begin(), I.end()) != I.end())
        throw StructuralError("l1_truncated: repeated index");

    MultiVectorField lam(N, 3, Variance::Vector);
    Rat mass(0);
    for (std::size_t a = 0; a < I.size(); ++a)
        for (std::size_t b = a + 1; b < I.size(); ++b)
            for (std::size_t c = b + 1; c < I.size(); ++c) {
                Rat coeff(1, static_cast<long>(I[a]) * I[b] * I[c]);
                mass += coeff;
                lam.set(MultiIndex({I[a], I[b], I[c]}), ScalarField::constant(N, coeff));
            }
    Rat bound(0);
    for (int i : I) bound += Rat(1, static_cast<long>(i) * i * i);

    RatMat restriction;
    for (int i : I) {
        std::vector<Rat> row(static_cast<std::size_t>(N), Rat(0));
        row[static_cast<std::size_t>(i - 1)] = Rat(1);
        restriction.push_back(std::move(row));
    }
    NambuStructure S(N, 3, std::move(lam), std::move(restriction), Box::cube(N, box_half));
    return {std::move(S), mass, bound};
}

NambuStructure sequence_poisson(int N, double box_half) {
    if (N < 1) throw StructuralError("sequence_poisson: N must be positive");
    const int n = 2 * N;
    MultiVectorField lam(n, 2, Variance::Vector);
    for (int k = 1; k <= N; ++k)
        lam.set(MultiIndex({k, N + k}), ScalarField::constant(n, Rat(1)));
    return {n, 2, std::move(lam), Box::cube(n, box_half)};
}

std::vector<GalleryItem> gallery_census() {
    std::vector<GalleryItem> items;

    items.push_back({"canonical-3-3", canonical_structure(3, 3), true, std::nullopt});
    items.push_back({"canonical-6-3", canonical_structure(6, 3), true, std::nullopt});
    items.push_back({"canonical-2-2", canonical_structure(2, 2), true, std::nullopt});

    {
        ScalarField h = ScalarField::coordinate(3, 1);
        NambuStructure S = scaled_structure(3, 3, h);
        // the natural factor frame d1, d2, x1*d3 from the tensor's product form
        std::vector<ScalarField> third{ScalarField::constant(3, Rat(0)),
                                       ScalarField::constant(3, Rat(0)),
                                       ScalarField::coordinate(3, 1)};
        std::vector<VectorField> frame{VectorField::basis(3, 1), VectorField::basis(3, 2),
                                       VectorField(3, third)};
        items.push_back({"scaled-x1", std::move(S), true, std::move(frame)});
    }
    {
        ScalarField h(3, parse_poly("x1^2 + 1", 3));
        items.push_back({"scaled-x1sq-plus-1", scaled_structure(3, 3, h), true, std::nullopt});
    }

    items.push_back({"l1-123", l1_truncated(3, {1, 2, 3}).structure, true, std::nullopt});
    items.push_back({"l1-1to6", l1_truncated(6, {1, 2, 3, 4, 5, 6}).structure, false, std::nullopt});

    items.push_back({"seqpoisson-2", sequence_poisson(2), true, std::nullopt});

    {
        auto L = heisenberg_algebra();
        std::vector<std::vector<Rat>> full{{Rat(1), Rat(0), Rat(0)},
                                           {Rat(0), Rat(1), Rat(0)},
                                           {Rat(0), Rat(0), Rat(1)}};
        auto lis = left_invariant_structure(L, full);
        items.push_back({"heisenberg-full", std::move(lis.structure), true, std::move(lis.fields)});
    }
    {
        auto L = heisenberg_r_algebra();
        // span {a1, a2, a4}: [a1,a2] = a3 leaves the span, so not a subalgebra
        std::vector<std::vector<Rat>> span{{Rat(1), Rat(0), Rat(0), Rat(0)},
                                           {Rat(0), Rat(1), Rat(0), Rat(0)},
                                           {Rat(0), Rat(0), Rat(0), Rat(1)}};
        auto lis = left_invariant_structure(L, span);
        items.push_back(
            {"heisenberg-r-nonsub", std::move(lis.structure), false, std::move(lis.fields)});
    }
    return items;
}

GalleryItem gallery_item(const std::string& name) {
    for (auto& item : gallery_census())
        if (item.name == name) return std::move(item);
    throw ConfigError("gallery_item: unknown name '" + name + "'");
}

std::vector<std::string> gallery_names() {
    std::vector<std::string> names;
    for (const auto& item : gallery_census()) names.push_back(item.name);
    return names;
}

}  // namespace nambu
