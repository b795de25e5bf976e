#include "nambu/towers.hpp"

#include <sstream>

namespace nambu {

namespace {

RatMat mat_mul(const RatMat& a, const RatMat& b) {
    const std::size_t rows = a.size();
    const std::size_t inner = b.size();
    const std::size_t cols = b.empty() ? 0 : b[0].size();
    RatMat out(rows, std::vector<Rat>(cols, Rat(0)));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

std::vector<Rat> mat_vec(const RatMat& a, const std::vector<Rat>& x) {
    std::vector<Rat> out(a.size(), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!a[i][j].is_zero()) out[i] += a[i][j] * x[j];
    return out;
}

std::vector<double> to_doubles(const std::vector<Rat>& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = to_double(x[i]);
    return out;
}

// covector pullback along a linear map: alpha -> alpha * m
std::vector<Rat> pull_covector(const std::vector<Rat>& alpha, const RatMat& m) {
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    std::vector<Rat> out(cols, Rat(0));
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < m.size(); ++i)
            if (!m[i][j].is_zero()) out[j] += alpha[i] * m[i][j];
    return out;
}

// linear substitution x -> m * y applied to every component of a field
std::vector<ExactPoly> substitution_images(const RatMat& m, int target_n) {
    const std::size_t rows = m.size();
    std::vector<ExactPoly> images;
    images.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        ExactPoly p(target_n);
        for (std::size_t j = 0; j < m[i].size(); ++j)
            if (!m[i][j].is_zero())
                p += m[i][j] * ExactPoly::variable(target_n, static_cast<int>(j) + 1);
        images.push_back(std::move(p));
    }
    return images;
}

VectorField constant_sharp_field(const NambuStructure& S,
                                 const std::vector<std::vector<Rat>>& covectors) {
    FormField acc(S.n(), 0, Variance::Covector);
    acc.set(MultiIndex{}, ScalarField::constant(S.n(), Rat(1)));
    for (const auto& a : covectors) {
        FormField deg1(S.n(), 1, Variance::Covector);
        for (int i = 1; i <= S.n(); ++i)
            if (!a[static_cast<std::size_t>(i - 1)].is_zero())
                deg1.set(MultiIndex({i}), ScalarField::constant(S.n(), a[static_cast<std::size_t>(i - 1)]));
        acc = wedge(acc, deg1);
    }
    return sharp_field(S, acc);
}

}  // namespace

TowerSpec::TowerSpec(TowerKind kind, std::vector<NambuStructure> levels,
                     std::vector<RatMat> links)
    : kind_(kind), levels_(std::move(levels)), links_(std::move(links)) {
    if (levels_.size() < 1) throw StructuralError("TowerSpec: need at least one level");
    if (links_.size() + 1 != levels_.size())
        throw StructuralError("TowerSpec: need one link per consecutive level pair");
    const int r = levels_[0].order();
    for (const auto& s : levels_)
        if (s.order() != r) throw StructuralError("TowerSpec: levels must share the order");
    for (std::size_t i = 0; i < links_.size(); ++i) {
        const int n_low = levels_[i].n();
        const int n_high = levels_[i + 1].n();
        const RatMat& m = links_[i];
        const int rows = static_cast<int>(m.size());
        const int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
        if (kind_ == TowerKind::Projective) {
            if (rows != n_low || cols != n_high)
                throw StructuralError("TowerSpec: projective link shape mismatch");
            if (rational_rank(m) != n_low)
                throw StructuralError("TowerSpec: projective link must have full row rank");
        } else {
            if (rows != n_high || cols != n_low)
                throw StructuralError("TowerSpec: direct link shape mismatch");
            if (rational_rank(m) != n_low)
                throw StructuralError("TowerSpec: direct link must have full column rank");
        }
    }
}

RatMat TowerSpec::composite_link(int i, int j) const {
    if (i >= j) throw StructuralError("composite_link: need i < j");
    if (kind_ == TowerKind::Projective) {
        // delta_i^j = delta_i o ... o delta_{j-1}
        RatMat acc = links_[static_cast<std::size_t>(i - 1)];
        for (int k = i + 1; k < j; ++k) acc = mat_mul(acc, links_[static_cast<std::size_t>(k - 1)]);
        return acc;
    }
    // eps_i^j = eps_{j-1} o ... o eps_i
    RatMat acc = links_[static_cast<std::size_t>(i - 1)];
    for (int k = i + 1; k < j; ++k) acc = mat_mul(links_[static_cast<std::size_t>(k - 1)], acc);
    return acc;
}

const std::vector<Rat>& TowerPoint::at(int i) const {
    const auto& slot = levels[static_cast<std::size_t>(i - 1)];
    if (!slot) throw StructuralError("TowerPoint: level below the entry level");
    return *slot;
}

TowerPoint projective_point(const TowerSpec& T, const std::vector<Rat>& top) {
    if (T.kind() != TowerKind::Projective)
        throw StructuralError("projective_point: wrong tower kind");
    TowerPoint p;
    p.levels.resize(static_cast<std::size_t>(T.depth()));
    p.levels[static_cast<std::size_t>(T.depth() - 1)] = top;
    for (int i = T.depth() - 1; i >= 1; --i)
        p.levels[static_cast<std::size_t>(i - 1)] = mat_vec(T.link(i), p.at(i + 1));
    p.entry_level = 1;
    return p;
}

TowerPoint direct_point(const TowerSpec& T, const std::vector<Rat>& x, int entry_level) {
    if (T.kind() != TowerKind::Direct) throw StructuralError("direct_point: wrong tower kind");
    TowerPoint p;
    p.levels.resize(static_cast<std::size_t>(T.depth()));
    p.entry_level = entry_level;
    p.levels[static_cast<std::size_t>(entry_level - 1)] = x;
    for (int i = entry_level; i < T.depth(); ++i)
        p.levels[static_cast<std::size_t>(i)] = mat_vec(T.link(i), p.at(i));
    return p;
}

namespace {

CheckReport compat_report(const char* name, const char* property) {
    CheckReport rep;
    rep.name = name;
    rep.property = property;
    rep.mode = "exact";
    return rep;
}

}  // namespace

CheckReport check_projective_compat(const TowerSpec& T) {
    CheckReport rep = compat_report("tower.projective-compat",
                                    "links intertwine anchors and preserve restrictions");
    if (T.kind() != TowerKind::Projective)
        throw StructuralError("check_projective_compat: wrong tower kind");
    const int r = T.level(1).order();
    for (int i = 1; i < T.depth(); ++i) {
        const NambuStructure& lo = T.level(i);
        const NambuStructure& hi = T.level(i + 1);
        const RatMat& delta = T.link(i);
        // (1) covector pullback maps the lower span into the upper span
        for (const auto& row : lo.restriction()) {
            ++rep.cases;
            if (!in_row_span(hi.restriction(), pull_covector(row, delta))) {
                rep.verdict = Verdict::Fail;
                rep.residual = "restriction inclusion";
                rep.witness = Witness{"levels " + std::to_string(i) + "->" + std::to_string(i + 1),
                                      {}, "pulled covector leaves the upper restriction span"};
                return rep;
            }
        }
        // (2) anchor identity on basis covector tuples, as polynomials
        std::vector<ExactPoly> images = substitution_images(delta, hi.n());
        for (const auto& combo : increasing_multiindices(lo.restriction_rank(), r - 1)) {
            ++rep.cases;
            std::vector<std::vector<Rat>> alphas, pulled;
            for (int a = 0; a < r - 1; ++a) {
                alphas.push_back(lo.restriction()[static_cast<std::size_t>(combo[a] - 1)]);
                pulled.push_back(pull_covector(alphas.back(), delta));
            }
            VectorField upper = constant_sharp_field(hi, pulled);
            VectorField lower = constant_sharp_field(lo, alphas);
            // delta * P_{i+1}(pulled)(x_{i+1})  vs  P_i(alpha)(delta x_{i+1})
            bool mismatch = false;
            for (int out = 1; out <= lo.n() && !mismatch; ++out) {
                ExactPoly lhs(hi.n());
                for (int j = 1; j <= hi.n(); ++j) {
                    const Rat& d = delta[static_cast<std::size_t>(out - 1)][static_cast<std::size_t>(j - 1)];
                    if (!d.is_zero()) lhs += d * upper.component(j).poly();
                }
                ExactPoly rhs = lower.component(out).poly().substitute(images);
                if (!(lhs - rhs).is_zero()) mismatch = true;
            }
            if (mismatch) {
                rep.verdict = Verdict::Fail;
                rep.residual = "anchor intertwine";
                std::ostringstream slots;
                slots << "levels " << i << "->" << (i + 1) << " covectors (";
                for (int a = 0; a < r - 1; ++a) slots << (a ? "," : "") << combo[a];
                slots << ")";
                rep.witness = Witness{slots.str(), {}, "polynomial identity fails"};
                return rep;
            }
        }
    }
    rep.verdict = Verdict::Pass;
    rep.residual = "0";
    return rep;
}

CheckReport check_direct_compat(const TowerSpec& T) {
    CheckReport rep = compat_report("tower.direct-compat",
                                    "embeddings intertwine anchors and preserve restrictions");
    if (T.kind() != TowerKind::Direct)
        throw StructuralError("check_direct_compat: wrong tower kind");
    const int r = T.level(1).order();
    for (int i = 1; i < T.depth(); ++i) {
        const NambuStructure& lo = T.level(i);
        const NambuStructure& hi = T.level(i + 1);
        const RatMat& eps = T.link(i);
        for (const auto& row : hi.restriction()) {
            ++rep.cases;
            if (!in_row_span(lo.restriction(), pull_covector(row, eps))) {
                rep.verdict = Verdict::Fail;
                rep.residual = "restriction inclusion";
                rep.witness = Witness{"levels " + std::to_string(i + 1) + "->" + std::to_string(i),
                                      {}, "pulled covector leaves the lower restriction span"};
                return rep;
            }
        }
        std::vector<ExactPoly> embed = substitution_images(eps, lo.n());
        for (const auto& combo : increasing_multiindices(hi.restriction_rank(), r - 1)) {
            ++rep.cases;
            std::vector<std::vector<Rat>> betas, pulled;
            for (int a = 0; a < r - 1; ++a) {
                betas.push_back(hi.restriction()[static_cast<std::size_t>(combo[a] - 1)]);
                pulled.push_back(pull_covector(betas.back(), eps));
            }
            VectorField upper = constant_sharp_field(hi, betas);
            VectorField lower = constant_sharp_field(lo, pulled);
            // P_{i+1}(beta)(eps x_i)  vs  eps * P_i(pulled)(x_i)
            bool mismatch = false;
            for (int out = 1; out <= hi.n() && !mismatch; ++out) {
                ExactPoly lhs = upper.component(out).poly().substitute(embed);
                ExactPoly rhs(lo.n());
                for (int j = 1; j <= lo.n(); ++j) {
                    const Rat& e = eps[static_cast<std::size_t>(out - 1)][static_cast<std::size_t>(j - 1)];
                    if (!e.is_zero()) rhs += e * lower.component(j).poly();
                }
                if (!(lhs - rhs).is_zero()) mismatch = true;
            }
            if (mismatch) {
                rep.verdict = Verdict::Fail;
                rep.residual = "anchor intertwine";
                std::ostringstream slots;
                slots << "levels " << i << "->" << (i + 1) << " covectors (";
                for (int a = 0; a < r - 1; ++a) slots << (a ? "," : "") << combo[a];
                slots << ")";
                rep.witness = Witness{slots.str(), {}, "polynomial identity fails"};
                return rep;
            }
        }
    }
    rep.verdict = Verdict::Pass;
    rep.residual = "0";
    return rep;
}

ProjectiveClassification classify_tower_point_projective(const TowerSpec& T,
                                                         const TowerPoint& p) {
    ProjectiveClassification out;
    int regular_count = 0;
    for (int i = 1; i <= T.depth(); ++i) {
        PointClass pc = classify_point(T.level(i), to_doubles(p.at(i)));
        out.ranks.push_back(pc.rank);
        if (pc.regular) ++regular_count;
    }
    out.regular = regular_count == T.depth();
    out.mixed = regular_count != 0 && regular_count != T.depth();
    return out;
}

DirectClassification classify_tower_point_direct(const TowerSpec& T, const TowerPoint& p) {
    DirectClassification out;
    int first_regular = 0;
    bool seen_regular = false;
    for (int i = p.entry_level; i <= T.depth(); ++i) {
        PointClass pc = classify_point(T.level(i), to_doubles(p.at(i)));
        out.ranks.push_back(pc.rank);
        if (pc.regular && !seen_regular) {
            seen_regular = true;
            first_regular = i;
        } else if (!pc.regular && seen_regular) {
            out.monotone = false;  // regularity must persist upward
        }
    }
    out.stratum = seen_regular && out.monotone ? first_regular : 0;
    return out;
}

Rat limit_bracket_eval(const TowerSpec& T, int level, const std::vector<ScalarField>& gs,
                       const TowerPoint& p) {
    if (T.kind() != TowerKind::Projective)
        throw StructuralError("limit_bracket_eval: projective towers only");
    const NambuStructure& S = T.level(level);
    if (static_cast<int>(gs.size()) != S.order())
        throw StructuralError("limit_bracket_eval: expected r cylinder functions");
    std::vector<ScalarField> head(gs.begin(), gs.end() - 1);
    Rat value = bracket_eval_exact(S, head, gs.back(), p.at(level));
    for (int j = level + 1; j <= T.depth(); ++j) {
        RatMat link = T.composite_link(level, j);
        std::vector<ExactPoly> images = substitution_images(link, T.level(j).n());
        std::vector<ScalarField> pulled;
        for (const auto& g : gs)
            pulled.emplace_back(T.level(j).n(), g.poly().substitute(images));
        std::vector<ScalarField> phead(pulled.begin(), pulled.end() - 1);
        Rat vj = bracket_eval_exact(T.level(j), phead, pulled.back(), p.at(j));
        if (vj != value)
            throw StructuralError("limit_bracket_eval: pull-back level dependence detected");
    }
    return value;
}

namespace {

RatMat drop_last_matrix(int n_low, int n_high) {
    RatMat m(static_cast<std::size_t>(n_low), std::vector<Rat>(static_cast<std::size_t>(n_high), Rat(0)));
    for (int i = 0; i < n_low; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Rat(1);
    return m;
}

RatMat include_matrix(int n_high, int n_low) {
    RatMat m(static_cast<std::size_t>(n_high), std::vector<Rat>(static_cast<std::size_t>(n_low), Rat(0)));
    for (int i = 0; i < n_low; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Rat(1);
    return m;
}

MultiVectorField leading_block_tensor(int n, int r, ScalarField coeff) {
    std::vector<int> idx(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
    MultiVectorField lam(n, r, Variance::Vector);
    lam.set(MultiIndex(idx), std::move(coeff));
    return lam;
}

}  // namespace

TowerSpec canonical_projective_tower(int levels, int base_n, int r) {
    std::vector<NambuStructure> ls;
    std::vector<RatMat> links;
    for (int i = 0; i < levels; ++i) {
        int n = base_n + i;
        ls.emplace_back(n, r, leading_block_tensor(n, r, ScalarField::constant(n, Rat(1))),
                        Box::cube(n, 2.0));
        if (i > 0) links.push_back(drop_last_matrix(n - 1, n));
    }
    return {TowerKind::Projective, std::move(ls), std::move(links)};
}

TowerSpec scaled_projective_tower(int levels) {
    std::vector<NambuStructure> ls;
    std::vector<RatMat> links;
    for (int i = 0; i < levels; ++i) {
        int n = 3 + i;
        ls.emplace_back(n, 3, leading_block_tensor(n, 3, ScalarField::coordinate(n, 1)),
                        Box::cube(n, 2.0));
        if (i > 0) links.push_back(drop_last_matrix(n - 1, n));
    }
    return {TowerKind::Projective, std::move(ls), std::move(links)};
}

TowerSpec squared_coefficient_direct_tower(int levels) {
    std::vector<NambuStructure> ls;
    std::vector<RatMat> links;
    for (int i = 1; i <= levels; ++i) {
        int n = 3 + i;
        ExactPoly coeff(n);
        for (int j = 4; j <= n; ++j)
            coeff += ExactPoly::variable(n, j) * ExactPoly::variable(n, j);
        ls.emplace_back(n, 3, leading_block_tensor(n, 3, ScalarField(n, std::move(coeff))),
                        Box::cube(n, 2.0));
        if (i > 1) links.push_back(include_matrix(n, n - 1));
    }
    return {TowerKind::Direct, std::move(ls), std::move(links)};
}

}  // namespace nambu
