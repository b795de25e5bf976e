#include "nambu/liegroup.hpp"

#include <cmath>

namespace nambu {

LieAlgebraPresentation::LieAlgebraPresentation(int dim, std::vector<std::string> labels)
    : dim_(dim), labels_(std::move(labels)) {
    if (dim_ < 1 || dim_ > kMaxVars)
        throw StructuralError("LieAlgebraPresentation: dimension out of range");
    if (labels_.empty()) {
        for (int i = 1; i <= dim_; ++i) labels_.push_back("a" + std::to_string(i));
    }
    if (static_cast<int>(labels_.size()) != dim_)
        throw StructuralError("LieAlgebraPresentation: label count mismatch");
    c_.assign(static_cast<std::size_t>(dim_),
              std::vector<std::vector<Rat>>(static_cast<std::size_t>(dim_),
                                            std::vector<Rat>(static_cast<std::size_t>(dim_), Rat(0))));
}

void LieAlgebraPresentation::set_bracket(int i, int j,
                                         const std::vector<std::pair<int, Rat>>& image) {
    if (i < 1 || j < 1 || i > dim_ || j > dim_ || i == j)
        throw StructuralError("set_bracket: bad generator indices");
    for (const auto& [k, v] : image) {
        if (k < 1 || k > dim_) throw StructuralError("set_bracket: bad target index");
        c_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)] = v;
        c_[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] = -v;
    }
}

std::vector<Rat> LieAlgebraPresentation::bracket(const std::vector<Rat>& u,
                                                 const std::vector<Rat>& v) const {
    std::vector<Rat> out(static_cast<std::size_t>(dim_), Rat(0));
    for (int i = 0; i < dim_; ++i) {
        if (u[static_cast<std::size_t>(i)].is_zero()) continue;
        for (int j = 0; j < dim_; ++j) {
            if (v[static_cast<std::size_t>(j)].is_zero()) continue;
            const Rat f = u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
            for (int k = 0; k < dim_; ++k) {
                const Rat& ck = c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                if (!ck.is_zero()) out[static_cast<std::size_t>(k)] += f * ck;
            }
        }
    }
    return out;
}

void LieAlgebraPresentation::validate() const {
    auto basis = [&](int i) {
        std::vector<Rat> v(static_cast<std::size_t>(dim_), Rat(0));
        v[static_cast<std::size_t>(i)] = Rat(1);
        return v;
    };
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k) {
                // [[ai,aj],ak] + [[aj,ak],ai] + [[ak,ai],aj] = 0
                auto t1 = bracket(bracket(basis(i), basis(j)), basis(k));
                auto t2 = bracket(bracket(basis(j), basis(k)), basis(i));
                auto t3 = bracket(bracket(basis(k), basis(i)), basis(j));
                for (int a = 0; a < dim_; ++a) {
                    Rat sum = t1[static_cast<std::size_t>(a)] + t2[static_cast<std::size_t>(a)] +
                              t3[static_cast<std::size_t>(a)];
                    if (!sum.is_zero())
                        throw StructuralError("LieAlgebraPresentation: Jacobi identity fails");
                }
            }
}

void LieAlgebraPresentation::set_matrices(std::vector<RatMat> matrices) {
    if (static_cast<int>(matrices.size()) != dim_)
        throw StructuralError("set_matrices: one matrix per generator");
    // realization must reproduce the structure constants: [A_i, A_j] as
    // matrices equals sum_k c^k_ij A_k
    const std::size_t msize = matrices[0].size();
    auto mat_mul = [&](const RatMat& a, const RatMat& b) {
        RatMat out(msize, std::vector<Rat>(msize, Rat(0)));
        for (std::size_t i = 0; i < msize; ++i)
            for (std::size_t k = 0; k < msize; ++k) {
                if (a[i][k].is_zero()) continue;
                for (std::size_t j = 0; j < msize; ++j) out[i][j] += a[i][k] * b[k][j];
            }
        return out;
    };
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            RatMat comm = mat_mul(matrices[static_cast<std::size_t>(i)], matrices[static_cast<std::size_t>(j)]);
            RatMat ba = mat_mul(matrices[static_cast<std::size_t>(j)], matrices[static_cast<std::size_t>(i)]);
            for (std::size_t a = 0; a < msize; ++a)
                for (std::size_t b = 0; b < msize; ++b) {
                    Rat want = comm[a][b] - ba[a][b];
                    for (int k = 0; k < dim_; ++k)
                        want -= c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
                                matrices[static_cast<std::size_t>(k)][a][b];
                    if (!want.is_zero())
                        throw StructuralError(
                            "set_matrices: realization disagrees with structure constants");
                }
        }
    matrices_ = std::move(matrices);
}

std::vector<std::vector<ExactPoly>> LieAlgebraPresentation::ad_matrix() const {
    std::vector<std::vector<ExactPoly>> m(
        static_cast<std::size_t>(dim_),
        std::vector<ExactPoly>(static_cast<std::size_t>(dim_), ExactPoly(dim_)));
    // ad_xi(v)_k = sum_{i,j} x_i v_j c^k_{ij}
    for (int k = 0; k < dim_; ++k)
        for (int j = 0; j < dim_; ++j) {
            ExactPoly entry(dim_);
            for (int i = 0; i < dim_; ++i) {
                const Rat& ck = c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                if (!ck.is_zero()) entry += ck * ExactPoly::variable(dim_, i + 1);
            }
            m[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = std::move(entry);
        }
    return m;
}

bool subalgebra_check(const LieAlgebraPresentation& L,
                      const std::vector<std::vector<Rat>>& span) {
    RatMat rows = span;
    if (rational_rank(rows) != static_cast<int>(span.size()))
        throw StructuralError("subalgebra_check: span vectors must be independent");
    for (std::size_t i = 0; i < span.size(); ++i)
        for (std::size_t j = i + 1; j < span.size(); ++j) {
            std::vector<Rat> br = L.bracket(span[i], span[j]);
            if (!in_row_span(rows, br)) return false;
        }
    return true;
}

LeftInvariantStructure left_invariant_structure(const LieAlgebraPresentation& L,
                                                const std::vector<std::vector<Rat>>& h_basis,
                                                double box_half, int taylor_order) {
    const int d = L.dim();
    const int r = static_cast<int>(h_basis.size());
    if (r < 2) throw StructuralError("left_invariant_structure: need at least two vectors");
    // Bernoulli-series coefficients of z/(1 - exp(-z))
    static const Rat beta[] = {Rat(1),          Rat(1, 2),  Rat(1, 12), Rat(0),
                               Rat(-1, 720),    Rat(0),     Rat(1, 30240), Rat(0),
                               Rat(-1, 1209600)};
    if (taylor_order < 1 || taylor_order > 8)
        throw StructuralError("left_invariant_structure: taylor order out of range");
    auto ad = L.ad_matrix();
    auto apply_ad = [&](const std::vector<ExactPoly>& v) {
        std::vector<ExactPoly> out(static_cast<std::size_t>(d), ExactPoly(d));
        for (int k = 0; k < d; ++k) {
            ExactPoly acc(d);
            for (int j = 0; j < d; ++j) {
                if (v[static_cast<std::size_t>(j)].is_zero()) continue;
                acc += ad[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
            }
            out[static_cast<std::size_t>(k)] = std::move(acc);
        }
        return out;
    };

    bool exact = true;
    std::vector<VectorField> fields;
    for (const auto& a : h_basis) {
        std::vector<ExactPoly> term(static_cast<std::size_t>(d), ExactPoly(d));
        for (int i = 0; i < d; ++i) term[static_cast<std::size_t>(i)] = ExactPoly::constant(d, a[static_cast<std::size_t>(i)]);
        std::vector<ExactPoly> acc(static_cast<std::size_t>(d), ExactPoly(d));
        for (int t = 0; t <= taylor_order; ++t) {
            if (!beta[t].is_zero())
                for (int i = 0; i < d; ++i) acc[static_cast<std::size_t>(i)] += beta[t] * term[static_cast<std::size_t>(i)];
            term = apply_ad(term);
        }
        // series is exact when the next iterate already vanished
        for (const auto& p : term)
            if (!p.is_zero()) exact = false;
        std::vector<ScalarField> comps;
        for (int i = 0; i < d; ++i) comps.emplace_back(d, std::move(acc[static_cast<std::size_t>(i)]));
        fields.emplace_back(d, std::move(comps));
    }
    MultiVectorField lambda = wedge_fields(fields);
    return {NambuStructure(d, r, std::move(lambda), Box::cube(d, box_half)), std::move(fields),
            exact, taylor_order};
}

namespace {

Mat mat_add(const Mat& a, const Mat& b, double sb) {
    Mat out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] += sb * b[i][j];
    return out;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    const std::size_t n = a.size();
    Mat out(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

Mat mat_identity(std::size_t n) {
    Mat out(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) out[i][i] = 1.0;
    return out;
}

double mat_norm(const Mat& a) {
    double s = 0;
    for (const auto& row : a)
        for (double v : row) s += v * v;
    return std::sqrt(s);
}

}  // namespace

Mat expm(const Mat& a) {
    const std::size_t n = a.size();
    int scale = 0;
    double norm = mat_norm(a);
    while (norm > 0.5) {
        norm /= 2;
        ++scale;
    }
    Mat as = a;
    double factor = std::ldexp(1.0, -scale);
    for (auto& row : as)
        for (auto& v : row) v *= factor;
    Mat sum = mat_identity(n);
    Mat term = mat_identity(n);
    for (int k = 1; k <= 20; ++k) {
        term = mat_mul(term, as);
        for (auto& row : term)
            for (auto& v : row) v /= k;
        sum = mat_add(sum, term, 1.0);
        if (mat_norm(term) < 1e-18) break;
    }
    for (int s = 0; s < scale; ++s) sum = mat_mul(sum, sum);
    return sum;
}

Mat logm(const Mat& a) {
    const std::size_t n = a.size();
    Mat x = mat_add(a, mat_identity(n), -1.0);  // a - I
    if (mat_norm(x) > 0.8)
        throw StructuralError("logm: matrix too far from the identity");
    Mat sum(n, std::vector<double>(n, 0.0));
    Mat term = mat_identity(n);
    for (int k = 1; k <= 60; ++k) {
        term = mat_mul(term, x);
        double c = (k % 2 == 1 ? 1.0 : -1.0) / k;
        sum = mat_add(sum, term, c);
        if (mat_norm(term) < 1e-18) break;
    }
    return sum;
}

Mat group_element(const LieAlgebraPresentation& L, const std::vector<double>& x) {
    if (!L.has_matrices()) throw StructuralError("group_element: no matrix realization");
    const std::size_t msize = L.matrices()[0].size();
    Mat xi(msize, std::vector<double>(msize, 0.0));
    for (int i = 0; i < L.dim(); ++i)
        for (std::size_t a = 0; a < msize; ++a)
            for (std::size_t b = 0; b < msize; ++b)
                xi[a][b] += x[static_cast<std::size_t>(i)] *
                            to_double(L.matrices()[static_cast<std::size_t>(i)][a][b]);
    return expm(xi);
}

std::vector<double> chart_coordinates(const LieAlgebraPresentation& L, const Mat& g) {
    if (!L.has_matrices()) throw StructuralError("chart_coordinates: no matrix realization");
    Mat xi = logm(g);
    const std::size_t msize = xi.size();
    // least squares for xi = sum x_i A_i over vectorized entries
    Mat a(msize * msize, std::vector<double>(static_cast<std::size_t>(L.dim()), 0.0));
    std::vector<double> b(msize * msize, 0.0);
    for (std::size_t i = 0; i < msize; ++i)
        for (std::size_t j = 0; j < msize; ++j) {
            b[i * msize + j] = xi[i][j];
            for (int k = 0; k < L.dim(); ++k)
                a[i * msize + j][static_cast<std::size_t>(k)] =
                    to_double(L.matrices()[static_cast<std::size_t>(k)][i][j]);
        }
    return solve_least_squares(a, b);
}

double left_invariance_residual(const LieAlgebraPresentation& L,
                                const LeftInvariantStructure& lis,
                                const std::vector<double>& g_coords,
                                const std::vector<double>& y_coords) {
    const int d = L.dim();
    Mat g = group_element(L, g_coords);
    auto translate = [&](const std::vector<double>& y) {
        return chart_coordinates(L, mat_mul(g, group_element(L, y)));
    };
    // forward value and finite-difference Jacobian of the chart translation
    std::vector<double> fy = translate(y_coords);
    const double h = 1e-6;
    Mat jac(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d), 0.0));
    for (int j = 0; j < d; ++j) {
        std::vector<double> yp = y_coords, ym = y_coords;
        yp[static_cast<std::size_t>(j)] += h;
        ym[static_cast<std::size_t>(j)] -= h;
        std::vector<double> fp = translate(yp), fm = translate(ym);
        for (int i = 0; i < d; ++i)
            jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2 * h);
    }
    NumTensor lam_y = lis.structure.tensor().eval(y_coords);
    // push forward: wedge the transformed basis images
    const int r = lis.structure.order();
    NumTensor pushed(d, r, Variance::Vector);
    for (const auto& [I, c] : lam_y.coeffs()) {
        NumTensor acc(d, 0, Variance::Vector);
        acc.set(MultiIndex{}, c);
        for (int s = 0; s < r; ++s) {
            NumTensor col(d, 1, Variance::Vector);
            for (int i = 1; i <= d; ++i) {
                double v = jac[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(I[s] - 1)];
                if (v != 0.0) col.set(MultiIndex({i}), v);
            }
            acc = wedge(acc, col);
        }
        pushed += acc;
    }
    NumTensor lam_fy = lis.structure.tensor().eval(fy);
    NumTensor diff = pushed - lam_fy;
    double worst = 0;
    for (const auto& [I, c] : diff.coeffs()) worst = std::max(worst, std::abs(c));
    return worst;
}

LieAlgebraPresentation heisenberg_algebra() {
    LieAlgebraPresentation L(3, {"p", "q", "z"});
    L.set_bracket(1, 2, {{3, Rat(1)}});
    L.validate();
    // strictly upper-triangular 3x3 realization
    auto E = [](int i, int j) {
        RatMat m(3, std::vector<Rat>(3, Rat(0)));
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rat(1);
        return m;
    };
    L.set_matrices({E(0, 1), E(1, 2), E(0, 2)});
    return L;
}

LieAlgebraPresentation heisenberg_r_algebra() {
    LieAlgebraPresentation L(4, {"p", "q", "z", "w"});
    L.set_bracket(1, 2, {{3, Rat(1)}});
    L.validate();
    // block: 3x3 Heisenberg part plus a 2x2 translation block
    auto E5 = [](int i, int j) {
        RatMat m(5, std::vector<Rat>(5, Rat(0)));
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rat(1);
        return m;
    };
    L.set_matrices({E5(0, 1), E5(1, 2), E5(0, 2), E5(3, 4)});
    return L;
}

}  // namespace nambu
