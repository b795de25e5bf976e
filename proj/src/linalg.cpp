#include "nambu/linalg.hpp"

#include "nambu/errors.hpp"

#include <Eigen/Dense>

namespace nambu {

namespace {

Eigen::MatrixXd to_eigen(const Mat& m) {
    const auto rows = static_cast<Eigen::Index>(m.size());
    const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(m[0].size());
    Eigen::MatrixXd e(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(m[static_cast<std::size_t>(i)].size()) != cols)
            throw StructuralError("linalg: ragged matrix");
        for (Eigen::Index j = 0; j < cols; ++j)
            e(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return e;
}

}  // namespace

int numerical_rank(const Mat& m, double rel_tol) {
    if (m.empty() || m[0].empty()) return 0;
    Eigen::MatrixXd e = to_eigen(m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(e);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0;
    const double cutoff = rel_tol * s(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cutoff && s(i) > 0) ++rank;
    return s(0) == 0 ? 0 : rank;
}

double sigma_max(const Mat& m) {
    if (m.empty() || m[0].empty()) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

std::vector<double> solve_dense(const Mat& a, const std::vector<double>& b) {
    Eigen::MatrixXd ea = to_eigen(a);
    if (ea.rows() != ea.cols()) throw StructuralError("solve_dense: matrix not square");
    Eigen::VectorXd eb(ea.rows());
    for (Eigen::Index i = 0; i < eb.size(); ++i) eb(i) = b[static_cast<std::size_t>(i)];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ea);
    if (!lu.isInvertible()) throw StructuralError("solve_dense: singular system");
    Eigen::VectorXd x = lu.solve(eb);
    return std::vector<double>(x.data(), x.data() + x.size());
}

Mat invert_dense(const Mat& a) {
    Eigen::MatrixXd ea = to_eigen(a);
    if (ea.rows() != ea.cols()) throw StructuralError("invert_dense: matrix not square");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ea);
    if (!lu.isInvertible()) throw StructuralError("invert_dense: singular matrix");
    Eigen::MatrixXd inv = lu.inverse();
    Mat out(static_cast<std::size_t>(inv.rows()),
            std::vector<double>(static_cast<std::size_t>(inv.cols())));
    for (Eigen::Index i = 0; i < inv.rows(); ++i)
        for (Eigen::Index j = 0; j < inv.cols(); ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = inv(i, j);
    return out;
}

double det_dense(const Mat& a) {
    Eigen::MatrixXd ea = to_eigen(a);
    if (ea.rows() != ea.cols()) throw StructuralError("det_dense: matrix not square");
    return ea.determinant();
}

std::vector<double> solve_least_squares(const Mat& a, const std::vector<double>& b) {
    Eigen::MatrixXd ea = to_eigen(a);
    Eigen::VectorXd eb(static_cast<Eigen::Index>(b.size()));
    for (Eigen::Index i = 0; i < eb.size(); ++i) eb(i) = b[static_cast<std::size_t>(i)];
    Eigen::VectorXd x = ea.colPivHouseholderQr().solve(eb);
    return std::vector<double>(x.data(), x.data() + x.size());
}

namespace {

// Row echelon form over Q, in place; returns pivot column per row used.
int eliminate(RatMat& m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[rank], m[pivot]);
        const Rat inv = Rat(1) / m[rank][col];
        for (std::size_t j = col; j < cols; ++j) m[rank][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || m[i][col].is_zero()) continue;
            const Rat f = m[i][col];
            for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return static_cast<int>(rank);
}

}  // namespace

int rational_rank(const RatMat& m) {
    RatMat copy = m;
    return eliminate(copy);
}

bool in_row_span(const RatMat& m, const std::vector<Rat>& v) {
    RatMat aug = m;
    int base = eliminate(aug);
    aug.push_back(v);
    return eliminate(aug) == base;
}

std::vector<Rat> rational_solve(const RatMat& a, const std::vector<Rat>& b) {
    const std::size_t n = a.size();
    if (n == 0) return {};
    RatMat aug = a;
    for (std::size_t i = 0; i < n; ++i) {
        if (aug[i].size() != n) throw StructuralError("rational_solve: matrix not square");
        aug[i].push_back(b[i]);
    }
    // forward elimination with partial pivot on first nonzero
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && aug[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return {};
        std::swap(aug[col], aug[pivot]);
        const Rat inv = Rat(1) / aug[col][col];
        for (std::size_t j = col; j <= n; ++j) aug[col][j] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || aug[i][col].is_zero()) continue;
            const Rat f = aug[i][col];
            for (std::size_t j = col; j <= n; ++j) aug[i][j] -= f * aug[col][j];
        }
    }
    std::vector<Rat> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
    return x;
}

std::vector<std::vector<Rat>> rational_nullspace(const RatMat& m) {
    if (m.empty()) return {};
    const std::size_t cols = m[0].size();
    RatMat red = m;
    eliminate(red);
    // locate pivot columns
    std::vector<int> pivot_of_col(cols, -1);
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < red.size(); ++col) {
        if (!red[row][col].is_zero()) {
            pivot_of_col[col] = static_cast<int>(row);
            ++row;
        }
    }
    std::vector<std::vector<Rat>> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (pivot_of_col[free_col] >= 0) continue;
        std::vector<Rat> v(cols, Rat(0));
        v[free_col] = Rat(1);
        for (std::size_t col = 0; col < cols; ++col) {
            int pr = pivot_of_col[col];
            if (pr >= 0) v[col] = -red[static_cast<std::size_t>(pr)][free_col];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace nambu
