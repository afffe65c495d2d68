/*
 Copyright 2026 The disevo Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "disevo/kernel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <string>

namespace disevo {

namespace {

std::atomic<double> g_tolerance{1e-10};

// Largest singular value of the leading `cols` columns.
double sigma_max(const Matrix<double>& m, std::size_t cols) {
    if (m.rows() == 0 || cols == 0) return 0.0;
    Eigen::MatrixXd e(m.rows(), cols);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < cols; ++j) e(i, j) = m(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(e);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

template <class T>
struct PivotPolicy;

template <>
struct PivotPolicy<Rational> {
    explicit PivotPolicy(const Matrix<Rational>&, std::size_t) {}
    bool zero(const Rational& v) const { return sgn(v) == 0; }
    // Any nonzero entry yields the same reduced form; take the first.
    std::size_t choose(const Matrix<Rational>& m, std::size_t r0, std::size_t c) const {
        for (std::size_t r = r0; r < m.rows(); ++r)
            if (sgn(m(r, c)) != 0) return r;
        return m.rows();
    }
    void clean(Rational&) const {}
};

template <>
struct PivotPolicy<double> {
    double threshold;
    PivotPolicy(const Matrix<double>& m, std::size_t cols) : threshold(tolerance() * sigma_max(m, cols)) {}
    bool zero(double v) const { return std::fabs(v) <= threshold; }
    std::size_t choose(const Matrix<double>& m, std::size_t r0, std::size_t c) const {
        std::size_t best = m.rows();
        double best_abs = threshold;
        for (std::size_t r = r0; r < m.rows(); ++r) {
            double a = std::fabs(m(r, c));
            if (a > best_abs) {
                best_abs = a;
                best = r;
            }
        }
        return best;
    }
    void clean(double& v) const {
        if (std::fabs(v) <= threshold) v = 0.0;
    }
};

}  // namespace

double tolerance() { return g_tolerance.load(); }
void set_tolerance(double tol) {
    if (!(tol > 0.0)) throw Error("tolerance must be positive");
    g_tolerance.store(tol);
}

std::string to_string(ArithmeticMode mode) { return mode == ArithmeticMode::exact ? "exact" : "float"; }

ArithmeticMode parse_mode(std::string_view text) {
    if (text == "exact") return ArithmeticMode::exact;
    if (text == "float") return ArithmeticMode::floating;
    throw Error("unknown arithmetic mode '" + std::string(text) + "' (expected exact or float)");
}

Rational ScalarTraits<Rational>::parse(std::string_view text) {
    std::string s(text);
    // Accept plain decimals such as "0.5" alongside "p/q".
    auto dot = s.find('.');
    if (dot != std::string::npos && s.find('/') == std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::string den = "1" + std::string(s.size() - dot - 1, '0');
        s = digits + "/" + den;
    }
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    Rational r;
    if (s.empty() || r.set_str(s, 10) != 0) throw Error("not a rational number: '" + std::string(text) + "'");
    if (sgn(r.get_den()) == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    r.canonicalize();
    return r;
}

std::string ScalarTraits<double>::to_string(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double ScalarTraits<double>::parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        Rational r = ScalarTraits<Rational>::parse(text);
        return r.get_d();
    }
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw Error("not a number: '" + std::string(text) + "'");
    return v;
}

template <class T>
RowEchelon<T> row_reduce(const Matrix<T>& m, std::size_t pivot_cols) {
    pivot_cols = std::min(pivot_cols, m.cols());
    PivotPolicy<T> policy(m, pivot_cols);
    Matrix<T> r = m;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < pivot_cols && row < r.rows(); ++c) {
        std::size_t p = policy.choose(r, row, c);
        if (p == r.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < r.cols(); ++j) std::swap(r(p, j), r(row, j));
        T inv = T(1) / r(row, c);
        for (std::size_t j = 0; j < r.cols(); ++j) r(row, j) *= inv;
        r(row, c) = T(1);
        for (std::size_t i = 0; i < r.rows(); ++i) {
            if (i == row) continue;
            T f = r(i, c);
            if (f == 0) continue;
            for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) -= f * r(row, j);
            r(i, c) = T(0);
        }
        pivots.push_back(c);
        ++row;
    }
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < pivot_cols; ++j) policy.clean(r(i, j));
    return {std::move(r), std::move(pivots)};
}

template <class T>
std::size_t rank(const Matrix<T>& m) {
    return row_reduce(m).pivots.size();
}

namespace {

template <class T>
std::vector<Vector<T>> right_null_from_rref(const RowEchelon<T>& e, std::size_t ncols) {
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<Vector<T>> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        Vector<T> v(ncols, T(0));
        v[f] = T(1);
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace

template <class T>
std::vector<Vector<T>> canonical_basis(const std::vector<Vector<T>>& vectors, std::size_t dim) {
    if (vectors.empty()) return {};
    auto e = row_reduce(Matrix<T>::from_rows(vectors, dim));
    std::vector<Vector<T>> out;
    out.reserve(e.pivots.size());
    for (std::size_t i = 0; i < e.pivots.size(); ++i) out.push_back(e.reduced.row(i));
    return out;
}

template <class T>
NullSpaces<T> rank_nullspace(const Matrix<T>& m) {
    NullSpaces<T> out;
    auto e = row_reduce(m);
    out.rank = e.pivots.size();
    out.right_null = canonical_basis(right_null_from_rref(e, m.cols()), m.cols());
    auto et = row_reduce(m.transpose());
    out.left_null = canonical_basis(right_null_from_rref(et, m.rows()), m.rows());
    return out;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
    if (m.rows() != m.cols()) throw DimensionError("inverse of a non-square matrix");
    std::size_t n = m.rows();
    auto e = row_reduce(hstack(m, Matrix<T>::identity(n)), n);
    if (e.pivots.size() != n) throw DimensionError("matrix is singular");
    return e.reduced.block(0, n, n, n);
}

template <class T>
SolveOperator<T> solve_operator(const Matrix<T>& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    SolveOperator<T> out;
    auto e = row_reduce(hstack(m, Matrix<T>::identity(rows)), cols);
    out.rank = e.pivots.size();
    // Rows of the transform below the rank are left-null vectors.
    std::vector<Vector<T>> left;
    for (std::size_t i = out.rank; i < rows; ++i) {
        Vector<T> w(rows);
        for (std::size_t j = 0; j < rows; ++j) w[j] = e.reduced(i, cols + j);
        left.push_back(std::move(w));
    }
    out.left_null = canonical_basis(left, rows);
    RowEchelon<T> left_part{e.reduced.block(0, 0, rows, cols), e.pivots};
    out.null_basis = canonical_basis(right_null_from_rref(left_part, cols), cols);

    Matrix<T> pivot_map(cols, rows);
    for (std::size_t i = 0; i < out.rank; ++i)
        for (std::size_t j = 0; j < rows; ++j) pivot_map(e.pivots[i], j) = e.reduced(i, cols + j);

    if (out.null_basis.empty()) {
        out.particular_map = std::move(pivot_map);
        return out;
    }
    // Project away the null directions: P = I - N (NᵀN)⁻¹ Nᵀ.
    Matrix<T> n = Matrix<T>::from_cols(out.null_basis, cols);
    Matrix<T> nt = n.transpose();
    Matrix<T> proj = Matrix<T>::identity(cols) - n * inverse(nt * n) * nt;
    out.particular_map = proj * pivot_map;
    return out;
}

template <class T>
AffineSolveResult<T> affine_solve(const Matrix<T>& m, const Vector<T>& b) {
    if (b.size() != m.rows()) throw DimensionError("affine_solve: right-hand side has wrong length");
    auto op = solve_operator(m);
    double scale = std::max(m.max_abs(), max_abs(b));
    for (const auto& w : op.left_null) {
        T r = dot(w, b);
        if (!ScalarTraits<T>::is_zero(r, scale)) return Infeasible<T>{w};
    }
    return AffineSolution<T>{op.particular_map * b, op.null_basis};
}

template <class T>
T symplectic_pairing(const Tangent<T>& u, const Tangent<T>& v) {
    const std::size_t n = u.dx.size();
    if (u.dp.size() != n || v.dx.size() != n || v.dp.size() != n)
        throw DimensionError("symplectic_pairing: tangent vectors over different slices");
    T s(0);
    for (std::size_t j = 0; j < n; ++j) s += u.dx[j] * v.dp[j] - v.dx[j] * u.dp[j];
    return s;
}

template <class T>
bool in_span(const std::vector<Vector<T>>& basis, const Vector<T>& v) {
    if (is_zero_vector(v)) return true;
    if (basis.empty()) return false;
    std::size_t r0 = rank(Matrix<T>::from_rows(basis, v.size()));
    auto with = basis;
    with.push_back(v);
    return rank(Matrix<T>::from_rows(with, v.size())) == r0;
}

template <class T>
Vector<T> span_coefficients(const std::vector<Vector<T>>& basis, const Vector<T>& v) {
    if (basis.empty()) {
        if (!is_zero_vector(v)) throw DimensionError("vector not in span");
        return {};
    }
    auto res = affine_solve(Matrix<T>::from_cols(basis, v.size()), v);
    if (std::holds_alternative<Infeasible<T>>(res)) throw DimensionError("vector not in span");
    return std::get<AffineSolution<T>>(res).particular;
}

template <class T>
std::vector<Vector<T>> span_intersection(const std::vector<Vector<T>>& u, const std::vector<Vector<T>>& v,
                                         std::size_t dim) {
    if (u.empty() || v.empty()) return {};
    // [Uᵀ | -Vᵀ] (a; b) = 0  ->  Σ a_i u_i lies in both.
    Matrix<T> m(dim, u.size() + v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t k = 0; k < dim; ++k) m(k, i) = u[i][k];
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t k = 0; k < dim; ++k) m(k, u.size() + i) = -v[i][k];
    auto ns = rank_nullspace(m);
    std::vector<Vector<T>> common;
    for (const auto& z : ns.right_null) {
        Vector<T> w(dim, T(0));
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t k = 0; k < dim; ++k) w[k] += z[i] * u[i][k];
        common.push_back(std::move(w));
    }
    return canonical_basis(common, dim);
}

template <class T>
std::vector<std::size_t> independent_subset(const std::vector<Vector<T>>& vectors, std::size_t dim) {
    std::vector<std::size_t> chosen;
    std::vector<Vector<T>> kept;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (in_span(kept, vectors[i])) continue;
        kept.push_back(vectors[i]);
        chosen.push_back(i);
        if (kept.size() == dim) break;
    }
    return chosen;
}

template <class T>
AffineSystem<T> reduce_affine(const std::vector<Vector<T>>& rows, std::size_t nvars) {
    AffineSystem<T> out;
    if (rows.empty()) return out;
    auto e = row_reduce(Matrix<T>::from_rows(rows, nvars + 1), nvars);
    double scale = e.reduced.max_abs();
    for (std::size_t i = 0; i < e.reduced.rows(); ++i) {
        Vector<T> r = e.reduced.row(i);
        if (i < e.pivots.size()) {
            out.rows.push_back(std::move(r));
        } else if (!ScalarTraits<T>::is_zero(r[nvars], scale)) {
            out.feasible = false;
        }
    }
    return out;
}

template <class T>
AffineSystem<T> eliminate_variables(const std::vector<Vector<T>>& rows, const std::vector<bool>& drop) {
    const std::size_t nvars = drop.size();
    std::vector<std::size_t> order, kept;
    for (std::size_t i = 0; i < nvars; ++i)
        if (drop[i]) order.push_back(i);
    const std::size_t ndrop = order.size();
    for (std::size_t i = 0; i < nvars; ++i)
        if (!drop[i]) {
            order.push_back(i);
            kept.push_back(i);
        }
    if (rows.empty()) return {};
    Matrix<T> m(rows.size(), nvars + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != nvars + 1) throw DimensionError("affine row has wrong length");
        for (std::size_t j = 0; j < nvars; ++j) m(r, j) = rows[r][order[j]];
        m(r, nvars) = rows[r][nvars];
    }
    auto e = row_reduce(m, ndrop);
    // Rows that cancel out leave float noise behind; judge it against the input,
    // not against the (tiny) projected system.
    const double scale = m.max_abs() * static_cast<double>(nvars + 1);
    for (std::size_t i = e.pivots.size(); i < e.reduced.rows(); ++i)
        for (std::size_t j = ndrop; j <= nvars; ++j)
            if (ScalarTraits<T>::is_zero(e.reduced(i, j), scale)) e.reduced(i, j) = T(0);
    std::vector<Vector<T>> projected;
    for (std::size_t i = e.pivots.size(); i < e.reduced.rows(); ++i) {
        Vector<T> r(kept.size() + 1);
        for (std::size_t j = 0; j < kept.size(); ++j) r[j] = e.reduced(i, ndrop + j);
        r[kept.size()] = e.reduced(i, nvars);
        projected.push_back(std::move(r));
    }
    return reduce_affine(projected, kept.size());
}

#define DISEVO_INSTANTIATE_KERNEL(T)                                                                    \
    template RowEchelon<T> row_reduce<T>(const Matrix<T>&, std::size_t);                                \
    template std::size_t rank<T>(const Matrix<T>&);                                                     \
    template NullSpaces<T> rank_nullspace<T>(const Matrix<T>&);                                         \
    template std::vector<Vector<T>> canonical_basis<T>(const std::vector<Vector<T>>&, std::size_t);     \
    template AffineSolveResult<T> affine_solve<T>(const Matrix<T>&, const Vector<T>&);                  \
    template SolveOperator<T> solve_operator<T>(const Matrix<T>&);                                      \
    template Matrix<T> inverse<T>(const Matrix<T>&);                                                    \
    template T symplectic_pairing<T>(const Tangent<T>&, const Tangent<T>&);                             \
    template bool in_span<T>(const std::vector<Vector<T>>&, const Vector<T>&);                          \
    template Vector<T> span_coefficients<T>(const std::vector<Vector<T>>&, const Vector<T>&);           \
    template std::vector<Vector<T>> span_intersection<T>(const std::vector<Vector<T>>&,                 \
                                                         const std::vector<Vector<T>>&, std::size_t);   \
    template std::vector<std::size_t> independent_subset<T>(const std::vector<Vector<T>>&, std::size_t); \
    template AffineSystem<T> reduce_affine<T>(const std::vector<Vector<T>>&, std::size_t);              \
    template AffineSystem<T> eliminate_variables<T>(const std::vector<Vector<T>>&, const std::vector<bool>&);

DISEVO_INSTANTIATE_KERNEL(Rational)
DISEVO_INSTANTIATE_KERNEL(double)

}  // namespace disevo
