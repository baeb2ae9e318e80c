#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace levelzero {

using Rational = mpq_class;
using Integer = mpz_class;
using Vec = std::vector<Rational>;

/// Floor of a rational as a signed 64-bit integer.
inline long floor_of(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (!r.fits_slong_p()) throw std::overflow_error("floor_of: value out of range");
    return r.get_si();
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "a" or "a/b" into a canonical rational.
inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline Vec zero_vec(std::size_t n) { return Vec(n, Rational(0)); }

inline Rational dot(const Vec& a, const Vec& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec scale(const Rational& c, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline bool is_zero(const Vec& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

/** Dense row-major matrix of rationals with explicit shape. */
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<Rational> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, Rational(0)) {}

    Rational& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const Rational& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Mat from_rows(const std::vector<Vec>& rs, int cols) {
        Mat m(static_cast<int>(rs.size()), cols);
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = rs[i][j];
        return m;
    }

    static Mat from_cols(const std::vector<Vec>& cs, int rows) {
        Mat m(rows, static_cast<int>(cs.size()));
        for (int j = 0; j < m.cols; ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = cs[j][i];
        return m;
    }

    Vec row(int i) const { return Vec(a.begin() + static_cast<long>(i) * cols, a.begin() + static_cast<long>(i + 1) * cols); }

    Vec col(int j) const {
        Vec v(rows);
        for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
        return v;
    }

    std::vector<Vec> columns() const {
        std::vector<Vec> out;
        for (int j = 0; j < cols; ++j) out.push_back(col(j));
        return out;
    }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    std::string key() const {
        std::ostringstream os;
        os << rows << 'x' << cols;
        for (const auto& x : a) os << ',' << x.get_str();
        return os.str();
    }
};

inline Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch");
    Mat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const Rational& v = x(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
        }
    return r;
}

inline Vec operator*(const Mat& x, const Vec& v) {
    Vec r(x.rows, Rational(0));
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r[i] += x(i, j) * v[j];
    return r;
}

/// Row vector times matrix.
inline Vec row_times(const Vec& v, const Mat& x) {
    Vec r(x.cols, Rational(0));
    for (int i = 0; i < x.rows; ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < x.cols; ++j) r[j] += v[i] * x(i, j);
    }
    return r;
}

inline Mat transpose(const Mat& x) {
    Mat r(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
    return r;
}

inline Mat operator-(const Mat& x, const Mat& y) {
    Mat r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
}

inline Mat operator+(const Mat& x, const Mat& y) {
    Mat r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
}

/** Reduced row echelon form; returns pivot columns. */
inline std::vector<int> rref(Mat& m) {
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int p = -1;
        for (int i = r; i < m.rows; ++i)
            if (m(i, c) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
        Rational inv = 1 / m(r, c);
        for (int j = 0; j < m.cols; ++j) m(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rational f = m(i, c);
            for (int j = 0; j < m.cols; ++j) m(i, j) -= f * m(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

inline int rank(Mat m) { return static_cast<int>(rref(m).size()); }

inline int rank_of_rows(const std::vector<Vec>& rows, int cols) {
    if (rows.empty()) return 0;
    return rank(Mat::from_rows(rows, cols));
}

/// Basis of {v : m v = 0}.
inline std::vector<Vec> kernel(const Mat& m) {
    Mat r = m;
    auto piv = rref(r);
    std::vector<bool> is_piv(m.cols, false);
    for (int p : piv) is_piv[p] = true;
    std::vector<Vec> basis;
    for (int f = 0; f < m.cols; ++f) {
        if (is_piv[f]) continue;
        Vec v = zero_vec(m.cols);
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r(static_cast<int>(i), f);
        basis.push_back(v);
    }
    return basis;
}

/// Common kernel of a list of linear forms on Q^dim.
inline std::vector<Vec> common_kernel(const std::vector<Vec>& forms, int dim) {
    if (forms.empty()) {
        std::vector<Vec> b;
        for (int i = 0; i < dim; ++i) {
            Vec v = zero_vec(dim);
            v[i] = 1;
            b.push_back(v);
        }
        return b;
    }
    return kernel(Mat::from_rows(forms, dim));
}

/// Some solution of m x = b, if one exists.
inline std::optional<Vec> solve(const Mat& m, const Vec& b) {
    Mat aug(m.rows, m.cols + 1);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
        aug(i, m.cols) = b[i];
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
    Vec x = zero_vec(m.cols);
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(static_cast<int>(i), m.cols);
    return x;
}

inline Rational det(Mat m) {
    if (m.rows != m.cols) throw std::invalid_argument("det of non-square matrix");
    Rational d = 1;
    int n = m.rows;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (m(i, c) != 0) {
                p = i;
                break;
            }
        if (p < 0) return 0;
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            Rational f = m(i, c) / m(c, c);
            for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

inline std::optional<Mat> inverse(const Mat& m) {
    int n = m.rows;
    Mat aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto piv = rref(aug);
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
    Mat r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
    return r;
}

/// Intersection of two subspaces given by spanning lists in Q^dim.
inline std::vector<Vec> intersect_spans(const std::vector<Vec>& u, const std::vector<Vec>& v, int dim) {
    if (u.empty() || v.empty()) return {};
    // Solve sum a_i u_i - sum b_j v_j = 0.
    Mat m(dim, static_cast<int>(u.size() + v.size()));
    for (int i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < u.size(); ++j) m(i, static_cast<int>(j)) = u[j][i];
        for (std::size_t j = 0; j < v.size(); ++j) m(i, static_cast<int>(u.size() + j)) = -v[j][i];
    }
    std::vector<Vec> out;
    for (const auto& k : kernel(m)) {
        Vec w = zero_vec(dim);
        for (std::size_t j = 0; j < u.size(); ++j) w = add(w, scale(k[j], u[j]));
        out.push_back(w);
    }
    // Reduce to a basis.
    std::vector<Vec> basis;
    for (const auto& w : out) {
        auto trial = basis;
        trial.push_back(w);
        if (rank_of_rows(trial, dim) > static_cast<int>(basis.size())) basis.push_back(w);
    }
    return basis;
}

/// Extracts a basis from a spanning list.
inline std::vector<Vec> basis_of(const std::vector<Vec>& span, int dim) {
    std::vector<Vec> basis;
    for (const auto& w : span) {
        auto trial = basis;
        trial.push_back(w);
        if (rank_of_rows(trial, dim) > static_cast<int>(basis.size())) basis.push_back(w);
    }
    return basis;
}

inline bool in_span(const std::vector<Vec>& span, const Vec& v, int dim) {
    auto trial = span;
    int r0 = rank_of_rows(span, dim);
    trial.push_back(v);
    return rank_of_rows(trial, dim) == r0;
}

inline bool same_span(const std::vector<Vec>& u, const std::vector<Vec>& v, int dim) {
    int ru = rank_of_rows(u, dim), rv = rank_of_rows(v, dim);
    if (ru != rv) return false;
    auto both = u;
    both.insert(both.end(), v.begin(), v.end());
    return rank_of_rows(both, dim) == ru;
}

inline std::string vec_key(const Vec& v) {
    std::string s;
    for (const auto& x : v) {
        s += x.get_str();
        s += ',';
    }
    return s;
}

}  // namespace levelzero
