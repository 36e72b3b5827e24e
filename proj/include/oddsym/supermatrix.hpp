#pragma once

#include <functional>
#include <vector>

#include "oddsym/superpoly.hpp"

namespace oddsym {

// ---------------------------------------------------------------------------
// small exact rational matrix helpers (bodies of supermatrices)
// ---------------------------------------------------------------------------

using RationalMatrix = std::vector<std::vector<Rational>>;

inline RationalMatrix rational_identity(std::size_t n) {
    RationalMatrix I(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

/// Gauss-Jordan inverse; throws SingularBody on a singular input.
inline RationalMatrix rational_inverse(RationalMatrix a) {
    std::size_t n = a.size();
    RationalMatrix inv = rational_identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) fail(ErrorKind::SingularBody, "matrix body is singular");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        Rational p = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a[i][col] == 0) continue;
            Rational f = a[i][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] -= f * a[col][j];
                inv[i][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

inline std::size_t rational_rank(RationalMatrix a) {
    if (a.empty()) return 0;
    std::size_t rows = a.size(), cols = a[0].size(), rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || a[i][col] == 0) continue;
            Rational f = a[i][col] / a[rank][col];
            for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

// ---------------------------------------------------------------------------
// scalar shims shared by SuperNumber and SuperPolynomial entries
// ---------------------------------------------------------------------------

inline Rational body_of(const SuperNumber& a) { return a.body(); }
inline Rational body_of(const SuperPolynomial& p) { return p.constant_body(); }

inline SuperNumber from_rational(const SuperNumber& like, const Rational& r) {
    return SuperNumber::scalar(like.generator_count(), r);
}
inline SuperPolynomial from_rational(const SuperPolynomial& like, const Rational& r) {
    return SuperPolynomial::constant(like.system(), r);
}

inline Parity value_parity(const SuperNumber& a) { return a.parity(); }
inline Parity value_parity(const SuperPolynomial& p) { return p.parity_of(); }

inline bool value_is_zero(const SuperNumber& a) { return a.is_zero(); }
inline bool value_is_zero(const SuperPolynomial& p) { return p.is_zero(); }

/// Exact inverse of a scalar entry (SuperNumber, or unit-plus-nilpotent
/// polynomial).
struct ExactInverter {
    SuperNumber operator()(const SuperNumber& a) const { return a.inverse(); }
    SuperPolynomial operator()(const SuperPolynomial& p) const { return p.inverse_exact(); }
};

/// Inverse modulo polynomial degree; lets Berezinians of polynomial
/// Jacobians be carried as truncated series.
struct TruncatedInverter {
    int degree;
    SuperPolynomial operator()(const SuperPolynomial& p) const {
        return p.inverse_truncated(degree);
    }
};

// ---------------------------------------------------------------------------
// SuperMatrix
// ---------------------------------------------------------------------------

/// Matrix over SuperNumbers or SuperPolynomials with parity signatures on
/// rows and columns.  A matrix is "even" when every entry's parity equals
/// p(row)+p(col); inverse and Berezinian are defined for square even
/// matrices whose body is invertible.
template <class T>
class SuperMatrix {
public:
    SuperMatrix(std::vector<Parity> row_parity, std::vector<Parity> col_parity, const T& fill)
        : row_par_(std::move(row_parity)), col_par_(std::move(col_parity)),
          e_(row_par_.size(), std::vector<T>(col_par_.size(), fill)) {}

    static SuperMatrix identity(const std::vector<Parity>& parity, const T& sample) {
        SuperMatrix m(parity, parity, from_rational(sample, Rational(0)));
        for (std::size_t i = 0; i < parity.size(); ++i)
            m.e_[i][i] = from_rational(sample, Rational(1));
        return m;
    }

    std::size_t rows() const { return row_par_.size(); }
    std::size_t cols() const { return col_par_.size(); }
    const std::vector<Parity>& row_parity() const { return row_par_; }
    const std::vector<Parity>& col_parity() const { return col_par_; }

    T& at(std::size_t i, std::size_t j) { return e_[i][j]; }
    const T& at(std::size_t i, std::size_t j) const { return e_[i][j]; }

    bool is_square_aligned() const { return row_par_ == col_par_; }

    /// Every nonzero entry has parity p(row)+p(col).
    bool is_even() const {
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) {
                if (value_is_zero(e_[i][j])) continue;
                Parity want =
                    parity_from_bit(parity_bit(row_par_[i]) ^ parity_bit(col_par_[j]));
                if (value_parity(e_[i][j]) != want) return false;
            }
        return true;
    }

    SuperMatrix operator+(const SuperMatrix& o) const {
        require_shape(o.row_par_ == row_par_ && o.col_par_ == col_par_);
        SuperMatrix r = *this;
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) r.e_[i][j] = r.e_[i][j] + o.e_[i][j];
        return r;
    }

    SuperMatrix operator-(const SuperMatrix& o) const {
        require_shape(o.row_par_ == row_par_ && o.col_par_ == col_par_);
        SuperMatrix r = *this;
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) r.e_[i][j] = r.e_[i][j] - o.e_[i][j];
        return r;
    }

    SuperMatrix operator*(const SuperMatrix& o) const {
        require_shape(col_par_ == o.row_par_);
        SuperMatrix r(row_par_, o.col_par_, from_rational(e_[0][0], Rational(0)));
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < o.cols(); ++j) {
                T acc = from_rational(e_[0][0], Rational(0));
                for (std::size_t k = 0; k < cols(); ++k)
                    acc = acc + e_[i][k] * o.e_[k][j];
                r.e_[i][j] = acc;
            }
        return r;
    }

    bool operator==(const SuperMatrix& o) const {
        return row_par_ == o.row_par_ && col_par_ == o.col_par_ && e_ == o.e_;
    }

    SuperMatrix map(const std::function<T(const T&)>& f) const {
        SuperMatrix r = *this;
        for (auto& row : r.e_)
            for (auto& v : row) v = f(v);
        return r;
    }

    RationalMatrix body() const {
        RationalMatrix b(rows(), std::vector<Rational>(cols(), 0));
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) b[i][j] = body_of(e_[i][j]);
        return b;
    }

    /// Exact two-sided inverse for square even matrices with invertible body:
    /// invert the body over the rationals, then run the terminating
    /// correction series on the nilpotent remainder.
    SuperMatrix inverse() const {
        require_shape(is_square_aligned());
        if (!is_even()) fail(ErrorKind::ParityViolation, "inverse requires an even matrix");
        const T& sample = e_[0][0];
        RationalMatrix binv = rational_inverse(body());
        SuperMatrix b_inv(row_par_, row_par_, from_rational(sample, Rational(0)));
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < rows(); ++j)
                b_inv.e_[i][j] = from_rational(sample, binv[i][j]);
        // N = body^{-1} * (A - body); inverse = (sum (-N)^k) * body^{-1}
        SuperMatrix nil = b_inv * *this - identity(row_par_, sample);
        SuperMatrix acc = identity(row_par_, sample);
        SuperMatrix p = acc;
        int cap = max_series_length();
        for (int k = 1; k <= cap; ++k) {
            p = p * nil;
            bool all_zero = true;
            for (std::size_t i = 0; i < rows() && all_zero; ++i)
                for (std::size_t j = 0; j < rows() && all_zero; ++j)
                    if (!value_is_zero(p.e_[i][j])) all_zero = false;
            if (all_zero) break;
            if (k == cap)
                fail(ErrorKind::NotNilpotent,
                     "matrix correction series did not terminate; entries are not "
                     "unit-plus-nilpotent");
            if (k & 1) acc = acc - p;
            else acc = acc + p;
        }
        return acc * b_inv;
    }

    /// Berezinian (superdeterminant) of a square even matrix:
    /// det(A00 - A01 A11^{-1} A10) * det(A11)^{-1}, blocks split by parity.
    /// `inv` supplies the scalar inverse (exact or truncated).
    template <class Inverter>
    T berezinian(Inverter inv) const {
        require_shape(is_square_aligned());
        if (!is_even()) fail(ErrorKind::ParityViolation, "Berezinian requires an even matrix");
        std::vector<std::size_t> ev, od;
        for (std::size_t i = 0; i < rows(); ++i)
            (row_par_[i] == Parity::Even ? ev : od).push_back(i);
        const T& sample = e_[0][0];
        if (od.empty()) return det(slice(ev, ev));
        if (ev.empty()) return inv(det(slice(od, od)));
        auto a00 = slice(ev, ev);
        auto a01 = slice(ev, od);
        auto a10 = slice(od, ev);
        auto a11 = slice(od, od);
        // invert A11 through its own correction series (entries even)
        SuperMatrix<T> a11m(std::vector<Parity>(od.size(), Parity::Even),
                            std::vector<Parity>(od.size(), Parity::Even),
                            from_rational(sample, Rational(0)));
        for (std::size_t i = 0; i < od.size(); ++i)
            for (std::size_t j = 0; j < od.size(); ++j) a11m.e_[i][j] = a11[i][j];
        SuperMatrix<T> a11inv = a11m.inverse();
        std::vector<std::vector<T>> schur = a00;
        for (std::size_t i = 0; i < ev.size(); ++i)
            for (std::size_t j = 0; j < ev.size(); ++j) {
                T acc = from_rational(sample, Rational(0));
                for (std::size_t k = 0; k < od.size(); ++k)
                    for (std::size_t l = 0; l < od.size(); ++l)
                        acc = acc + a01[i][k] * a11inv.e_[k][l] * a10[l][j];
                schur[i][j] = schur[i][j] - acc;
            }
        return det(schur) * inv(det(a11));
    }

    T berezinian() const { return berezinian(ExactInverter{}); }

private:
    void require_shape(bool ok) const {
        if (!ok) fail(ErrorKind::ShapeMismatch, "matrix shapes or parity signatures incompatible");
    }

    int max_series_length() const;

    std::vector<std::vector<T>> slice(const std::vector<std::size_t>& ri,
                                      const std::vector<std::size_t>& ci) const {
        std::vector<std::vector<T>> s;
        s.reserve(ri.size());
        for (auto i : ri) {
            std::vector<T> row;
            row.reserve(ci.size());
            for (auto j : ci) row.push_back(e_[i][j]);
            s.push_back(std::move(row));
        }
        return s;
    }

    /// Laplace expansion along the first column; entries commute (all even).
    static T det(const std::vector<std::vector<T>>& m) {
        std::size_t n = m.size();
        if (n == 1) return m[0][0];
        T acc = from_rational(m[0][0], Rational(0));
        for (std::size_t i = 0; i < n; ++i) {
            if (value_is_zero(m[i][0])) continue;
            std::vector<std::vector<T>> minor;
            minor.reserve(n - 1);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                std::vector<T> row(m[r].begin() + 1, m[r].end());
                minor.push_back(std::move(row));
            }
            T term = m[i][0] * det(minor);
            if (i & 1) acc = acc - term;
            else acc = acc + term;
        }
        return acc;
    }

    std::vector<Parity> row_par_, col_par_;
    std::vector<std::vector<T>> e_;
};

template <>
inline int SuperMatrix<SuperNumber>::max_series_length() const {
    return e_[0][0].generator_count() + 2;
}

template <>
inline int SuperMatrix<SuperPolynomial>::max_series_length() const {
    const auto& sys = e_[0][0].system();
    return sys->generator_count + sys->odd_count() + 2;
}

/// Apply an operator matrix to a vector field: the image of X^A d_A has
/// components (X L)^B = sum_A X^A L[A][B].  Row-vector convention; operator
/// composition is then plain matrix product.
inline VectorField apply(const SuperMatrix<SuperPolynomial>& L, const VectorField& X) {
    if (L.rows() != X.components.size() || L.cols() != L.rows())
        fail(ErrorKind::ShapeMismatch, "operator matrix must be square over the field's coordinates");
    VectorField r = VectorField::zero(X.sys, X.parity);
    for (std::size_t b = 0; b < L.cols(); ++b) {
        SuperPolynomial acc = SuperPolynomial::zero(X.sys);
        for (std::size_t a = 0; a < L.rows(); ++a)
            acc += X.components[a] * L.at(a, b);
        r.components[b] = acc;
    }
    return r;
}

/// Same contraction for a vector of values at a point.
inline std::vector<SuperNumber> apply(const SuperMatrix<SuperNumber>& L,
                                      const std::vector<SuperNumber>& x) {
    if (L.rows() != x.size() || L.cols() != L.rows())
        fail(ErrorKind::ShapeMismatch, "operator matrix must be square over the vector size");
    std::vector<SuperNumber> r;
    r.reserve(L.cols());
    for (std::size_t b = 0; b < L.cols(); ++b) {
        SuperNumber acc(x[0].generator_count());
        for (std::size_t a = 0; a < L.rows(); ++a) acc += x[a] * L.at(a, b);
        r.push_back(std::move(acc));
    }
    return r;
}

/// Coordinate-basis parities of a system, even block then odd block.
inline std::vector<Parity> system_parities(const CoordinateSystem& sys) {
    std::vector<Parity> p;
    p.reserve(sys.size());
    for (int i = 0; i < sys.size(); ++i) p.push_back(sys.parity_of(i));
    return p;
}

} // namespace oddsym
