#pragma once

// Small dense complex matrices and a cyclic-Jacobi Hermitian eigensolver.
// Everything here runs at desk scale (dimension <= 16), so simplicity and
// accuracy win over asymptotics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace advtest {

using Complex = std::complex<double>;

class CMat {
public:
    CMat() = default;
    CMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}

    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    friend CMat operator+(const CMat& x, const CMat& y) {
        check_same(x, y);
        CMat r(x.rows_, x.cols_);
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
        return r;
    }
    friend CMat operator-(const CMat& x, const CMat& y) {
        check_same(x, y);
        CMat r(x.rows_, x.cols_);
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = x.a_[i] - y.a_[i];
        return r;
    }
    friend CMat operator*(Complex s, const CMat& x) {
        CMat r(x.rows_, x.cols_);
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = s * x.a_[i];
        return r;
    }
    friend CMat operator*(const CMat& x, const CMat& y) {
        if (x.cols_ != y.rows_) throw std::invalid_argument("CMat: shape mismatch in product");
        CMat r(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                const Complex v = x(i, k);
                if (v == Complex(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += v * y(k, j);
            }
        return r;
    }

    CMat adjoint() const {
        CMat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    CMat transpose() const {
        CMat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Complex trace() const {
        if (rows_ != cols_) throw std::invalid_argument("CMat: trace of non-square matrix");
        Complex t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double linf_norm() const {
        double m = 0.0;
        for (const Complex& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double hermitian_deviation() const {
        if (rows_ != cols_) return std::numeric_limits<double>::infinity();
        double dev = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                dev = std::max(dev, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return dev;
    }

private:
    static void check_same(const CMat& x, const CMat& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            throw std::invalid_argument("CMat: shape mismatch");
    }
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> a_;
};

inline CMat kron(const CMat& x, const CMat& y) {
    CMat r(x.rows() * y.rows(), x.cols() * y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const Complex v = x(i, j);
            if (v == Complex(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < y.rows(); ++k)
                for (std::size_t l = 0; l < y.cols(); ++l)
                    r(i * y.rows() + k, j * y.cols() + l) = v * y(k, l);
        }
    return r;
}

struct EigResult {
    std::vector<double> values;  // ascending
    CMat vectors;                // columns are the eigenvectors
};

// Cyclic Jacobi for Hermitian matrices: repeated 2x2 unitary rotations zero
// the off-diagonal entries; threshold 1e-14, dimension capped at 16.
inline EigResult hermitian_eig(const CMat& h) {
    const std::size_t n = h.rows();
    if (n != h.cols()) throw std::invalid_argument("hermitian_eig: non-square input");
    if (n > 16) throw std::invalid_argument("hermitian_eig: dimension exceeds 16");
    if (h.hermitian_deviation() > 1e-10 * std::max(h.linf_norm(), 1.0))
        throw std::invalid_argument("hermitian_eig: input not Hermitian");

    CMat a = h;
    // exactly symmetrize to keep the iteration on the Hermitian manifold
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = Complex(a(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex m = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = m;
            a(j, i) = std::conj(m);
        }
    }
    CMat v = CMat::identity(n);
    const double scale = std::max(a.linf_norm(), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= 1e-14 * scale) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double m = std::abs(apq);
                if (m <= 1e-16 * scale) continue;
                // phase that makes the pivot real, then a real Jacobi rotation
                const Complex phase = apq / m;
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * m, app - aqq);
                const double c = std::cos(theta), s = std::sin(theta);
                // rotation J = [[c, -s*phase], [s*conj(phase), c]] on (p, q);
                // the update is A <- J^dagger A J, eigenvectors V <- V J
                const Complex sp = s * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {  // A <- A J (columns)
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp + sp * akq;
                    a(k, q) = -std::conj(sp) * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {  // A <- J^dagger A (rows)
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(sp) * aqk;
                    a(q, k) = -sp * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp + sp * vkq;
                    v(k, q) = -std::conj(sp) * vkp + c * vkq;
                }
            }
    }
    EigResult r;
    r.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.values[i] = a(i, i).real();
    // sort ascending, permuting eigenvector columns alongside
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (r.values[order[j]] < r.values[order[i]]) std::swap(order[i], order[j]);
    EigResult sorted;
    sorted.values.resize(n);
    sorted.vectors = CMat(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        sorted.values[i] = r.values[order[i]];
        for (std::size_t k = 0; k < n; ++k) sorted.vectors(k, i) = v(k, order[i]);
    }
    return sorted;
}

// f applied to the spectrum: V f(Lambda) V^dagger.
template <class F>
CMat hermitian_function(const CMat& h, F&& f) {
    const auto eig = hermitian_eig(h);
    const std::size_t n = h.rows();
    CMat r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double fv = f(eig.values[k]);
        if (fv == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += fv * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return r;
}

}  // namespace advtest
