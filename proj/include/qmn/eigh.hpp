#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qmn/complex_matrix.hpp"
#include "qmn/errors.hpp"

namespace qmn {

/// Spectral decomposition of a Hermitian matrix: A = V diag(eigenvalues) V†.
struct HermitianEigen {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // unitary; column k pairs with eigenvalues[k]
};

struct EighOptions {
    double hermiticity_tol = 1e-12;    // max |a_ij - conj(a_ji)| accepted on input
    double convergence_factor = 1e-14; // off-diagonal target = factor * ||A||_F
    int max_sweeps = 100;
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t p = 0; p + 1 < a.dim(); ++p) {
        for (std::size_t q = p + 1; q < a.dim(); ++q) s += 2.0 * std::norm(a(p, q));
    }
    return std::sqrt(s);
}

// One two-sided rotation zeroing w(p,q). w stays Hermitian; v accumulates
// the product of rotations on the right.
inline void jacobi_rotate(ComplexMatrix& w, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex apq = w(p, q);
    const double r = std::abs(apq);
    const double app = w(p, p).real();
    const double aqq = w(q, q).real();

    const double tau = (app - aqq) / (2.0 * r);
    double t;
    if (tau >= 0.0) {
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    } else {
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    }
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const Complex phase = apq / r;

    const std::size_t n = w.dim();
    for (std::size_t k = 0; k < n; ++k) {
        if (k == p || k == q) continue;
        const Complex wkp = w(k, p);
        const Complex wkq = w(k, q);
        w(k, p) = c * wkp + s * std::conj(phase) * wkq;
        w(k, q) = -s * phase * wkp + c * wkq;
        w(p, k) = std::conj(w(k, p));
        w(q, k) = std::conj(w(k, q));
    }
    w(p, p) = Complex{app + r * t, 0.0};
    w(q, q) = Complex{aqq - r * t, 0.0};
    w(p, q) = Complex{};
    w(q, p) = Complex{};

    for (std::size_t k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = c * vkp + s * std::conj(phase) * vkq;
        v(k, q) = -s * phase * vkp + c * vkq;
    }
}

}  // namespace detail

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
inline HermitianEigen eigh(const ComplexMatrix& a, const EighOptions& opts = {}) {
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            if (std::abs(a(i, j) - std::conj(a(j, i))) > opts.hermiticity_tol) {
                throw ValidationError("eigh: input is not Hermitian within tolerance");
            }
        }
    }

    // Work on the exactly Hermitian part.
    ComplexMatrix w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w(i, i) = Complex{a(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            w(i, j) = avg;
            w(j, i) = std::conj(avg);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double threshold = opts.convergence_factor * frobenius_norm(w);
    const double skip_tol = threshold / (2.0 * static_cast<double>(n));

    int sweeps = 0;
    while (detail::off_diagonal_norm(w) > threshold) {
        if (sweeps++ >= opts.max_sweeps) {
            throw NumericalError("eigh: Jacobi failed to converge within " +
                                 std::to_string(opts.max_sweeps) + " sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(w(p, q)) <= skip_tol) continue;
                detail::jacobi_rotate(w, v, p, q);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return w(i, i).real() < w(j, j).real(); });

    HermitianEigen out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = w(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// Spectral functional calculus: V diag(f(lambda)) V† for Hermitian input.
template <class F>
ComplexMatrix matrix_function(const ComplexMatrix& a, F&& f, const EighOptions& opts = {}) {
    const HermitianEigen es = eigh(a, opts);
    const std::size_t n = a.dim();

    std::vector<double> mapped(n);
    for (std::size_t k = 0; k < n; ++k) {
        mapped[k] = f(es.eigenvalues[k]);
        if (!std::isfinite(mapped[k])) {
            throw DomainError("matrix_function: map undefined at eigenvalue " +
                              std::to_string(es.eigenvalues[k]));
        }
    }

    // scaled = V diag(mapped), result = scaled V†
    const ComplexMatrix& v = es.eigenvectors;
    ComplexMatrix scaled(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) scaled(i, k) = v(i, k) * mapped[k];

    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex sum{};
            for (std::size_t k = 0; k < n; ++k) sum += scaled(i, k) * std::conj(v(j, k));
            out(i, j) = sum;
        }
    }
    return out;
}

}  // namespace qmn
