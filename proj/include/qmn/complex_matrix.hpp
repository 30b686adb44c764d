#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qmn/errors.hpp"
#include "qmn/indexing.hpp"

namespace qmn {

using Complex = std::complex<double>;

/// Default cap on the total Hilbert-space dimension of any dense operator.
inline constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 14;

/// Hard ceiling independent of the configurable cap; guards allocation size.
inline constexpr std::size_t kAbsoluteMaxDim = std::size_t{1} << 17;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() : dim_(1), entries_(1, Complex{}) {}

    explicit ComplexMatrix(std::size_t dim) : dim_(checked_dim(dim)), entries_(dim * dim, Complex{}) {}

    ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
        : dim_(checked_dim(dim)), entries_(std::move(entries)) {
        if (entries_.size() != dim_ * dim_) {
            throw ValidationError("ComplexMatrix: entry count must equal dim^2");
        }
    }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return dim_; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

    const std::vector<Complex>& entries() const { return entries_; }

private:
    static std::size_t checked_dim(std::size_t dim) {
        if (dim == 0) throw ValidationError("ComplexMatrix: dim must be >= 1");
        if (dim > kAbsoluteMaxDim) throw CapacityError("ComplexMatrix: dim exceeds hard ceiling");
        return dim;
    }

    std::size_t dim_;
    std::vector<Complex> entries_;
};

namespace detail {
inline void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw ValidationError(std::string(op) + ": dimension mismatch");
    }
}
}  // namespace detail

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require_same_dim(a, b, "operator+");
    ComplexMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim() * a.dim(); ++i) {
        out(i / a.dim(), i % a.dim()) = a.entries()[i] + b.entries()[i];
    }
    return out;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require_same_dim(a, b, "operator-");
    ComplexMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim() * a.dim(); ++i) {
        out(i / a.dim(), i % a.dim()) = a.entries()[i] - b.entries()[i];
    }
    return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require_same_dim(a, b, "operator*");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

inline ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    ComplexMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = s * a(i, j);
    return out;
}

inline ComplexMatrix operator*(double s, const ComplexMatrix& a) { return Complex{s, 0.0} * a; }

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = std::conj(a(j, i));
    return out;
}

inline Complex trace(const ComplexMatrix& a) {
    Complex t{};
    for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

inline double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const Complex& e : a.entries()) s += std::norm(e);
    return std::sqrt(s);
}

inline double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const Complex& e : a.entries()) m = std::max(m, std::abs(e));
    return m;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require_same_dim(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    }
    return m;
}

inline bool is_hermitian(const ComplexMatrix& a, double tol) {
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = i; j < a.dim(); ++j) {
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
        }
    }
    return true;
}

/// Kronecker product; entry (i*db+k, j*db+l) = a(i,j)*b(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                          std::size_t max_dim = kDefaultMaxDim) {
    const std::size_t da = a.dim(), db = b.dim();
    if (db != 0 && da > max_dim / db) {
        throw CapacityError("kron: product dimension exceeds capacity cap");
    }
    ComplexMatrix out(da * db);
    for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t j = 0; j < da; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t k = 0; k < db; ++k) {
                for (std::size_t l = 0; l < db; ++l) {
                    out(i * db + k, j * db + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

/// Trace out the listed sites of a multi-site operator. `dims` lists every
/// site dimension, site 0 most significant; the result keeps the remaining
/// sites in their original order.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                                   std::vector<int> traced_sites) {
    const std::size_t total = detail::checked_product(dims, kAbsoluteMaxDim);
    if (total != rho.dim()) {
        throw ValidationError("partial_trace: product of dims must equal the matrix dimension");
    }
    std::sort(traced_sites.begin(), traced_sites.end());
    if (std::adjacent_find(traced_sites.begin(), traced_sites.end()) != traced_sites.end()) {
        throw ValidationError("partial_trace: duplicate site index in traced set");
    }
    for (int s : traced_sites) {
        if (s < 0 || static_cast<std::size_t>(s) >= dims.size()) {
            throw ValidationError("partial_trace: traced site index out of range");
        }
    }

    const std::vector<std::size_t> strides = detail::radix_strides(dims);
    std::vector<int> kept;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        if (!std::binary_search(traced_sites.begin(), traced_sites.end(), static_cast<int>(s))) {
            kept.push_back(static_cast<int>(s));
        }
    }

    // Flat offsets into the full index for every kept / traced assignment.
    auto offsets_for = [&](const std::vector<int>& sites) {
        std::size_t count = 1;
        for (int s : sites) count *= dims[static_cast<std::size_t>(s)];
        std::vector<std::size_t> offsets(count, 0);
        std::size_t repeat = count;
        for (int s : sites) {
            const std::size_t d = dims[static_cast<std::size_t>(s)];
            repeat /= d;
            for (std::size_t idx = 0; idx < count; ++idx) {
                offsets[idx] += ((idx / repeat) % d) * strides[static_cast<std::size_t>(s)];
            }
        }
        return offsets;
    };

    const std::vector<std::size_t> kept_off = offsets_for(kept);
    const std::vector<std::size_t> traced_off = offsets_for(traced_sites);

    ComplexMatrix out(kept_off.size());
    for (std::size_t r = 0; r < kept_off.size(); ++r) {
        for (std::size_t c = 0; c < kept_off.size(); ++c) {
            Complex sum{};
            for (std::size_t t : traced_off) {
                sum += rho(kept_off[r] + t, kept_off[c] + t);
            }
            out(r, c) = sum;
        }
    }
    return out;
}

}  // namespace qmn
