#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "qmn/complex_matrix.hpp"
#include "qmn/eigh.hpp"
#include "qmn/errors.hpp"
#include "qmn/indexing.hpp"

namespace qmn {

/// Hermitian, unit-trace, positive-semidefinite operator on a multi-site space.
struct DensityMatrix {
    std::vector<std::size_t> dims;
    ComplexMatrix matrix;
};

struct DensityTolerances {
    double hermiticity = 1e-10;
    double trace = 1e-10;
    double min_eigenvalue = -1e-10;
};

inline void validate_density_matrix(const DensityMatrix& rho, const DensityTolerances& tol = {}) {
    const std::size_t total = detail::checked_product(rho.dims, kAbsoluteMaxDim);
    if (total != rho.matrix.dim()) {
        throw ValidationError("DensityMatrix: dims product must equal the matrix dimension");
    }
    if (!is_hermitian(rho.matrix, tol.hermiticity)) {
        throw ValidationError("DensityMatrix: not Hermitian within tolerance");
    }
    if (std::abs(trace(rho.matrix) - Complex{1.0, 0.0}) > tol.trace) {
        throw ValidationError("DensityMatrix: trace must be 1 within tolerance");
    }
    const HermitianEigen es = eigh(rho.matrix, EighOptions{.hermiticity_tol = tol.hermiticity});
    if (es.eigenvalues.front() < tol.min_eigenvalue) {
        throw ValidationError("DensityMatrix: negative eigenvalue beyond tolerance");
    }
}

inline DensityMatrix make_density_matrix(std::vector<std::size_t> dims, ComplexMatrix matrix,
                                         const DensityTolerances& tol = {}) {
    DensityMatrix rho{std::move(dims), std::move(matrix)};
    validate_density_matrix(rho, tol);
    return rho;
}

struct GibbsResult {
    DensityMatrix rho;
    double z;      // Tr exp(-beta H), unshifted convention
    double log_z;
};

/// Thermal state exp(-beta H) / Z via spectral calculus. The spectrum is
/// shifted by its minimum before exponentiating so large beta cannot overflow.
inline GibbsResult gibbs_state(const ComplexMatrix& hamiltonian, double beta,
                               std::vector<std::size_t> dims) {
    if (!std::isfinite(beta)) throw ValidationError("gibbs_state: beta must be finite");
    const std::size_t total = detail::checked_product(dims, kAbsoluteMaxDim);
    if (total != hamiltonian.dim()) {
        throw ValidationError("gibbs_state: dims product must equal the Hamiltonian dimension");
    }

    const HermitianEigen es = eigh(hamiltonian);
    const std::size_t n = hamiltonian.dim();
    const double min_energy = es.eigenvalues.front();

    std::vector<double> weights(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        weights[k] = std::exp(-beta * (es.eigenvalues[k] - min_energy));
        sum += weights[k];
    }

    const ComplexMatrix& v = es.eigenvectors;
    ComplexMatrix rho(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{};
            for (std::size_t k = 0; k < n; ++k) {
                acc += v(i, k) * (weights[k] / sum) * std::conj(v(j, k));
            }
            rho(i, j) = acc;
        }
    }

    GibbsResult out{DensityMatrix{std::move(dims), std::move(rho)},
                    std::exp(-beta * min_energy) * sum,
                    -beta * min_energy + std::log(sum)};
    return out;
}

/// -sum lambda ln lambda over the spectrum, in nats; eigenvalues below
/// `eigenvalue_clamp` contribute zero.
inline double von_neumann_entropy(const DensityMatrix& rho, double eigenvalue_clamp = 1e-14) {
    const HermitianEigen es = eigh(rho.matrix, EighOptions{.hermiticity_tol = 1e-10});
    double s = 0.0;
    for (double lambda : es.eigenvalues) {
        if (lambda >= eigenvalue_clamp) s -= lambda * std::log(lambda);
    }
    return std::max(s, 0.0);
}

}  // namespace qmn
