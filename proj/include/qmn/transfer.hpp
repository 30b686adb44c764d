#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "qmn/errors.hpp"

namespace qmn {

/// Partition function Z = sum_x exp(-sum_k h_k(x_k, x_{k+1})) of a chain,
/// computed by summing out one variable at a time. edge_terms[k] is the
/// row-major arities[k] x arities[k+1] table of h(x_k, x_{k+1}).
inline double transfer_matrix_Z(const std::vector<std::vector<double>>& edge_terms,
                                const std::vector<std::size_t>& arities) {
    if (arities.size() < 2) {
        throw ValidationError("transfer_matrix_Z: chain needs at least two variables");
    }
    if (edge_terms.size() + 1 != arities.size()) {
        throw ValidationError("transfer_matrix_Z: need exactly N-1 edge terms");
    }
    for (std::size_t a : arities) {
        if (a == 0) throw ValidationError("transfer_matrix_Z: arities must be positive");
    }
    for (std::size_t k = 0; k < edge_terms.size(); ++k) {
        if (edge_terms[k].size() != arities[k] * arities[k + 1]) {
            throw ValidationError("transfer_matrix_Z: edge term table length mismatch");
        }
    }

    // z[x_{k+1}] = sum_{x_k} z[x_k] * exp(-h_k(x_k, x_{k+1}))
    std::vector<double> z(arities[0], 1.0);
    for (std::size_t k = 0; k < edge_terms.size(); ++k) {
        std::vector<double> nxt(arities[k + 1], 0.0);
        for (std::size_t xk = 0; xk < arities[k]; ++xk) {
            for (std::size_t xk1 = 0; xk1 < arities[k + 1]; ++xk1) {
                nxt[xk1] += z[xk] * std::exp(-edge_terms[k][xk * arities[k + 1] + xk1]);
            }
        }
        z = std::move(nxt);
    }
    double total = 0.0;
    for (double v : z) total += v;
    return total;
}

}  // namespace qmn
