#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "qmn/errors.hpp"

namespace qmn::detail {

// Mixed-radix layout with site 0 as the most significant digit:
// index = sum_k digit_k * stride_k, stride_k = prod_{j>k} dims[j].
inline std::vector<std::size_t> radix_strides(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) {
        strides[k - 1] = strides[k] * dims[k];
    }
    return strides;
}

inline std::size_t radix_digit(std::size_t index, std::size_t stride, std::size_t dim) {
    return (index / stride) % dim;
}

// Product of dimensions with an overflow guard; throws CapacityError past the cap.
inline std::size_t checked_product(const std::vector<std::size_t>& dims, std::size_t cap) {
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw ValidationError("site dimensions must be positive");
        if (total > cap / d) throw CapacityError("joint dimension exceeds capacity cap");
        total *= d;
    }
    return total;
}

}  // namespace qmn::detail
