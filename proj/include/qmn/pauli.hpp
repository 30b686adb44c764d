#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qmn/complex_matrix.hpp"
#include "qmn/errors.hpp"
#include "qmn/graph.hpp"
#include "qmn/indexing.hpp"

namespace qmn {

/// The 2x2 Pauli matrix for 'X', 'Y' or 'Z' (eigenvalues +-1).
inline const ComplexMatrix& pauli_matrix(char p) {
    static const ComplexMatrix x(2, {Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}});
    static const ComplexMatrix y(2, {Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0}});
    static const ComplexMatrix z(2, {Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{-1, 0}});
    switch (p) {
        case 'X': return x;
        case 'Y': return y;
        case 'Z': return z;
        default: throw ValidationError(std::string("unknown Pauli label '") + p + "'");
    }
}

/// A Pauli string on distinct sites with a real coefficient.
struct PauliTerm {
    std::vector<int> sites;
    std::string paulis;  // one of X, Y, Z per site
    double coeff = 1.0;
};

/// A named clique-supported Hamiltonian term group.
struct TermGroup {
    std::string name;
    VertexSet support;
    std::vector<PauliTerm> terms;
};

/// H = sum over groups Q of h_Q, each h_Q supported on a clique of the graph.
struct LocalHamiltonian {
    SiteGraph graph;
    std::vector<TermGroup> groups;
};

inline void validate_pauli_term(const PauliTerm& term, const SiteGraph& g) {
    if (term.sites.empty()) throw ValidationError("PauliTerm: needs at least one site");
    if (term.sites.size() != term.paulis.size()) {
        throw ValidationError("PauliTerm: sites and paulis must have the same length");
    }
    std::set<int> seen;
    for (std::size_t k = 0; k < term.sites.size(); ++k) {
        const int s = term.sites[k];
        g.check_vertex(s);
        if (!seen.insert(s).second) throw ValidationError("PauliTerm: duplicate site");
        pauli_matrix(term.paulis[k]);  // label check
        if (g.local_dims()[static_cast<std::size_t>(s)] != 2) {
            throw ValidationError("PauliTerm: Pauli operator placed on a non-qubit site");
        }
    }
}

inline void validate_local_hamiltonian(const LocalHamiltonian& h) {
    std::set<std::string> names;
    for (const TermGroup& group : h.groups) {
        if (!names.insert(group.name).second) {
            throw ValidationError("LocalHamiltonian: duplicate group name '" + group.name + "'");
        }
        const VertexSet support = vset::normalized(group.support);
        if (support.empty()) {
            throw ValidationError("LocalHamiltonian: group '" + group.name + "' has empty support");
        }
        for (int v : support) h.graph.check_vertex(v);
        if (!is_clique(h.graph, support)) {
            throw ValidationError("LocalHamiltonian: support of group '" + group.name +
                                  "' does not induce a clique of the graph");
        }
        for (const PauliTerm& term : group.terms) {
            validate_pauli_term(term, h.graph);
            for (int s : term.sites) {
                if (!vset::contains(support, s)) {
                    throw ValidationError("LocalHamiltonian: term site outside the support of '" +
                                          group.name + "'");
                }
            }
        }
    }
}

/// coeff * (tensor product of the term's Paulis, identity elsewhere), site 0
/// most significant. The result has one nonzero entry per column.
inline ComplexMatrix embed(const PauliTerm& term, const SiteGraph& g,
                           std::size_t max_dim = kDefaultMaxDim) {
    validate_pauli_term(term, g);
    const std::vector<std::size_t>& dims = g.local_dims();
    const std::size_t total = detail::checked_product(dims, max_dim);
    const std::vector<std::size_t> strides = detail::radix_strides(dims);

    ComplexMatrix out(total);
    for (std::size_t col = 0; col < total; ++col) {
        std::size_t row = col;
        Complex amp{term.coeff, 0.0};
        for (std::size_t k = 0; k < term.sites.size(); ++k) {
            const std::size_t site = static_cast<std::size_t>(term.sites[k]);
            const std::size_t bit = detail::radix_digit(col, strides[site], dims[site]);
            switch (term.paulis[k]) {
                case 'X':
                    row = bit == 0 ? row + strides[site] : row - strides[site];
                    break;
                case 'Y':
                    row = bit == 0 ? row + strides[site] : row - strides[site];
                    amp *= bit == 0 ? Complex{0, 1} : Complex{0, -1};
                    break;
                case 'Z':
                    if (bit == 1) amp = -amp;
                    break;
                default: break;  // unreachable after validation
            }
        }
        out(row, col) = amp;
    }
    return out;
}

/// Full-space matrix of one term group.
inline ComplexMatrix group_matrix(const TermGroup& group, const SiteGraph& g,
                                  std::size_t max_dim = kDefaultMaxDim) {
    ComplexMatrix sum(detail::checked_product(g.local_dims(), max_dim));
    for (const PauliTerm& term : group.terms) {
        sum = sum + embed(term, g, max_dim);
    }
    return sum;
}

/// Sum of every embedded term of every group.
inline ComplexMatrix build_hamiltonian(const LocalHamiltonian& h,
                                       std::size_t max_dim = kDefaultMaxDim) {
    validate_local_hamiltonian(h);
    ComplexMatrix sum(detail::checked_product(h.graph.local_dims(), max_dim));
    for (const TermGroup& group : h.groups) {
        sum = sum + group_matrix(group, h.graph, max_dim);
    }
    return sum;
}

struct CommutationPair {
    std::string first;
    std::string second;
    double commutator_norm;  // Frobenius norm of [H_Q, H_Q'] on the full space
    double threshold;
    bool commutes;
};

struct CommutationReport {
    std::vector<CommutationPair> pairs;
    bool all_commute = true;
};

/// Frobenius norms of all pairwise group commutators. A pair passes when its
/// norm is at most rel_tol times the product of the operand norms.
inline CommutationReport commutation_audit(const LocalHamiltonian& h, double rel_tol = 1e-12,
                                           std::size_t max_dim = kDefaultMaxDim) {
    validate_local_hamiltonian(h);
    std::vector<ComplexMatrix> mats;
    mats.reserve(h.groups.size());
    for (const TermGroup& group : h.groups) mats.push_back(group_matrix(group, h.graph, max_dim));

    CommutationReport report;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        for (std::size_t j = i + 1; j < mats.size(); ++j) {
            const double norm = frobenius_norm(mats[i] * mats[j] - mats[j] * mats[i]);
            const double threshold = rel_tol * frobenius_norm(mats[i]) * frobenius_norm(mats[j]);
            const bool ok = norm <= threshold;
            report.pairs.push_back({h.groups[i].name, h.groups[j].name, norm, threshold, ok});
            if (!ok) report.all_commute = false;
        }
    }
    return report;
}

/// Five qubits on a path with nearest-neighbour XX couplings and Z fields
/// h1 on site 0, h2/2 on site 2 (shared by the two middle groups) and h3 on
/// site 4. All four groups commute exactly when h2 = 0.
inline LocalHamiltonian five_spin_preset(double h1, double h2, double h3) {
    SiteGraph g(5, std::vector<std::size_t>(5, 2), {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    std::vector<TermGroup> groups{
        {"h12", {0, 1}, {{{0, 1}, "XX", 1.0}, {{0}, "Z", h1}}},
        {"h23", {1, 2}, {{{1, 2}, "XX", 1.0}, {{2}, "Z", 0.5 * h2}}},
        {"h34", {2, 3}, {{{2, 3}, "XX", 1.0}, {{2}, "Z", 0.5 * h2}}},
        {"h45", {3, 4}, {{{3, 4}, "XX", 1.0}, {{4}, "Z", h3}}},
    };
    return {std::move(g), std::move(groups)};
}

}  // namespace qmn
