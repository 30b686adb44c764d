#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qmn/complex_matrix.hpp"
#include "qmn/density.hpp"
#include "qmn/eigh.hpp"
#include "qmn/errors.hpp"
#include "qmn/graph.hpp"
#include "qmn/joint_table.hpp"
#include "qmn/pauli.hpp"

namespace qmn {

namespace detail {

// Entropy of a reduced operator without re-wrapping it as a DensityMatrix.
inline double spectrum_entropy(const ComplexMatrix& m, double clamp) {
    const HermitianEigen es = eigh(m, EighOptions{.hermiticity_tol = 1e-10});
    double s = 0.0;
    for (double lambda : es.eigenvalues) {
        if (lambda >= clamp) s -= lambda * std::log(lambda);
    }
    return std::max(s, 0.0);
}

}  // namespace detail

/// Quantum conditional mutual information I(A:C|B) = S(AB) + S(CB) - S(ABC)
/// - S(B), in nats, from partial traces of rho.
inline double quantum_cmi(const DensityMatrix& rho, const SeparatorTriple& triple,
                          double eigenvalue_clamp = 1e-14) {
    const int sites = static_cast<int>(rho.dims.size());
    const SeparatorTriple t = detail::checked_partition(triple, sites, "quantum_cmi");

    auto reduced_entropy = [&](const VertexSet& keep) {
        VertexSet traced;
        for (int s = 0; s < sites; ++s) {
            if (!vset::contains(keep, s)) traced.push_back(s);
        }
        return detail::spectrum_entropy(partial_trace(rho.matrix, rho.dims, traced),
                                        eigenvalue_clamp);
    };

    const VertexSet ab = vset::set_union(t.a, t.b);
    const VertexSet cb = vset::set_union(t.c, t.b);
    const double s_ab = reduced_entropy(ab);
    const double s_cb = reduced_entropy(cb);
    const double s_abc = detail::spectrum_entropy(rho.matrix, eigenvalue_clamp);
    const double s_b = reduced_entropy(t.b);
    return s_ab + s_cb - s_abc - s_b;
}

struct QuantumMarkovEntry {
    SeparatorTriple triple;
    double cmi;
};

struct QuantumMarkovReport {
    std::vector<QuantumMarkovEntry> entries;
    double max_cmi = 0.0;
    double tol = 0.0;
    double beta = 0.0;
    bool is_markov = true;
};

/// Builds the Gibbs state of the Hamiltonian and evaluates quantum CMI on
/// every separator triple (A, n(A), rest) with |A| <= max_a.
inline QuantumMarkovReport is_quantum_markov_network(const LocalHamiltonian& h, double beta,
                                                     int max_a, double tol,
                                                     std::size_t max_dim = kDefaultMaxDim) {
    validate_local_hamiltonian(h);
    detail::checked_product(h.graph.local_dims(), max_dim);

    const ComplexMatrix hamiltonian = build_hamiltonian(h, max_dim);
    const GibbsResult gibbs = gibbs_state(hamiltonian, beta, h.graph.local_dims());

    QuantumMarkovReport report;
    report.tol = tol;
    report.beta = beta;
    for (const SeparatorTriple& t : separator_triples(h.graph, max_a)) {
        const double v = quantum_cmi(gibbs.rho, t);
        report.entries.push_back({t, v});
        report.max_cmi = std::max(report.max_cmi, v);
        if (v > tol) report.is_markov = false;
    }
    return report;
}

struct FactorizationGap {
    double exact_z;                     // Tr exp(-beta H)
    double sequential_value;            // nested trace, left-to-right
    double sequential_value_reversed;   // nested trace, right-to-left
    double gap;                         // |exact - sequential| / exact
    double gap_reversed;
};

namespace detail {

// exp(-beta h_Q) on the two-site support space of a chain group.
inline ComplexMatrix local_edge_exponential(const TermGroup& group, const SiteGraph& g,
                                            int left_site, double beta) {
    const std::size_t d0 = g.local_dims()[static_cast<std::size_t>(left_site)];
    const std::size_t d1 = g.local_dims()[static_cast<std::size_t>(left_site + 1)];
    SiteGraph local(2, {d0, d1}, {{0, 1}});

    ComplexMatrix h_local(d0 * d1);
    for (const PauliTerm& term : group.terms) {
        PauliTerm remapped = term;
        for (int& s : remapped.sites) s -= left_site;
        h_local = h_local + embed(remapped, local);
    }
    return matrix_function(h_local, [beta](double x) { return std::exp(-beta * x); });
}

}  // namespace detail

/// Compares Tr exp(-beta H) of a chain Hamiltonian against the nested
/// single-site trace of the per-edge exponentials; the two agree only when
/// the edge terms commute.
inline FactorizationGap factorization_gap(const LocalHamiltonian& h, double beta,
                                          std::size_t max_dim = kDefaultMaxDim) {
    validate_local_hamiltonian(h);
    const int n = h.graph.vertex_count();
    if (n < 2 || h.groups.size() != static_cast<std::size_t>(n - 1)) {
        throw ValidationError("factorization_gap: chain needs exactly N-1 edge groups");
    }

    // Order groups as consecutive edges (k, k+1) along the chain.
    std::vector<const TermGroup*> chain(static_cast<std::size_t>(n - 1), nullptr);
    for (const TermGroup& group : h.groups) {
        const VertexSet support = vset::normalized(group.support);
        if (support.size() != 2 || support[1] != support[0] + 1) {
            throw ValidationError("factorization_gap: group '" + group.name +
                                  "' is not a nearest-neighbour chain edge");
        }
        const std::size_t k = static_cast<std::size_t>(support[0]);
        if (k >= chain.size() || chain[k] != nullptr) {
            throw ValidationError("factorization_gap: groups do not form a chain");
        }
        chain[k] = &group;
    }

    const std::vector<std::size_t>& dims = h.graph.local_dims();
    detail::checked_product(dims, max_dim);

    // Exact side via the full spectrum (shifted to avoid overflow).
    const HermitianEigen es = eigh(build_hamiltonian(h, max_dim));
    const double min_energy = es.eigenvalues.front();
    double shifted_sum = 0.0;
    for (double e : es.eigenvalues) shifted_sum += std::exp(-beta * (e - min_energy));
    const double exact_z = std::exp(-beta * min_energy) * shifted_sum;

    std::vector<ComplexMatrix> exps;
    exps.reserve(chain.size());
    for (std::size_t k = 0; k < chain.size(); ++k) {
        exps.push_back(detail::local_edge_exponential(*chain[k], h.graph, static_cast<int>(k), beta));
    }

    // Left to right: acc_k on site k+1 = Tr_k((acc_{k-1} (x) I) exp_k).
    auto sequential = [&](bool reversed) {
        if (!reversed) {
            ComplexMatrix acc = partial_trace(exps[0], {dims[0], dims[1]}, {0});
            for (std::size_t k = 1; k < exps.size(); ++k) {
                const ComplexMatrix lifted = kron(acc, ComplexMatrix::identity(dims[k + 1]),
                                                  kAbsoluteMaxDim);
                acc = partial_trace(lifted * exps[k], {dims[k], dims[k + 1]}, {0});
            }
            return trace(acc).real();
        }
        const std::size_t last = exps.size() - 1;
        ComplexMatrix acc = partial_trace(exps[last], {dims[last], dims[last + 1]}, {1});
        for (std::size_t k = last; k-- > 0;) {
            const ComplexMatrix lifted = kron(ComplexMatrix::identity(dims[k]), acc,
                                              kAbsoluteMaxDim);
            acc = partial_trace(exps[k] * lifted, {dims[k], dims[k + 1]}, {1});
        }
        return trace(acc).real();
    };

    const double seq = sequential(false);
    const double seq_rev = sequential(true);
    return {exact_z, seq, seq_rev, std::abs(exact_z - seq) / exact_z,
            std::abs(exact_z - seq_rev) / exact_z};
}

}  // namespace qmn
