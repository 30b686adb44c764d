#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qmn/errors.hpp"
#include "qmn/graph.hpp"
#include "qmn/indexing.hpp"

namespace qmn {

/// Cap on explicit joint-state enumeration for table-based distributions.
inline constexpr std::size_t kMaxJointStates = std::size_t{1} << 20;

/// Explicit probability table over the graph's variables, indexed in mixed
/// radix with site 0 most significant.
class JointTable {
public:
    JointTable(SiteGraph graph, std::vector<double> probs)
        : graph_(std::move(graph)), probs_(std::move(probs)) {
        const std::size_t total = detail::checked_product(graph_.local_dims(), kMaxJointStates);
        if (probs_.size() != total) {
            throw ValidationError("JointTable: table length must equal the joint state count");
        }
        long double sum = 0.0L;
        for (double p : probs_) {
            if (!(p >= 0.0)) throw ValidationError("JointTable: probabilities must be >= 0");
            sum += p;
        }
        if (std::abs(static_cast<double>(sum) - 1.0) > 1e-12) {
            throw ValidationError("JointTable: probabilities must sum to 1 within 1e-12");
        }
    }

    const SiteGraph& graph() const { return graph_; }
    const std::vector<double>& probs() const { return probs_; }

private:
    SiteGraph graph_;
    std::vector<double> probs_;
};

/// Marginal table of a vertex subset, ascending site order, first site most
/// significant. The empty subset yields the one-entry table {1}.
inline std::vector<double> marginal(const JointTable& p, const VertexSet& subset) {
    const VertexSet sub = vset::normalized(subset);
    for (int v : sub) p.graph().check_vertex(v);

    const std::vector<std::size_t>& dims = p.graph().local_dims();
    const std::vector<std::size_t> strides = detail::radix_strides(dims);

    std::size_t sub_size = 1;
    for (int v : sub) sub_size *= dims[static_cast<std::size_t>(v)];

    std::vector<std::size_t> sub_strides(sub.size(), 1);
    for (std::size_t k = sub.size(); k-- > 1;) {
        sub_strides[k - 1] = sub_strides[k] * dims[static_cast<std::size_t>(sub[k])];
    }

    std::vector<double> out(sub_size, 0.0);
    for (std::size_t idx = 0; idx < p.probs().size(); ++idx) {
        std::size_t sub_idx = 0;
        for (std::size_t k = 0; k < sub.size(); ++k) {
            const std::size_t site = static_cast<std::size_t>(sub[k]);
            sub_idx += detail::radix_digit(idx, strides[site], dims[site]) * sub_strides[k];
        }
        out[sub_idx] += p.probs()[idx];
    }
    return out;
}

/// Shannon entropy of the subset's marginal, in nats, with 0 ln 0 = 0.
inline double shannon_entropy(const JointTable& p, const VertexSet& subset) {
    double h = 0.0;
    for (double q : marginal(p, subset)) {
        if (q > 0.0) h -= q * std::log(q);
    }
    return h;
}

namespace detail {
inline SeparatorTriple checked_partition(const SeparatorTriple& t, int vertex_count,
                                         const char* op) {
    SeparatorTriple out{vset::normalized(t.a), vset::normalized(t.b), vset::normalized(t.c)};
    if (out.a.empty() || out.c.empty()) {
        throw ValidationError(std::string(op) + ": A and C must be nonempty");
    }
    if (!vset::disjoint(out.a, out.b) || !vset::disjoint(out.a, out.c) ||
        !vset::disjoint(out.b, out.c)) {
        throw ValidationError(std::string(op) + ": triple sets must be pairwise disjoint");
    }
    const VertexSet all = vset::set_union(vset::set_union(out.a, out.b), out.c);
    if (static_cast<int>(all.size()) != vertex_count || all.front() != 0 ||
        all.back() != vertex_count - 1) {
        throw ValidationError(std::string(op) + ": triple must partition all vertices");
    }
    return out;
}
}  // namespace detail

/// I(A:C|B) = H(A,B) + H(C,B) - H(A,B,C) - H(B), in nats.
inline double classical_cmi(const JointTable& p, const SeparatorTriple& triple) {
    const SeparatorTriple t =
        detail::checked_partition(triple, p.graph().vertex_count(), "classical_cmi");
    const VertexSet ab = vset::set_union(t.a, t.b);
    const VertexSet cb = vset::set_union(t.c, t.b);
    const VertexSet abc = vset::set_union(ab, t.c);
    return shannon_entropy(p, ab) + shannon_entropy(p, cb) - shannon_entropy(p, abc) -
           shannon_entropy(p, t.b);
}

struct MarkovCheckEntry {
    SeparatorTriple triple;
    double cmi;
};

struct MarkovReport {
    std::vector<MarkovCheckEntry> entries;
    double max_cmi = 0.0;
    double tol = 0.0;
    bool is_markov = true;
};

/// Evaluates classical CMI on every separator triple of the graph.
inline MarkovReport is_markov_network(const SiteGraph& g, const JointTable& p, int max_a,
                                      double tol) {
    if (g.vertex_count() != p.graph().vertex_count() ||
        g.local_dims() != p.graph().local_dims()) {
        throw ValidationError("is_markov_network: graph arities do not match the table");
    }
    MarkovReport report;
    report.tol = tol;
    for (const SeparatorTriple& t : separator_triples(g, max_a)) {
        const double v = classical_cmi(p, t);
        report.entries.push_back({t, v});
        report.max_cmi = std::max(report.max_cmi, v);
        if (v > tol) report.is_markov = false;
    }
    return report;
}

/// Strictly positive factor over a clique of the graph; table indexed over
/// the ascending support sites, first site most significant.
struct CliquePotential {
    VertexSet support;
    std::vector<double> table;
};

struct FactorizedJoint {
    JointTable table;
    double normalization;  // Z before dividing out
};

/// Normalized product of clique potentials.
inline FactorizedJoint hc_factorize(const SiteGraph& g,
                                    const std::vector<CliquePotential>& potentials) {
    const std::vector<std::size_t>& dims = g.local_dims();
    const std::size_t total = detail::checked_product(dims, kMaxJointStates);
    const std::vector<std::size_t> strides = detail::radix_strides(dims);

    struct Factor {
        VertexSet support;
        std::vector<std::size_t> sub_strides;
        const std::vector<double>* table;
    };
    std::vector<Factor> factors;
    for (const CliquePotential& pot : potentials) {
        const VertexSet support = vset::normalized(pot.support);
        if (support.empty()) throw ValidationError("hc_factorize: empty potential support");
        for (int v : support) g.check_vertex(v);
        if (!is_clique(g, support)) {
            throw ValidationError("hc_factorize: potential support is not a clique of the graph");
        }
        std::size_t size = 1;
        for (int v : support) size *= dims[static_cast<std::size_t>(v)];
        if (pot.table.size() != size) {
            throw ValidationError("hc_factorize: potential table length mismatch");
        }
        for (double w : pot.table) {
            if (!(w > 0.0)) throw ValidationError("hc_factorize: potentials must be positive");
        }
        std::vector<std::size_t> sub_strides(support.size(), 1);
        for (std::size_t k = support.size(); k-- > 1;) {
            sub_strides[k - 1] = sub_strides[k] * dims[static_cast<std::size_t>(support[k])];
        }
        factors.push_back({support, std::move(sub_strides), &pot.table});
    }

    std::vector<double> weights(total, 1.0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        double w = 1.0;
        for (const Factor& f : factors) {
            std::size_t sub_idx = 0;
            for (std::size_t k = 0; k < f.support.size(); ++k) {
                const std::size_t site = static_cast<std::size_t>(f.support[k]);
                sub_idx += detail::radix_digit(idx, strides[site], dims[site]) * f.sub_strides[k];
            }
            w *= (*f.table)[sub_idx];
        }
        weights[idx] = w;
    }

    long double z = 0.0L;
    for (double w : weights) z += w;
    const double zd = static_cast<double>(z);
    for (double& w : weights) w /= zd;
    return {JointTable(g, std::move(weights)), zd};
}

}  // namespace qmn
