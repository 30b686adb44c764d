#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qmn/errors.hpp"
#include "qmn/graph.hpp"
#include "qmn/joint_table.hpp"

namespace qmn {

/// Pairwise MRF: one positive table per vertex and one per edge. Edge tables
/// follow the graph's normalized edge order (smaller endpoint first) and are
/// indexed x_i * d_j + x_j.
struct PairwiseModel {
    SiteGraph graph;
    std::vector<std::vector<double>> node_potentials;  // [vertex][state]
    std::vector<std::vector<double>> edge_potentials;  // [edge][x_i * d_j + x_j]
};

inline void validate_pairwise_model(const PairwiseModel& m) {
    const auto& dims = m.graph.local_dims();
    if (m.node_potentials.size() != dims.size()) {
        throw ValidationError("PairwiseModel: one node potential per vertex required");
    }
    if (m.edge_potentials.size() != m.graph.edges().size()) {
        throw ValidationError("PairwiseModel: one edge potential per edge required");
    }
    for (std::size_t v = 0; v < dims.size(); ++v) {
        if (m.node_potentials[v].size() != dims[v]) {
            throw ValidationError("PairwiseModel: node potential length mismatch at vertex " +
                                  std::to_string(v));
        }
        for (double w : m.node_potentials[v]) {
            if (!(w > 0.0)) throw ValidationError("PairwiseModel: potentials must be positive");
        }
    }
    for (std::size_t e = 0; e < m.edge_potentials.size(); ++e) {
        const auto [i, j] = m.graph.edges()[e];
        const std::size_t want =
            dims[static_cast<std::size_t>(i)] * dims[static_cast<std::size_t>(j)];
        if (m.edge_potentials[e].size() != want) {
            throw ValidationError("PairwiseModel: edge potential length mismatch on edge (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
        }
        for (double w : m.edge_potentials[e]) {
            if (!(w > 0.0)) throw ValidationError("PairwiseModel: potentials must be positive");
        }
    }
}

/// Normalized product of all node and edge potentials.
inline JointTable pairwise_joint(const PairwiseModel& m) {
    validate_pairwise_model(m);
    std::vector<CliquePotential> potentials;
    for (std::size_t v = 0; v < m.node_potentials.size(); ++v) {
        potentials.push_back({{static_cast<int>(v)}, m.node_potentials[v]});
    }
    for (std::size_t e = 0; e < m.edge_potentials.size(); ++e) {
        const auto [i, j] = m.graph.edges()[e];
        potentials.push_back({{i, j}, m.edge_potentials[e]});
    }
    return hc_factorize(m.graph, potentials).table;
}

struct BpResult {
    std::vector<std::vector<double>> marginals;  // [vertex][state]
    bool converged = false;
    int iterations = 0;
    double last_delta = 0.0;
};

/// 0 on a forest, 0.5 on a loopy graph.
inline double default_damping(const SiteGraph& g) { return is_forest(g) ? 0.0 : 0.5; }

/// Synchronous sum-product message passing. Exact on trees; on loopy graphs
/// the returned marginals are the fixed point reached, with `converged`
/// reporting whether messages settled below `message_tol`.
inline BpResult sum_product_bp(const PairwiseModel& m, int max_iters, double damping,
                               double message_tol = 1e-12) {
    validate_pairwise_model(m);
    if (!(damping >= 0.0 && damping < 1.0)) {
        throw ValidationError("sum_product_bp: damping must lie in [0,1)");
    }
    if (max_iters < 0) throw ValidationError("sum_product_bp: max_iters must be >= 0");

    const SiteGraph& g = m.graph;
    const auto& dims = g.local_dims();
    const std::size_t edge_count = g.edges().size();

    // Directed messages: slot 2e is i->j, slot 2e+1 is j->i for edge e=(i,j).
    std::vector<std::vector<double>> msg(2 * edge_count);
    for (std::size_t e = 0; e < edge_count; ++e) {
        const auto [i, j] = g.edges()[e];
        msg[2 * e].assign(dims[static_cast<std::size_t>(j)],
                          1.0 / static_cast<double>(dims[static_cast<std::size_t>(j)]));
        msg[2 * e + 1].assign(dims[static_cast<std::size_t>(i)],
                              1.0 / static_cast<double>(dims[static_cast<std::size_t>(i)]));
    }

    // Per-vertex incidence: (edge index, slot of the message arriving here).
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> incoming(dims.size());
    for (std::size_t e = 0; e < edge_count; ++e) {
        const auto [i, j] = g.edges()[e];
        incoming[static_cast<std::size_t>(i)].push_back({e, 2 * e + 1});
        incoming[static_cast<std::size_t>(j)].push_back({e, 2 * e});
    }

    auto psi = [&](std::size_t e, std::size_t xi, std::size_t xj) {
        const auto [i, j] = g.edges()[e];
        return m.edge_potentials[e][xi * dims[static_cast<std::size_t>(j)] + xj];
    };

    BpResult result;
    std::vector<std::vector<double>> next(msg.size());
    for (int iter = 0; iter < max_iters; ++iter) {
        for (std::size_t e = 0; e < edge_count; ++e) {
            const auto [i, j] = g.edges()[e];
            const std::size_t di = dims[static_cast<std::size_t>(i)];
            const std::size_t dj = dims[static_cast<std::size_t>(j)];

            for (int dir = 0; dir < 2; ++dir) {
                const int src = dir == 0 ? i : j;
                const std::size_t d_src = dir == 0 ? di : dj;
                const std::size_t d_dst = dir == 0 ? dj : di;
                const std::size_t slot = 2 * e + static_cast<std::size_t>(dir);

                // Belief at the source excluding the message along this edge.
                std::vector<double> pre(d_src);
                for (std::size_t x = 0; x < d_src; ++x) {
                    double b = m.node_potentials[static_cast<std::size_t>(src)][x];
                    for (const auto& [ie, islot] : incoming[static_cast<std::size_t>(src)]) {
                        if (ie == e) continue;
                        b *= msg[islot][x];
                    }
                    pre[x] = b;
                }
                std::vector<double> out(d_dst, 0.0);
                for (std::size_t y = 0; y < d_dst; ++y) {
                    double s = 0.0;
                    for (std::size_t x = 0; x < d_src; ++x) {
                        s += pre[x] * (dir == 0 ? psi(e, x, y) : psi(e, y, x));
                    }
                    out[y] = s;
                }
                double norm = 0.0;
                for (double s : out) norm += s;
                for (double& s : out) s /= norm;
                next[slot] = std::move(out);
            }
        }

        double delta = 0.0;
        for (std::size_t s = 0; s < msg.size(); ++s) {
            for (std::size_t x = 0; x < msg[s].size(); ++x) {
                const double updated = damping * msg[s][x] + (1.0 - damping) * next[s][x];
                delta = std::max(delta, std::abs(updated - msg[s][x]));
                msg[s][x] = updated;
            }
        }
        result.iterations = iter + 1;
        result.last_delta = delta;
        if (delta < message_tol) {
            result.converged = true;
            break;
        }
    }

    result.marginals.resize(dims.size());
    for (std::size_t v = 0; v < dims.size(); ++v) {
        std::vector<double> b(dims[v]);
        for (std::size_t x = 0; x < dims[v]; ++x) {
            double w = m.node_potentials[v][x];
            for (const auto& [ie, islot] : incoming[v]) {
                (void)ie;
                w *= msg[islot][x];
            }
            b[x] = w;
        }
        double norm = 0.0;
        for (double w : b) norm += w;
        for (double& w : b) w /= norm;
        result.marginals[v] = std::move(b);
    }
    return result;
}

/// Row-major binary pixel grid.
struct BinaryImage {
    int rows = 0;
    int cols = 0;
    std::vector<int> pixels;

    int at(int r, int c) const { return pixels[static_cast<std::size_t>(r * cols + c)]; }
};

inline void validate_image(const BinaryImage& img) {
    if (img.rows < 1 || img.cols < 1) throw ValidationError("BinaryImage: empty grid");
    if (img.pixels.size() != static_cast<std::size_t>(img.rows * img.cols)) {
        throw ValidationError("BinaryImage: pixel count mismatch");
    }
    for (int p : img.pixels) {
        if (p != 0 && p != 1) throw ValidationError("BinaryImage: pixels must be 0 or 1");
    }
}

/// Grid MRF for restoring a noisy binary image: Psi(x_i,x_j) = exp(coupling
/// when equal), Phi(x_i) = exp(evidence_strength when matching the observed
/// pixel).
inline PairwiseModel build_denoise_model(const BinaryImage& observed, double coupling,
                                         double evidence_strength) {
    validate_image(observed);
    const int rows = observed.rows, cols = observed.cols;
    const int n = rows * cols;
    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int v = r * cols + c;
            if (c + 1 < cols) edges.emplace_back(v, v + 1);
            if (r + 1 < rows) edges.emplace_back(v, v + cols);
        }
    }
    SiteGraph g(n, std::vector<std::size_t>(static_cast<std::size_t>(n), 2), edges);

    std::vector<std::vector<double>> node_pots(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        const int y = observed.pixels[static_cast<std::size_t>(v)];
        node_pots[static_cast<std::size_t>(v)] = {y == 0 ? std::exp(evidence_strength) : 1.0,
                                                  y == 1 ? std::exp(evidence_strength) : 1.0};
    }
    const double same = std::exp(coupling);
    std::vector<std::vector<double>> edge_pots(g.edges().size(),
                                               {same, 1.0, 1.0, same});
    return {std::move(g), std::move(node_pots), std::move(edge_pots)};
}

/// Restores a noisy grid by per-pixel marginal argmax: exact marginalization
/// up to 16 pixels, belief propagation beyond that, capacity error past 8x8.
inline BinaryImage denoise_demo(const BinaryImage& noisy, double coupling,
                                double evidence_strength) {
    validate_image(noisy);
    if (noisy.rows > 8 || noisy.cols > 8) {
        throw CapacityError("denoise_demo: grid larger than 8x8");
    }
    const PairwiseModel model = build_denoise_model(noisy, coupling, evidence_strength);

    std::vector<std::vector<double>> marginals;
    if (noisy.rows * noisy.cols <= 16) {
        const JointTable joint = pairwise_joint(model);
        for (int v = 0; v < model.graph.vertex_count(); ++v) {
            marginals.push_back(marginal(joint, {v}));
        }
    } else {
        marginals = sum_product_bp(model, 500, 0.5).marginals;
    }

    BinaryImage out{noisy.rows, noisy.cols, {}};
    out.pixels.reserve(marginals.size());
    for (const auto& b : marginals) {
        out.pixels.push_back(b[1] > b[0] ? 1 : 0);  // ties go to 0
    }
    return out;
}

}  // namespace qmn
