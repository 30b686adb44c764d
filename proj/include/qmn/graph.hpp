#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qmn/errors.hpp"
#include "qmn/indexing.hpp"

namespace qmn {

/// Sorted, duplicate-free set of vertex indices.
using VertexSet = std::vector<int>;

namespace vset {

inline VertexSet normalized(VertexSet v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool contains(const VertexSet& v, int x) {
    return std::binary_search(v.begin(), v.end(), x);
}

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool disjoint(const VertexSet& a, const VertexSet& b) {
    return set_intersection(a, b).empty();
}

}  // namespace vset

/// Undirected graph of sites, each carrying a local state dimension.
class SiteGraph {
public:
    SiteGraph(int vertex_count, std::vector<std::size_t> local_dims,
              std::vector<std::pair<int, int>> edges)
        : n_(vertex_count), local_dims_(std::move(local_dims)) {
        if (n_ < 1) throw ValidationError("SiteGraph: vertex count must be positive");
        if (local_dims_.size() != static_cast<std::size_t>(n_)) {
            throw ValidationError("SiteGraph: local_dims length must equal vertex count");
        }
        for (std::size_t d : local_dims_) {
            if (d < 2) throw ValidationError("SiteGraph: every local dimension must be >= 2");
        }
        adj_.resize(static_cast<std::size_t>(n_));
        for (auto [u, v] : edges) {
            if (u == v) throw ValidationError("SiteGraph: self-loop edge");
            if (u < 0 || v < 0 || u >= n_ || v >= n_) {
                throw ValidationError("SiteGraph: edge endpoint out of range");
            }
            if (u > v) std::swap(u, v);
            edges_.emplace_back(u, v);
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
            throw ValidationError("SiteGraph: duplicate edge");
        }
        for (auto [u, v] : edges_) {
            adj_[static_cast<std::size_t>(u)].push_back(v);
            adj_[static_cast<std::size_t>(v)].push_back(u);
        }
        for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
    }

    int vertex_count() const { return n_; }
    const std::vector<std::size_t>& local_dims() const { return local_dims_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    const std::vector<int>& neighbors_of(int v) const {
        check_vertex(v);
        return adj_[static_cast<std::size_t>(v)];
    }

    bool adjacent(int u, int v) const {
        check_vertex(u);
        check_vertex(v);
        const auto& nbrs = adj_[static_cast<std::size_t>(u)];
        return std::binary_search(nbrs.begin(), nbrs.end(), v);
    }

    std::size_t joint_dimension() const {
        return detail::checked_product(local_dims_, std::size_t{1} << 62);
    }

    VertexSet all_vertices() const {
        VertexSet v(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) v[static_cast<std::size_t>(i)] = i;
        return v;
    }

    void check_vertex(int v) const {
        if (v < 0 || v >= n_) throw ValidationError("SiteGraph: vertex index out of range");
    }

private:
    int n_;
    std::vector<std::size_t> local_dims_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

/// Partition (A, B, C) of the vertices where B blocks every A-to-C path.
struct SeparatorTriple {
    VertexSet a;
    VertexSet b;
    VertexSet c;
};

/// Vertices outside u adjacent to at least one member of u.
inline VertexSet neighbors(const SiteGraph& g, const VertexSet& u) {
    VertexSet uu = vset::normalized(u);
    for (int v : uu) g.check_vertex(v);
    VertexSet out;
    for (int v : uu) {
        for (int w : g.neighbors_of(v)) {
            if (!vset::contains(uu, w)) out.push_back(w);
        }
    }
    return vset::normalized(out);
}

inline bool is_clique(const SiteGraph& g, const VertexSet& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (!g.adjacent(s[i], s[j])) return false;
        }
    }
    return true;
}

inline bool is_connected_subset(const SiteGraph& g, const VertexSet& s) {
    if (s.empty()) return true;
    std::vector<int> stack{s.front()};
    VertexSet seen{s.front()};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : g.neighbors_of(v)) {
            if (vset::contains(s, w) && !vset::contains(seen, w)) {
                seen.insert(std::lower_bound(seen.begin(), seen.end(), w), w);
                stack.push_back(w);
            }
        }
    }
    return seen.size() == s.size();
}

/// True when the graph has no cycle.
inline bool is_forest(const SiteGraph& g) {
    const int n = g.vertex_count();
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (auto [u, v] : g.edges()) {
        const int ru = find(u), rv = find(v);
        if (ru == rv) return false;
        parent[static_cast<std::size_t>(ru)] = rv;
    }
    return true;
}

namespace detail {

inline void bron_kerbosch(const SiteGraph& g, VertexSet& r, VertexSet p, VertexSet x,
                          std::vector<VertexSet>& out) {
    if (p.empty() && x.empty()) {
        out.push_back(r);
        return;
    }
    // Pivot on the vertex covering the most candidates.
    int pivot = -1;
    std::size_t best = 0;
    for (const VertexSet* side : {&p, &x}) {
        for (int u : *side) {
            const std::size_t cover = vset::set_intersection(p, g.neighbors_of(u)).size();
            if (pivot < 0 || cover > best) {
                pivot = u;
                best = cover;
            }
        }
    }
    const VertexSet candidates = vset::set_difference(p, g.neighbors_of(pivot));
    for (int v : candidates) {
        const VertexSet& nv = g.neighbors_of(v);
        r.push_back(v);
        std::sort(r.begin(), r.end());
        bron_kerbosch(g, r, vset::set_intersection(p, nv), vset::set_intersection(x, nv), out);
        r.erase(std::find(r.begin(), r.end(), v));
        p.erase(std::find(p.begin(), p.end(), v));
        x.insert(std::lower_bound(x.begin(), x.end(), v), v);
    }
}

}  // namespace detail

/// All maximal cliques, sorted lexicographically.
inline std::vector<VertexSet> maximal_cliques(const SiteGraph& g) {
    std::vector<VertexSet> out;
    VertexSet r;
    detail::bron_kerbosch(g, r, g.all_vertices(), {}, out);
    std::sort(out.begin(), out.end());
    return out;
}

/// Every triple (A, n(A), V - A - n(A)) with A connected, |A| <= max_a and a
/// nonempty remainder.
inline std::vector<SeparatorTriple> separator_triples(const SiteGraph& g, int max_a) {
    if (max_a < 1) throw ValidationError("separator_triples: max_a must be >= 1");
    const VertexSet all = g.all_vertices();
    std::vector<SeparatorTriple> out;

    const int n = g.vertex_count();
    for (int k = 1; k <= std::min(max_a, n); ++k) {
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
            VertexSet a(idx.begin(), idx.end());
            if (is_connected_subset(g, a)) {
                const VertexSet b = neighbors(g, a);
                const VertexSet c = vset::set_difference(vset::set_difference(all, a), b);
                if (!c.empty()) out.push_back({a, b, c});
            }
            // next k-combination of {0..n-1}
            int pos = k - 1;
            while (pos >= 0 &&
                   idx[static_cast<std::size_t>(pos)] == n - k + pos) {
                --pos;
            }
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < k; ++i) {
                idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
            }
        }
    }
    return out;
}

}  // namespace qmn
