#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qmn/errors.hpp"
#include "qmn/graph.hpp"
#include "qmn/joint_table.hpp"
#include "qmn/pairwise.hpp"
#include "qmn/pauli.hpp"
#include "qmn/sweep.hpp"
#include "qmn/transfer.hpp"

namespace qmn {

using nlohmann::json;

namespace detail {

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(what + ": invalid JSON (" + e.what() + ")");
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

template <class T>
T field(const json& j, const char* key, const std::string& what) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(what + ": bad or missing field '" + key + "' (" + e.what() + ")");
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graph: {"vertices": n, "local_dims": [...], "edges": [[i,j], ...]}
// ---------------------------------------------------------------------------

inline json graph_to_json(const SiteGraph& g) {
    json j;
    j["vertices"] = g.vertex_count();
    j["local_dims"] = g.local_dims();
    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    j["edges"] = edges;
    return j;
}

inline SiteGraph graph_from_json(const json& j) {
    const int n = detail::field<int>(j, "vertices", "graph");
    const auto dims = detail::field<std::vector<std::size_t>>(j, "local_dims", "graph");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : detail::field<std::vector<std::vector<int>>>(j, "edges", "graph")) {
        if (e.size() != 2) throw ValidationError("graph: each edge must be a pair [i,j]");
        edges.emplace_back(e[0], e[1]);
    }
    return SiteGraph(n, dims, edges);
}

// ---------------------------------------------------------------------------
// Hamiltonian: {"graph": {...}, "groups": [{"name","support","terms":
//   [{"sites":[...],"paulis":"XX","coeff":1.0}, ...]}, ...]}
// ---------------------------------------------------------------------------

inline json hamiltonian_to_json(const LocalHamiltonian& h) {
    json j;
    j["graph"] = graph_to_json(h.graph);
    json groups = json::array();
    for (const TermGroup& g : h.groups) {
        json jg;
        jg["name"] = g.name;
        jg["support"] = g.support;
        json terms = json::array();
        for (const PauliTerm& t : g.terms) {
            terms.push_back({{"sites", t.sites}, {"paulis", t.paulis}, {"coeff", t.coeff}});
        }
        jg["terms"] = terms;
        groups.push_back(jg);
    }
    j["groups"] = groups;
    return j;
}

inline LocalHamiltonian hamiltonian_from_json(const json& j) {
    SiteGraph graph = graph_from_json(j.contains("graph") ? j["graph"] : json{});
    std::vector<TermGroup> groups;
    for (const auto& jg : detail::field<json>(j, "groups", "hamiltonian")) {
        TermGroup group;
        group.name = detail::field<std::string>(jg, "name", "group");
        group.support = detail::field<VertexSet>(jg, "support", "group");
        for (const auto& jt : detail::field<json>(jg, "terms", "group")) {
            PauliTerm term;
            term.sites = detail::field<std::vector<int>>(jt, "sites", "term");
            term.paulis = detail::field<std::string>(jt, "paulis", "term");
            term.coeff = detail::field<double>(jt, "coeff", "term");
            group.terms.push_back(std::move(term));
        }
        groups.push_back(std::move(group));
    }
    LocalHamiltonian h{std::move(graph), std::move(groups)};
    validate_local_hamiltonian(h);
    return h;
}

inline LocalHamiltonian load_hamiltonian(const std::string& path) {
    return hamiltonian_from_json(detail::parse_json(detail::read_file(path), path));
}

// ---------------------------------------------------------------------------
// Pairwise model: {"graph": {...},
//   "node_potentials": [{"vertex": 0, "table": [...]}, ...],
//   "edge_potentials": [{"edge": [i,j], "table": [...]}, ...]}
// ---------------------------------------------------------------------------

inline json pairwise_to_json(const PairwiseModel& m) {
    json j;
    j["graph"] = graph_to_json(m.graph);
    json nodes = json::array();
    for (std::size_t v = 0; v < m.node_potentials.size(); ++v) {
        nodes.push_back({{"vertex", v}, {"table", m.node_potentials[v]}});
    }
    json edges = json::array();
    for (std::size_t e = 0; e < m.edge_potentials.size(); ++e) {
        const auto [i, jv] = m.graph.edges()[e];
        edges.push_back({{"edge", {i, jv}}, {"table", m.edge_potentials[e]}});
    }
    j["node_potentials"] = nodes;
    j["edge_potentials"] = edges;
    return j;
}

inline PairwiseModel pairwise_from_json(const json& j) {
    SiteGraph graph = graph_from_json(j.contains("graph") ? j["graph"] : json{});
    const std::size_t n = static_cast<std::size_t>(graph.vertex_count());

    std::vector<std::vector<double>> node_pots(n);
    std::vector<bool> have_node(n, false);
    for (const auto& jn : detail::field<json>(j, "node_potentials", "pairwise model")) {
        const int v = detail::field<int>(jn, "vertex", "node potential");
        graph.check_vertex(v);
        if (have_node[static_cast<std::size_t>(v)]) {
            throw ValidationError("pairwise model: duplicate node potential for vertex " +
                                  std::to_string(v));
        }
        have_node[static_cast<std::size_t>(v)] = true;
        node_pots[static_cast<std::size_t>(v)] =
            detail::field<std::vector<double>>(jn, "table", "node potential");
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (!have_node[v]) {
            throw ValidationError("pairwise model: missing node potential for vertex " +
                                  std::to_string(v));
        }
    }

    std::vector<std::vector<double>> edge_pots(graph.edges().size());
    std::vector<bool> have_edge(graph.edges().size(), false);
    for (const auto& je : detail::field<json>(j, "edge_potentials", "pairwise model")) {
        const auto e = detail::field<std::vector<int>>(je, "edge", "edge potential");
        if (e.size() != 2) throw ValidationError("pairwise model: edge must be a pair");
        int a = e[0], b = e[1];
        if (a > b) std::swap(a, b);
        const auto& edges = graph.edges();
        const auto it = std::find(edges.begin(), edges.end(), std::make_pair(a, b));
        if (it == edges.end()) {
            throw ValidationError("pairwise model: potential on a non-edge (" +
                                  std::to_string(a) + "," + std::to_string(b) + ")");
        }
        const std::size_t idx = static_cast<std::size_t>(it - edges.begin());
        if (have_edge[idx]) {
            throw ValidationError("pairwise model: duplicate edge potential");
        }
        have_edge[idx] = true;
        edge_pots[idx] = detail::field<std::vector<double>>(je, "table", "edge potential");
    }
    for (std::size_t e = 0; e < have_edge.size(); ++e) {
        if (!have_edge[e]) throw ValidationError("pairwise model: missing edge potential");
    }

    PairwiseModel m{std::move(graph), std::move(node_pots), std::move(edge_pots)};
    validate_pairwise_model(m);
    return m;
}

inline PairwiseModel load_pairwise(const std::string& path) {
    return pairwise_from_json(detail::parse_json(detail::read_file(path), path));
}

// ---------------------------------------------------------------------------
// Clique factor model: {"graph": {...},
//   "potentials": [{"support": [...], "table": [...]}, ...]}
// ---------------------------------------------------------------------------

struct CliqueModel {
    SiteGraph graph;
    std::vector<CliquePotential> potentials;
};

inline CliqueModel clique_model_from_json(const json& j) {
    SiteGraph graph = graph_from_json(j.contains("graph") ? j["graph"] : json{});
    std::vector<CliquePotential> potentials;
    for (const auto& jp : detail::field<json>(j, "potentials", "clique model")) {
        CliquePotential pot;
        pot.support = detail::field<VertexSet>(jp, "support", "potential");
        pot.table = detail::field<std::vector<double>>(jp, "table", "potential");
        potentials.push_back(std::move(pot));
    }
    return {std::move(graph), std::move(potentials)};
}

inline CliqueModel load_clique_model(const std::string& path) {
    return clique_model_from_json(detail::parse_json(detail::read_file(path), path));
}

// ---------------------------------------------------------------------------
// Chain model for the transfer recursion:
//   {"arities": [...], "edge_terms": [[...row-major...], ...]}
// ---------------------------------------------------------------------------

struct ChainModel {
    std::vector<std::size_t> arities;
    std::vector<std::vector<double>> edge_terms;
};

inline ChainModel chain_model_from_json(const json& j) {
    ChainModel m;
    m.arities = detail::field<std::vector<std::size_t>>(j, "arities", "chain model");
    m.edge_terms =
        detail::field<std::vector<std::vector<double>>>(j, "edge_terms", "chain model");
    return m;
}

inline ChainModel load_chain_model(const std::string& path) {
    return chain_model_from_json(detail::parse_json(detail::read_file(path), path));
}

// ---------------------------------------------------------------------------
// Binary image grid: lines of 0/1 characters.
// ---------------------------------------------------------------------------

inline BinaryImage parse_image_grid(const std::string& text) {
    BinaryImage img;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        if (img.cols == 0) {
            img.cols = static_cast<int>(line.size());
        } else if (static_cast<int>(line.size()) != img.cols) {
            throw ValidationError("image grid: ragged rows");
        }
        for (char ch : line) {
            if (ch != '0' && ch != '1') {
                throw ValidationError("image grid: pixels must be '0' or '1'");
            }
            img.pixels.push_back(ch - '0');
        }
        ++img.rows;
    }
    validate_image(img);
    return img;
}

inline std::string image_to_text(const BinaryImage& img) {
    std::string out;
    for (int r = 0; r < img.rows; ++r) {
        for (int c = 0; c < img.cols; ++c) out += static_cast<char>('0' + img.at(r, c));
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

inline json triple_to_json(const SeparatorTriple& t) {
    return {{"A", t.a}, {"B", t.b}, {"C", t.c}};
}

inline json commutation_report_to_json(const CommutationReport& r) {
    json pairs = json::array();
    for (const CommutationPair& p : r.pairs) {
        pairs.push_back({{"first", p.first},
                         {"second", p.second},
                         {"commutator_norm", p.commutator_norm},
                         {"threshold", p.threshold},
                         {"commutes", p.commutes}});
    }
    return {{"pairs", pairs}, {"all_commute", r.all_commute}};
}

inline json markov_report_to_json(const QuantumMarkovReport& r) {
    json entries = json::array();
    for (const QuantumMarkovEntry& e : r.entries) {
        json je = triple_to_json(e.triple);
        je["cmi_nats"] = e.cmi;
        entries.push_back(je);
    }
    return {{"beta", r.beta},
            {"tol", r.tol},
            {"entries", entries},
            {"max_cmi_nats", r.max_cmi},
            {"is_markov", r.is_markov}};
}

inline json markov_report_to_json(const MarkovReport& r) {
    json entries = json::array();
    for (const MarkovCheckEntry& e : r.entries) {
        json je = triple_to_json(e.triple);
        je["cmi_nats"] = e.cmi;
        entries.push_back(je);
    }
    return {{"tol", r.tol},
            {"entries", entries},
            {"max_cmi_nats", r.max_cmi},
            {"is_markov", r.is_markov}};
}

inline json check_report_to_json(const CheckReport& r) {
    return {{"commutation", commutation_report_to_json(r.commutation)},
            {"markov", markov_report_to_json(r.markov)},
            {"consistent", r.consistent}};
}

inline json bp_result_to_json(const BpResult& r) {
    return {{"marginals", r.marginals},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"last_delta", r.last_delta}};
}

}  // namespace qmn
