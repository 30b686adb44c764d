// Command-line front end for the Markov network library: beta sweeps of
// quantum conditional mutual information, commutation/Markov checks, and the
// classical subcommands (hc-check, bp, transfer-z, denoise).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmn/qmn.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNumerical = 4;

std::size_t capacity_cap() {
    const char* env = std::getenv("QGM_MAX_DIM");
    if (env == nullptr || *env == '\0') return qmn::kDefaultMaxDim;
    try {
        const long long v = std::stoll(env);
        if (v < 1) throw qmn::ValidationError("QGM_MAX_DIM must be positive");
        return static_cast<std::size_t>(v);
    } catch (const qmn::ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw qmn::ValidationError(std::string("QGM_MAX_DIM is not a valid integer: ") + env);
    }
}

qmn::VertexSet parse_vertex_list(const std::string& text) {
    qmn::VertexSet out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        try {
            out.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw qmn::ValidationError("bad vertex list entry: '" + token + "'");
        }
    }
    if (out.empty()) throw qmn::ValidationError("empty vertex list");
    return qmn::vset::normalized(out);
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw qmn::ValidationError("cannot write to " + out_path);
    out << content;
}

struct ModelArgs {
    std::string model = "five_spin";
    double h1 = 2.0, h2 = 2.0, h3 = 2.0;
    std::string a_list, b_list, c_list;
};

void add_model_options(CLI::App* cmd, ModelArgs& args) {
    cmd->add_option("--model", args.model, "Preset name ('five_spin') or Hamiltonian JSON path")
        ->capture_default_str();
    cmd->add_option("--h1", args.h1, "Field on the first site (five_spin preset)")
        ->capture_default_str();
    cmd->add_option("--h2", args.h2, "Shared field on the middle site (five_spin preset)")
        ->capture_default_str();
    cmd->add_option("--h3", args.h3, "Field on the last site (five_spin preset)")
        ->capture_default_str();
}

qmn::LocalHamiltonian load_model(const ModelArgs& args) {
    if (args.model == "five_spin") return qmn::five_spin_preset(args.h1, args.h2, args.h3);
    return qmn::load_hamiltonian(args.model);
}

// Default triple: A as given (or {0,1} for the preset), B = n(A), C = rest.
qmn::SeparatorTriple resolve_triple(const qmn::LocalHamiltonian& model, const ModelArgs& args) {
    qmn::SeparatorTriple t;
    if (!args.a_list.empty()) {
        t.a = parse_vertex_list(args.a_list);
    } else if (args.model == "five_spin") {
        t.a = {0, 1};
    } else {
        throw qmn::ValidationError("--A is required for file models");
    }
    t.b = args.b_list.empty() ? qmn::neighbors(model.graph, t.a) : parse_vertex_list(args.b_list);
    if (args.c_list.empty()) {
        const qmn::VertexSet all = model.graph.all_vertices();
        t.c = qmn::vset::set_difference(qmn::vset::set_difference(all, t.a), t.b);
    } else {
        t.c = parse_vertex_list(args.c_list);
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classical and quantum Markov network toolkit"};
    app.require_subcommand(1);

    // --- cmi-sweep ---
    ModelArgs sweep_model;
    double beta_min = 0.0, beta_max = 5.0;
    int steps = 51;
    std::string sweep_out;
    CLI::App* sweep = app.add_subcommand(
        "cmi-sweep", "Quantum CMI of a Gibbs state over a uniform beta grid (CSV)");
    add_model_options(sweep, sweep_model);
    sweep->add_option("--A", sweep_model.a_list, "Comma-separated vertex set A");
    sweep->add_option("--B", sweep_model.b_list, "Vertex set B (default: neighbours of A)");
    sweep->add_option("--C", sweep_model.c_list, "Vertex set C (default: remaining vertices)");
    sweep->add_option("--beta-min", beta_min)->capture_default_str();
    sweep->add_option("--beta-max", beta_max)->capture_default_str();
    sweep->add_option("--steps", steps)->capture_default_str();
    sweep->add_option("--out", sweep_out, "Output CSV path (default: stdout)");

    // --- check ---
    ModelArgs check_model;
    double check_beta = 1.0, check_tol = 1e-9;
    int check_max_a = 2;
    std::string check_out;
    CLI::App* check = app.add_subcommand(
        "check", "Commutation audit plus quantum Markov verdict (JSON)");
    add_model_options(check, check_model);
    check->add_option("--beta", check_beta)->capture_default_str();
    check->add_option("--max-a", check_max_a)->capture_default_str();
    check->add_option("--tol", check_tol)->capture_default_str();
    check->add_option("--out", check_out, "Output JSON path (default: stdout)");

    // --- plot ---
    std::string plot_in, plot_out;
    CLI::App* plot = app.add_subcommand("plot", "Render a sweep CSV as an SVG line plot");
    plot->add_option("csv", plot_in, "Input CSV file")->required();
    plot->add_option("--out", plot_out, "Output SVG path (default: stdout)");

    // --- hc-check ---
    std::string hc_model_path, hc_out;
    int hc_max_a = 2;
    double hc_tol = 1e-9;
    CLI::App* hc = app.add_subcommand(
        "hc-check", "Factorize clique potentials and verify the Markov property (JSON)");
    hc->add_option("--model", hc_model_path, "Clique model JSON path")->required();
    hc->add_option("--max-a", hc_max_a)->capture_default_str();
    hc->add_option("--tol", hc_tol)->capture_default_str();
    hc->add_option("--out", hc_out, "Output JSON path (default: stdout)");

    // --- bp ---
    std::string bp_model_path, bp_out;
    int bp_max_iters = 200;
    double bp_damping = -1.0;
    CLI::App* bp = app.add_subcommand(
        "bp", "Sum-product belief propagation marginals of a pairwise model (JSON)");
    bp->add_option("--model", bp_model_path, "Pairwise model JSON path")->required();
    bp->add_option("--max-iters", bp_max_iters)->capture_default_str();
    bp->add_option("--damping", bp_damping,
                   "Message damping in [0,1) (default: 0 on trees, 0.5 on loopy graphs)");
    bp->add_option("--out", bp_out, "Output JSON path (default: stdout)");

    // --- transfer-z ---
    std::string tz_model_path, tz_out;
    CLI::App* tz = app.add_subcommand(
        "transfer-z", "Chain partition function by sequential summation");
    tz->add_option("--model", tz_model_path, "Chain model JSON path")->required();
    tz->add_option("--out", tz_out, "Output path (default: stdout)");

    // --- denoise ---
    std::string dn_image_path, dn_out;
    double dn_coupling = 1.0, dn_evidence = 0.5;
    CLI::App* dn = app.add_subcommand(
        "denoise", "Restore a binary pixel grid with a grid MRF");
    dn->add_option("--image", dn_image_path, "Text grid of 0/1 characters")->required();
    dn->add_option("--coupling", dn_coupling)->capture_default_str();
    dn->add_option("--evidence", dn_evidence)->capture_default_str();
    dn->add_option("--out", dn_out, "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitValidation;
    }

    try {
        const std::size_t max_dim = capacity_cap();

        if (sweep->parsed()) {
            qmn::LocalHamiltonian model = load_model(sweep_model);
            const qmn::SeparatorTriple triple = resolve_triple(model, sweep_model);
            const qmn::SweepConfig cfg{std::move(model), triple, beta_min, beta_max, steps,
                                       max_dim};
            write_output(sweep_out, qmn::sweep_to_csv(qmn::run_cmi_sweep(cfg)));
        } else if (check->parsed()) {
            const qmn::LocalHamiltonian model = load_model(check_model);
            const qmn::CheckReport report =
                qmn::run_check(model, check_beta, check_max_a, check_tol, max_dim);
            write_output(check_out, qmn::check_report_to_json(report).dump(2) + "\n");
        } else if (plot->parsed()) {
            const auto rows = qmn::sweep_from_csv(qmn::detail::read_file(plot_in));
            write_output(plot_out, qmn::render_plot_svg(rows));
        } else if (hc->parsed()) {
            const qmn::CliqueModel model = qmn::load_clique_model(hc_model_path);
            const qmn::FactorizedJoint joint = qmn::hc_factorize(model.graph, model.potentials);
            const qmn::MarkovReport report =
                qmn::is_markov_network(model.graph, joint.table, hc_max_a, hc_tol);
            qmn::json j = qmn::markov_report_to_json(report);
            j["normalization"] = joint.normalization;
            write_output(hc_out, j.dump(2) + "\n");
        } else if (bp->parsed()) {
            const qmn::PairwiseModel model = qmn::load_pairwise(bp_model_path);
            const double damping =
                bp_damping < 0.0 ? qmn::default_damping(model.graph) : bp_damping;
            const qmn::BpResult result = qmn::sum_product_bp(model, bp_max_iters, damping);
            write_output(bp_out, qmn::bp_result_to_json(result).dump(2) + "\n");
        } else if (tz->parsed()) {
            const qmn::ChainModel model = qmn::load_chain_model(tz_model_path);
            const double z = qmn::transfer_matrix_Z(model.edge_terms, model.arities);
            write_output(tz_out, qmn::detail::format_g17(z) + "\n");
        } else if (dn->parsed()) {
            const qmn::BinaryImage noisy =
                qmn::parse_image_grid(qmn::detail::read_file(dn_image_path));
            const qmn::BinaryImage restored =
                qmn::denoise_demo(noisy, dn_coupling, dn_evidence);
            write_output(dn_out, qmn::image_to_text(restored));
        }
    } catch (const qmn::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const qmn::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
