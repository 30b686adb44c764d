#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qmn/density.hpp"
#include "qmn/errors.hpp"
#include "qmn/markov.hpp"
#include "qmn/pauli.hpp"

namespace qmn {

/// Uniform beta grid inclusive of both endpoints; steps == 1 yields only
/// beta_min. The last point is exactly beta_max.
inline std::vector<double> beta_grid(double beta_min, double beta_max, int steps) {
    if (steps < 1) throw ValidationError("beta_grid: steps must be >= 1");
    if (!(beta_min <= beta_max)) throw ValidationError("beta_grid: beta_min must be <= beta_max");
    std::vector<double> grid(static_cast<std::size_t>(steps));
    if (steps == 1) {
        grid[0] = beta_min;
        return grid;
    }
    for (int k = 0; k < steps; ++k) {
        grid[static_cast<std::size_t>(k)] =
            k == steps - 1
                ? beta_max
                : beta_min + (beta_max - beta_min) *
                                 (static_cast<double>(k) / static_cast<double>(steps - 1));
    }
    return grid;
}

struct SweepConfig {
    LocalHamiltonian model;
    SeparatorTriple triple;
    double beta_min = 0.0;
    double beta_max = 5.0;
    int steps = 51;
    std::size_t max_dim = kDefaultMaxDim;
};

struct SweepRow {
    double beta;
    double cmi_nats;
};

/// One quantum CMI evaluation per grid point, in grid order.
inline std::vector<SweepRow> run_cmi_sweep(const SweepConfig& cfg) {
    validate_local_hamiltonian(cfg.model);
    detail::checked_product(cfg.model.graph.local_dims(), cfg.max_dim);
    detail::checked_partition(cfg.triple, cfg.model.graph.vertex_count(), "run_cmi_sweep");

    const ComplexMatrix hamiltonian = build_hamiltonian(cfg.model, cfg.max_dim);
    std::vector<SweepRow> rows;
    for (double beta : beta_grid(cfg.beta_min, cfg.beta_max, cfg.steps)) {
        const GibbsResult gibbs = gibbs_state(hamiltonian, beta, cfg.model.graph.local_dims());
        rows.push_back({beta, quantum_cmi(gibbs.rho, cfg.triple)});
    }
    return rows;
}

namespace detail {
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace detail

/// CSV with header `beta,cmi_nats`, one newline-terminated row per point,
/// 17 significant digits.
inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "beta,cmi_nats\n";
    for (const SweepRow& row : rows) {
        out += detail::format_g17(row.beta);
        out += ',';
        out += detail::format_g17(row.cmi_nats);
        out += '\n';
    }
    return out;
}

inline std::vector<SweepRow> sweep_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "beta,cmi_nats") {
        throw ValidationError("sweep CSV: missing 'beta,cmi_nats' header");
    }
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw ValidationError("sweep CSV: malformed row");
        try {
            rows.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
        } catch (const std::exception&) {
            throw ValidationError("sweep CSV: non-numeric row");
        }
    }
    return rows;
}

/// Deterministic 800x600 SVG line plot of CMI against beta.
inline std::string render_plot_svg(const std::vector<SweepRow>& rows) {
    if (rows.empty()) throw ValidationError("render_plot: no data rows");

    constexpr double width = 800.0, height = 600.0;
    constexpr double left = 80.0, right = 770.0, top = 30.0, bottom = 540.0;

    double xmin = rows.front().beta, xmax = rows.front().beta;
    double ymin = rows.front().cmi_nats, ymax = rows.front().cmi_nats;
    for (const SweepRow& r : rows) {
        xmin = std::min(xmin, r.beta);
        xmax = std::max(xmax, r.beta);
        ymin = std::min(ymin, r.cmi_nats);
        ymax = std::max(ymax, r.cmi_nats);
    }
    ymin = std::min(ymin, 0.0);
    if (xmax - xmin < 1e-12) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
    auto py = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };
    auto label = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) +
           "\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(right) +
           "\" y2=\"" + num(bottom) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) +
           "\" y2=\"" + num(bottom) + "\" stroke=\"black\"/>\n";

    constexpr int tick_count = 6;
    for (int i = 0; i < tick_count; ++i) {
        const double fx = xmin + (xmax - xmin) * i / (tick_count - 1);
        const double fy = ymin + (ymax - ymin) * i / (tick_count - 1);
        svg += "<line x1=\"" + num(px(fx)) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(px(fx)) +
               "\" y2=\"" + num(bottom + 6.0) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(px(fx)) + "\" y=\"" + num(bottom + 22.0) +
               "\" font-size=\"12\" text-anchor=\"middle\">" + label(fx) + "</text>\n";
        svg += "<line x1=\"" + num(left - 6.0) + "\" y1=\"" + num(py(fy)) + "\" x2=\"" +
               num(left) + "\" y2=\"" + num(py(fy)) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(left - 10.0) + "\" y=\"" + num(py(fy) + 4.0) +
               "\" font-size=\"12\" text-anchor=\"end\">" + label(fy) + "</text>\n";
    }
    svg += "<text x=\"" + num((left + right) / 2.0) + "\" y=\"" + num(height - 20.0) +
           "\" font-size=\"14\" text-anchor=\"middle\">beta</text>\n";
    svg += "<text x=\"20\" y=\"" + num((top + bottom) / 2.0) +
           "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
           num((top + bottom) / 2.0) + ")\">CMI (nats)</text>\n";

    if (rows.size() >= 2) {
        svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i) svg += ' ';
            svg += num(px(rows[i].beta)) + "," + num(py(rows[i].cmi_nats));
        }
        svg += "\"/>\n";
    }
    for (const SweepRow& r : rows) {
        svg += "<circle cx=\"" + num(px(r.beta)) + "\" cy=\"" + num(py(r.cmi_nats)) +
               "\" r=\"3\" fill=\"steelblue\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

struct CheckReport {
    CommutationReport commutation;
    QuantumMarkovReport markov;
    bool consistent;  // all_commute implies a Markov verdict
};

/// Commutation audit plus quantum Markov check at one beta.
inline CheckReport run_check(const LocalHamiltonian& model, double beta, int max_a, double tol,
                             std::size_t max_dim = kDefaultMaxDim) {
    CheckReport report{commutation_audit(model, 1e-12, max_dim),
                       is_quantum_markov_network(model, beta, max_a, tol, max_dim), false};
    report.consistent = !report.commutation.all_commute || report.markov.is_markov;
    return report;
}

}  // namespace qmn
