#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qmn/density.hpp"
#include "qmn/markov.hpp"
#include "qmn/pauli.hpp"
#include "support/oracles.hpp"

using namespace qmn;
using oracles::Rng;

namespace {

SiteGraph qubit_path(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return SiteGraph(n, std::vector<std::size_t>(static_cast<std::size_t>(n), 2), edges);
}

DensityMatrix random_density_state(Rng& rng, const std::vector<std::size_t>& dims) {
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    return DensityMatrix{dims, oracles::random_density(rng, total)};
}

}  // namespace

TEST_CASE("embed a bare Z on one site", "[quantum]") {
    const SiteGraph g(1, {2}, {});
    const ComplexMatrix out = embed({{0}, "Z", 1.0}, g);
    REQUIRE(out(0, 0) == Complex{1.0, 0.0});
    REQUIRE(out(1, 1) == Complex{-1.0, 0.0});
    REQUIRE(out(0, 1) == Complex{});
}

TEST_CASE("embed XX on two sites is the antidiagonal", "[quantum]") {
    const SiteGraph g = qubit_path(2);
    const ComplexMatrix out = embed({{0, 1}, "XX", 1.0}, g);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            REQUIRE(out(i, j) == (i + j == 3 ? Complex{1.0, 0.0} : Complex{}));
        }
    }
}

TEST_CASE("embed matches the Kronecker assembly oracle", "[quantum]") {
    const SiteGraph g = qubit_path(5);
    // h12-style group content: XX on (0,1) plus a field of 2 on site 0
    const PauliTerm xx{{0, 1}, "XX", 1.0};
    const PauliTerm z0{{0}, "Z", 2.0};
    REQUIRE(max_abs_diff(embed(xx, g), oracles::embed_by_kron(xx, g)) == 0.0);
    REQUIRE(max_abs_diff(embed(z0, g), oracles::embed_by_kron(z0, g)) == 0.0);

    Rng rng(401);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const char labels[3] = {'X', 'Y', 'Z'};
    std::uniform_int_distribution<int> pick(0, 2);
    for (int rep = 0; rep < 25; ++rep) {
        PauliTerm t;
        t.coeff = u(rng);
        std::vector<int> sites{0, 1, 2, 3, 4};
        std::shuffle(sites.begin(), sites.end(), rng);
        const int weight = 1 + pick(rng);
        for (int k = 0; k < weight; ++k) {
            t.sites.push_back(sites[static_cast<std::size_t>(k)]);
            t.paulis += labels[pick(rng)];
        }
        REQUIRE(max_abs_diff(embed(t, g), oracles::embed_by_kron(t, g)) <= 1e-15);
    }
}

TEST_CASE("embed rejects Paulis on non-qubit sites", "[quantum]") {
    const SiteGraph g(2, {2, 3}, {{0, 1}});
    REQUIRE_THROWS_AS(embed({{1}, "Z", 1.0}, g), ValidationError);
    REQUIRE_NOTHROW(embed({{0}, "Z", 1.0}, g));  // identity padding on the qutrit
}

TEST_CASE("embed validates term structure", "[quantum]") {
    const SiteGraph g = qubit_path(2);
    REQUIRE_THROWS_AS(embed({{0, 0}, "XX", 1.0}, g), ValidationError);
    REQUIRE_THROWS_AS(embed({{0}, "XY", 1.0}, g), ValidationError);
    REQUIRE_THROWS_AS(embed({{0}, "Q", 1.0}, g), ValidationError);
    REQUIRE_THROWS_AS(embed({{5}, "X", 1.0}, g), ValidationError);
}

TEST_CASE("build_hamiltonian of an empty group list is zero", "[quantum]") {
    const LocalHamiltonian h{qubit_path(2), {}};
    REQUIRE(max_abs(build_hamiltonian(h)) == 0.0);
}

TEST_CASE("a single Z field is diagonal", "[quantum]") {
    const LocalHamiltonian h{qubit_path(2), {{"f", {0}, {{{0}, "Z", 1.5}}}}};
    const ComplexMatrix m = build_hamiltonian(h);
    REQUIRE(m(0, 0).real() == Catch::Approx(1.5));
    REQUIRE(m(1, 1).real() == Catch::Approx(1.5));
    REQUIRE(m(2, 2).real() == Catch::Approx(-1.5));
    REQUIRE(m(3, 3).real() == Catch::Approx(-1.5));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) REQUIRE(m(i, j) == Complex{});
}

TEST_CASE("the five-spin Hamiltonian is traceless and matches the oracle", "[quantum]") {
    const LocalHamiltonian h = five_spin_preset(2.0, 2.0, 2.0);
    const ComplexMatrix m = build_hamiltonian(h);
    REQUIRE(std::abs(trace(m)) <= 1e-12);

    ComplexMatrix want(32);
    for (const TermGroup& group : h.groups) {
        for (const PauliTerm& term : group.terms) {
            want = want + oracles::embed_by_kron(term, h.graph);
        }
    }
    REQUIRE(max_abs_diff(m, want) <= 1e-15);
    REQUIRE(is_hermitian(m, 0.0));
}

TEST_CASE("disjoint supports commute exactly", "[quantum]") {
    const LocalHamiltonian h{qubit_path(4),
                             {{"left", {0, 1}, {{{0, 1}, "XY", 1.3}}},
                              {"right", {2, 3}, {{{2, 3}, "ZX", -0.7}}}}};
    const CommutationReport report = commutation_audit(h);
    REQUIRE(report.all_commute);
    REQUIRE(report.pairs.size() == 1);
    REQUIRE(report.pairs[0].commutator_norm == 0.0);
}

TEST_CASE("five-spin commutation audit distinguishes the presets", "[quantum]") {
    const CommutationReport commuting = commutation_audit(five_spin_preset(2.0, 0.0, 2.0));
    REQUIRE(commuting.all_commute);
    for (const CommutationPair& p : commuting.pairs) REQUIRE(p.commutator_norm <= 1e-12);

    const CommutationReport broken = commutation_audit(five_spin_preset(2.0, 2.0, 2.0));
    REQUIRE(!broken.all_commute);
    int failing = 0;
    for (const CommutationPair& p : broken.pairs) {
        if (!p.commutes) {
            ++failing;
            REQUIRE(p.first == "h23");
            REQUIRE(p.second == "h34");
            REQUIRE(p.commutator_norm > 1.0);
            // [X1X2, Z2] and [Z2, X2X3] contribute orthogonal Pauli strings:
            // norm^2 = (4 + 4) * 32
            REQUIRE(p.commutator_norm == Catch::Approx(16.0).margin(1e-10));
        }
    }
    REQUIRE(failing == 1);
}

TEST_CASE("infinite temperature gives the maximally mixed state", "[quantum]") {
    Rng rng(402);
    const ComplexMatrix h = oracles::random_hermitian(rng, 8);
    const GibbsResult out = gibbs_state(h, 0.0, {2, 2, 2});
    REQUIRE(max_abs_diff(out.rho.matrix, Complex{1.0 / 8.0, 0.0} * ComplexMatrix::identity(8)) <=
            1e-12);
    REQUIRE(out.z == Catch::Approx(8.0).margin(1e-12));
}

TEST_CASE("single-qubit Gibbs state matches the analytic form", "[quantum]") {
    const double field = 1.3, beta = 0.8;
    const SiteGraph g(1, {2}, {});
    const ComplexMatrix h = embed({{0}, "Z", field}, g);
    const GibbsResult out = gibbs_state(h, beta, {2});
    const double denom = 2.0 * std::cosh(beta * field);
    REQUIRE(out.rho.matrix(0, 0).real() == Catch::Approx(std::exp(-beta * field) / denom).epsilon(1e-12));
    REQUIRE(out.rho.matrix(1, 1).real() == Catch::Approx(std::exp(beta * field) / denom).epsilon(1e-12));
    REQUIRE(std::abs(out.rho.matrix(0, 1)) <= 1e-15);
    REQUIRE(out.z == Catch::Approx(denom).epsilon(1e-12));
}

TEST_CASE("five-spin Gibbs state matches the Taylor-series oracle", "[quantum]") {
    const ComplexMatrix h = build_hamiltonian(five_spin_preset(2.0, 2.0, 2.0));
    const GibbsResult out = gibbs_state(h, 1.0, std::vector<std::size_t>(5, 2));

    const ComplexMatrix series = oracles::taylor_expm(Complex{-1.0, 0.0} * h);
    const double z = trace(series).real();
    const ComplexMatrix rho_series = Complex{1.0 / z, 0.0} * series;
    REQUIRE(oracles::trace_distance(out.rho.matrix, rho_series) <= 1e-10);
    REQUIRE(out.z == Catch::Approx(z).epsilon(1e-10));
}

TEST_CASE("Gibbs states satisfy the density-matrix invariants", "[quantum]") {
    Rng rng(403);
    std::uniform_real_distribution<double> beta_dist(0.0, 10.0);
    std::uniform_int_distribution<int> nq(2, 4);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = nq(rng);
        LocalHamiltonian h = oracles::random_zz_hamiltonian(rng, n);
        // mix in an off-diagonal field so the family is not purely classical
        h.groups[0].terms.push_back({{h.groups[0].support[0]}, "X", 0.7});
        const GibbsResult out =
            gibbs_state(build_hamiltonian(h), beta_dist(rng), h.graph.local_dims());
        REQUIRE_NOTHROW(validate_density_matrix(out.rho));
    }
}

TEST_CASE("Gibbs entropy never increases with beta", "[quantum]") {
    Rng rng(404);
    for (int rep = 0; rep < 20; ++rep) {
        LocalHamiltonian h = oracles::random_disjoint_hamiltonian(rng, 4);
        const ComplexMatrix m = build_hamiltonian(h);
        double previous = std::numeric_limits<double>::infinity();
        for (double beta : {0.0, 0.3, 1.0, 2.0, 5.0, 10.0}) {
            const double s = von_neumann_entropy(gibbs_state(m, beta, h.graph.local_dims()).rho);
            REQUIRE(s <= previous + 1e-9);
            previous = s;
        }
    }
}

TEST_CASE("entropy of pure and maximally mixed states", "[quantum]") {
    ComplexMatrix pure(4);
    pure(0, 0) = 1.0;
    REQUIRE(von_neumann_entropy(DensityMatrix{{2, 2}, pure}) == 0.0);

    const DensityMatrix mixed{{2, 2}, Complex{0.25, 0.0} * ComplexMatrix::identity(4)};
    REQUIRE(von_neumann_entropy(mixed) == Catch::Approx(std::log(4.0)).margin(1e-12));
}

TEST_CASE("entropy from a known spectrum", "[quantum]") {
    Rng rng(405);
    const ComplexMatrix u = oracles::random_unitary(rng, 2);
    ComplexMatrix diag(2);
    diag(0, 0) = 0.75;
    diag(1, 1) = 0.25;
    const ComplexMatrix rho = u * diag * adjoint(u);
    const double want = -0.75 * std::log(0.75) - 0.25 * std::log(0.25);
    REQUIRE(von_neumann_entropy(DensityMatrix{{2}, rho}) == Catch::Approx(want).margin(1e-12));
}

TEST_CASE("entropy is invariant under unitary conjugation and bounded by ln dim", "[quantum]") {
    Rng rng(406);
    for (int rep = 0; rep < 50; ++rep) {
        const ComplexMatrix rho = oracles::random_density(rng, 8);
        const ComplexMatrix u = oracles::random_unitary(rng, 8);
        const double s1 = von_neumann_entropy(DensityMatrix{{2, 2, 2}, rho});
        const double s2 =
            von_neumann_entropy(DensityMatrix{{2, 2, 2}, u * rho * adjoint(u)});
        REQUIRE(s1 == Catch::Approx(s2).margin(1e-10));
        REQUIRE(s1 >= 0.0);
        REQUIRE(s1 <= std::log(8.0) + 1e-12);
    }
}

TEST_CASE("quantum CMI vanishes on product states", "[quantum]") {
    Rng rng(407);
    const ComplexMatrix a = oracles::random_density(rng, 2);
    const ComplexMatrix b = oracles::random_density(rng, 2);
    const ComplexMatrix c = oracles::random_density(rng, 2);
    const DensityMatrix rho{{2, 2, 2}, kron(kron(a, b), c)};
    REQUIRE(std::abs(quantum_cmi(rho, {{0}, {1}, {2}})) <= 1e-10);
}

TEST_CASE("quantum CMI vanishes at infinite temperature", "[quantum]") {
    Rng rng(408);
    const ComplexMatrix h = oracles::random_hermitian(rng, 16);
    const GibbsResult out = gibbs_state(h, 0.0, {2, 2, 2, 2});
    REQUIRE(std::abs(quantum_cmi(out.rho, {{0, 1}, {2}, {3}})) <= 1e-10);
}

TEST_CASE("commuting five-spin chain has vanishing CMI at every beta", "[quantum]") {
    const LocalHamiltonian h = five_spin_preset(2.0, 0.0, 2.0);
    const ComplexMatrix m = build_hamiltonian(h);
    const SeparatorTriple t{{0, 1}, {2}, {3, 4}};
    for (double beta : {0.0, 0.5, 1.0, 2.0, 3.5, 5.0}) {
        const GibbsResult out = gibbs_state(m, beta, h.graph.local_dims());
        REQUIRE(std::abs(quantum_cmi(out.rho, t)) <= 1e-9);
    }
}

TEST_CASE("strong subadditivity holds for random density matrices", "[quantum]") {
    Rng rng(409);
    std::uniform_int_distribution<int> nq(3, 5);
    for (int rep = 0; rep < 500; ++rep) {
        const int n = nq(rng);
        const DensityMatrix rho =
            random_density_state(rng, std::vector<std::size_t>(static_cast<std::size_t>(n), 2));

        VertexSet verts(static_cast<std::size_t>(n));
        std::iota(verts.begin(), verts.end(), 0);
        std::shuffle(verts.begin(), verts.end(), rng);
        std::uniform_int_distribution<std::size_t> cut1(1, verts.size() - 1);
        const std::size_t na = cut1(rng);
        std::uniform_int_distribution<std::size_t> cut2(na, verts.size() - 1);
        const std::size_t nb_end = cut2(rng);
        SeparatorTriple t;
        t.a.assign(verts.begin(), verts.begin() + static_cast<long>(na));
        t.b.assign(verts.begin() + static_cast<long>(na), verts.begin() + static_cast<long>(nb_end));
        t.c.assign(verts.begin() + static_cast<long>(nb_end), verts.end());
        REQUIRE(quantum_cmi(rho, t) >= -1e-9);
    }
}

TEST_CASE("quantum Markov verdicts for the five-spin presets", "[quantum]") {
    const QuantumMarkovReport commuting =
        is_quantum_markov_network(five_spin_preset(2.0, 0.0, 2.0), 2.0, 2, 1e-9);
    REQUIRE(commuting.is_markov);

    const QuantumMarkovReport broken =
        is_quantum_markov_network(five_spin_preset(2.0, 2.0, 2.0), 2.0, 2, 1e-9);
    REQUIRE(!broken.is_markov);
    bool witness = false;
    for (const QuantumMarkovEntry& e : broken.entries) {
        if (e.triple.a == VertexSet{0, 1} && e.triple.b == VertexSet{2}) {
            witness = e.cmi > 1e-4;
        }
    }
    REQUIRE(witness);

    REQUIRE(is_quantum_markov_network(five_spin_preset(2.0, 2.0, 2.0), 0.0, 2, 1e-9).is_markov);
}

TEST_CASE("commuting Hamiltonians form quantum Markov networks", "[quantum]") {
    Rng rng(410);
    for (int rep = 0; rep < 6; ++rep) {
        const LocalHamiltonian zz = oracles::random_zz_hamiltonian(rng, 3 + rep % 4);
        REQUIRE(commutation_audit(zz).all_commute);
        const LocalHamiltonian dj = oracles::random_disjoint_hamiltonian(rng, 3 + rep % 4);
        REQUIRE(commutation_audit(dj).all_commute);
        for (double beta : {0.5, 1.0, 2.0, 5.0}) {
            REQUIRE(is_quantum_markov_network(zz, beta, 2, 1e-8).is_markov);
            REQUIRE(is_quantum_markov_network(dj, beta, 2, 1e-8).is_markov);
        }
    }
}

TEST_CASE("capacity cap rejects oversized Markov checks", "[quantum]") {
    REQUIRE_THROWS_AS(is_quantum_markov_network(five_spin_preset(2, 0, 2), 1.0, 2, 1e-9, 16),
                      CapacityError);
}

TEST_CASE("factorization gap at infinite temperature counts states", "[quantum]") {
    const FactorizationGap gap = factorization_gap(five_spin_preset(2.0, 2.0, 2.0), 0.0);
    REQUIRE(gap.exact_z == Catch::Approx(32.0).epsilon(1e-12));
    REQUIRE(gap.sequential_value == Catch::Approx(32.0).epsilon(1e-12));
    REQUIRE(gap.sequential_value_reversed == Catch::Approx(32.0).epsilon(1e-12));
    REQUIRE(gap.gap <= 1e-12);
}

TEST_CASE("commuting chains close the factorization gap", "[quantum]") {
    const FactorizationGap gap = factorization_gap(five_spin_preset(2.0, 0.0, 2.0), 1.0);
    REQUIRE(gap.gap <= 1e-10);
    REQUIRE(gap.gap_reversed <= 1e-10);
}

TEST_CASE("non-commuting chains leave a macroscopic gap", "[quantum]") {
    const FactorizationGap gap = factorization_gap(five_spin_preset(2.0, 2.0, 2.0), 1.0);
    REQUIRE(gap.gap > 1e-3);
}

TEST_CASE("audited chains always close the gap, both orderings", "[quantum]") {
    Rng rng(411);
    for (int rep = 0; rep < 10; ++rep) {
        // random diagonal chain on 3..5 qubits: groups are consecutive edges
        const int n = 3 + rep % 3;
        std::vector<std::pair<int, int>> edges;
        for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
        SiteGraph g(n, std::vector<std::size_t>(static_cast<std::size_t>(n), 2), edges);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        std::vector<TermGroup> groups;
        for (int v = 0; v + 1 < n; ++v) {
            TermGroup group{"e" + std::to_string(v), {v, v + 1}, {}};
            group.terms.push_back({{v, v + 1}, "ZZ", u(rng)});
            group.terms.push_back({{v}, "Z", u(rng)});
            groups.push_back(std::move(group));
        }
        const LocalHamiltonian h{std::move(g), std::move(groups)};
        REQUIRE(commutation_audit(h).all_commute);
        const FactorizationGap gap = factorization_gap(h, 1.0);
        REQUIRE(gap.gap <= 1e-10);
        REQUIRE(gap.gap_reversed <= 1e-10);
    }
}

TEST_CASE("factorization gap rejects non-chain structure", "[quantum]") {
    // star graph: center 0 with leaves 1..3
    SiteGraph star(4, {2, 2, 2, 2}, {{0, 1}, {0, 2}, {0, 3}});
    std::vector<TermGroup> groups{{"a", {0, 1}, {{{0, 1}, "ZZ", 1.0}}},
                                  {"b", {0, 2}, {{{0, 2}, "ZZ", 1.0}}},
                                  {"c", {0, 3}, {{{0, 3}, "ZZ", 1.0}}}};
    REQUIRE_THROWS_AS(factorization_gap({std::move(star), std::move(groups)}, 1.0),
                      ValidationError);

    // missing edge group on a path
    const LocalHamiltonian incomplete{qubit_path(3), {{"a", {0, 1}, {{{0, 1}, "ZZ", 1.0}}}}};
    REQUIRE_THROWS_AS(factorization_gap(incomplete, 1.0), ValidationError);
}

TEST_CASE("five_spin_preset builds the documented structure", "[quantum]") {
    const LocalHamiltonian h = five_spin_preset(1.0, 2.0, 3.0);
    REQUIRE(h.graph.vertex_count() == 5);
    REQUIRE(h.graph.edges() ==
            std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    REQUIRE(h.groups.size() == 4);
    REQUIRE(h.groups[0].name == "h12");
    REQUIRE(h.groups[1].support == VertexSet{1, 2});
    REQUIRE(h.groups[1].terms[1].coeff == 1.0);  // h2 / 2
    REQUIRE(h.groups[2].terms[1].sites == std::vector<int>{2});
    REQUIRE(h.groups[3].terms[1].coeff == 3.0);

    REQUIRE(commutation_audit(five_spin_preset(0.0, 0.0, 0.0)).all_commute);
}

TEST_CASE("LocalHamiltonian validation catches structural mistakes", "[quantum]") {
    const SiteGraph g = qubit_path(3);
    // support is not a clique
    REQUIRE_THROWS_AS(
        validate_local_hamiltonian({g, {{"bad", {0, 2}, {{{0}, "Z", 1.0}}}}}),
        ValidationError);
    // term site outside the declared support
    REQUIRE_THROWS_AS(
        validate_local_hamiltonian({g, {{"bad", {0, 1}, {{{2}, "Z", 1.0}}}}}),
        ValidationError);
    // duplicate group names
    REQUIRE_THROWS_AS(validate_local_hamiltonian({g,
                                                  {{"dup", {0}, {{{0}, "Z", 1.0}}},
                                                   {"dup", {1}, {{{1}, "Z", 1.0}}}}}),
                      ValidationError);
}

TEST_CASE("density matrix validation enforces the invariants", "[quantum]") {
    Rng rng(412);
    REQUIRE_NOTHROW(validate_density_matrix(random_density_state(rng, {2, 2})));

    ComplexMatrix not_normalized = ComplexMatrix::identity(4);
    REQUIRE_THROWS_AS(validate_density_matrix(DensityMatrix{{2, 2}, not_normalized}),
                      ValidationError);

    ComplexMatrix negative(2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    REQUIRE_THROWS_AS(validate_density_matrix(DensityMatrix{{2}, negative}), ValidationError);

    ComplexMatrix skew(2);
    skew(0, 0) = 0.5;
    skew(1, 1) = 0.5;
    skew(0, 1) = Complex{0.0, 0.3};
    skew(1, 0) = Complex{0.0, 0.3};
    REQUIRE_THROWS_AS(validate_density_matrix(DensityMatrix{{2}, skew}), ValidationError);
}
