#include <catch2/catch_amalgamated.hpp>

#include "ddapprox/approx.hpp"
#include "ddapprox/contribution.hpp"
#include "ddapprox/error.hpp"
#include "ddapprox/simulate.hpp"
#include "support.hpp"

using namespace ddapprox;
using Catch::Approx;

namespace {

std::vector<double> level_sums(const DecisionDiagram &dd, const ContributionMap &cmap) {
    std::vector<double> sums(static_cast<std::size_t>(dd.qubit_count()), 0.0);
    for (NodeId id : reachable_nodes(dd)) {
        sums[static_cast<std::size_t>(dd.node(id).level)] += cmap[id];
    }
    return sums;
}

} // namespace

TEST_CASE("|000> puts all mass on the single path", "[contribution]") {
    const DecisionDiagram dd(3);
    const ContributionMap cmap = compute_contributions(dd);
    const auto nodes = reachable_nodes(dd);
    REQUIRE(nodes.size() == 3);
    for (NodeId id : nodes) {
        CHECK(cmap[id] == Approx(1.0).margin(1e-15));
    }
}

TEST_CASE("two children of the root split the mass", "[contribution]") {
    // (0.6, 0.8) on top, distinct bottoms
    std::vector<Complex> v{0.6, 0.0, 0.0, 0.8};
    const DecisionDiagram dd = DecisionDiagram::from_statevector(v);
    const ContributionMap cmap = compute_contributions(dd);
    const Node &root = dd.node(dd.root().target);
    CHECK(cmap[dd.root().target] == Approx(1.0).margin(1e-15));
    CHECK(cmap[root.children[0].target] == Approx(0.36).margin(1e-15));
    CHECK(cmap[root.children[1].target] == Approx(0.64).margin(1e-15));
}

TEST_CASE("shared node collects both paths", "[contribution]") {
    const std::vector<Complex> v{0.5, 0.5, 0.5, 0.5};
    const DecisionDiagram dd = DecisionDiagram::from_statevector(v);
    const ContributionMap cmap = compute_contributions(dd);
    const NodeId bottom = dd.node(dd.root().target).children[0].target;
    CHECK(cmap[bottom] == Approx(1.0).margin(1e-15));
}

TEST_CASE("contributions match path enumeration", "[contribution][property]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const int qubits = 1 + static_cast<int>(rng() % 8);
        DecisionDiagram dd(1);
        if (trial % 2 == 0) {
            dd = simulate_circuit(testing::random_circuit(qubits, 6, rng));
        } else {
            auto v = testing::random_unit(std::size_t{1} << qubits, rng);
            // sprinkle zeros so some edges vanish
            for (auto &x : v) {
                if (rng() % 4 == 0) {
                    x = 0.0;
                }
            }
            if (std::all_of(v.begin(), v.end(), [](Complex x) { return x == 0.0; })) {
                v[0] = 1.0;
            }
            double n = 0.0;
            for (auto x : v) {
                n += std::norm(x);
            }
            for (auto &x : v) {
                x /= std::sqrt(n);
            }
            dd = DecisionDiagram::from_statevector(v);
        }
        const ContributionMap cmap = compute_contributions(dd);
        const auto oracle = testing::contributions_by_paths(dd);
        for (NodeId id : reachable_nodes(dd)) {
            const auto it = oracle.find(id);
            const double want = it == oracle.end() ? 0.0 : it->second;
            CHECK(std::abs(cmap[id] - want) < 1e-10);
        }
        for (double s : level_sums(dd, cmap)) {
            CHECK(s == Approx(1.0).margin(1e-9));
        }
    }
}

TEST_CASE("contributions with virtual edges match path enumeration", "[contribution][property]") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const DecisionDiagram exact = simulate_circuit(generate_supremacy(2, 3, 6, trial + 1));
        const ContributionMap cmap = compute_contributions(exact);
        const StrategySpec spec{1 + trial % 2, 2, 0.4, Matcher::Exhaustive, 0};
        const ApproxResult r = run_strategy(exact, spec, cmap);
        const ContributionMap after = compute_contributions(r.dd);
        const auto oracle = testing::contributions_by_paths(r.dd);
        for (NodeId id : reachable_nodes(r.dd)) {
            const auto it = oracle.find(id);
            const double want = it == oracle.end() ? 0.0 : it->second;
            CHECK(std::abs(after[id] - want) < 1e-10);
        }
    }
}

TEST_CASE("level sums are one on generated benchmarks", "[contribution]") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const DecisionDiagram dd = simulate_circuit(generate_supremacy(3, 4, 10, seed));
        const ContributionMap cmap = compute_contributions(dd);
        for (double s : level_sums(dd, cmap)) {
            CHECK(s == Approx(1.0).margin(1e-9));
        }
    }
}

TEST_CASE("bottom replacements leave upper contributions alone", "[contribution]") {
    const DecisionDiagram exact = simulate_circuit(generate_supremacy(3, 3, 8, 2));
    const ContributionMap before = compute_contributions(exact);
    const ApproxResult r =
        run_strategy(exact, StrategySpec{1, 1, 0.5, Matcher::Exhaustive, 0}, before);
    REQUIRE(!r.replacements.empty());
    const ContributionMap after = compute_contributions(r.dd);
    for (NodeId id : reachable_nodes(exact)) {
        if (exact.node(id).level >= 1) {
            CHECK(std::abs(after[id] - before[id]) < 1e-12);
        }
    }
}

TEST_CASE("rank_and_split", "[contribution]") {
    const ContributionMap cmap{0.5, 0.1, 0.1, 0.3, 0.0};
    const std::vector<NodeId> nodes{0, 1, 2, 3};
    const Split half = rank_and_split(cmap, nodes, 0.5);
    CHECK(half.replaced == std::vector<NodeId>{1, 2});
    CHECK(half.candidates.size() == 2);
    CHECK(rank_and_split(cmap, nodes, 0.0).replaced.empty());
    CHECK(rank_and_split(cmap, nodes, 1.0).candidates.empty());
    // floor(0.74 * 4) = 2
    CHECK(rank_and_split(cmap, nodes, 0.74).replaced.size() == 2);
    CHECK_THROWS_AS(rank_and_split(cmap, nodes, 1.5), Error);
    CHECK_THROWS_AS(rank_and_split(cmap, nodes, -0.1), Error);
}

TEST_CASE("split is monotone in the fraction", "[contribution][property]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng() % 40;
        ContributionMap cmap(n);
        std::vector<NodeId> nodes(n);
        for (std::size_t i = 0; i < n; ++i) {
            cmap[i] = u(rng) < 0.2 ? 0.25 : u(rng);
            nodes[i] = static_cast<NodeId>(i);
        }
        const double f1 = u(rng);
        const double f2 = f1 + (1.0 - f1) * u(rng);
        const Split a = rank_and_split(cmap, nodes, f1);
        const Split b = rank_and_split(cmap, nodes, f2);
        REQUIRE(a.replaced.size() <= b.replaced.size());
        CHECK(std::equal(a.replaced.begin(), a.replaced.end(), b.replaced.begin()));
        // every replaced node has no more contribution than any candidate
        for (NodeId r : b.replaced) {
            for (NodeId c : b.candidates) {
                CHECK(cmap[r] <= cmap[c]);
            }
        }
    }
}
