#include <catch2/catch_amalgamated.hpp>

#include "ddapprox/error.hpp"
#include "ddapprox/simulate.hpp"
#include "support.hpp"

using namespace ddapprox;
using Catch::Approx;

namespace {

// Plain matrix-per-gate oracle, written independently of dense_simulate.
std::vector<Complex> oracle(const Circuit &c) {
    const std::size_t size = std::size_t{1} << c.qubit_count;
    std::vector<Complex> v(size, Complex{0.0, 0.0});
    v[0] = 1.0;
    const double r = 1.0 / std::sqrt(2.0);
    for (const Gate &g : c.gates) {
        const std::size_t bit = std::size_t{1} << (c.qubit_count - 1 - g.qubits[0]);
        if (g.kind == GateKind::CZ) {
            const std::size_t bit2 = std::size_t{1} << (c.qubit_count - 1 - g.qubits[1]);
            for (std::size_t i = 0; i < size; ++i) {
                if ((i & bit) && (i & bit2)) {
                    v[i] = -v[i];
                }
            }
            continue;
        }
        Complex m[2][2];
        const Complex i1{0.0, 1.0};
        switch (g.kind) {
        case GateKind::H:
            m[0][0] = r, m[0][1] = r, m[1][0] = r, m[1][1] = -r;
            break;
        case GateKind::T:
            m[0][0] = 1.0, m[0][1] = 0.0, m[1][0] = 0.0, m[1][1] = std::exp(i1 * (M_PI / 4));
            break;
        case GateKind::X_1_2:
            m[0][0] = (1.0 + i1) / 2.0, m[0][1] = (1.0 - i1) / 2.0;
            m[1][0] = (1.0 - i1) / 2.0, m[1][1] = (1.0 + i1) / 2.0;
            break;
        default:
            m[0][0] = (1.0 + i1) / 2.0, m[0][1] = -(1.0 + i1) / 2.0;
            m[1][0] = (1.0 + i1) / 2.0, m[1][1] = (1.0 + i1) / 2.0;
            break;
        }
        for (std::size_t i = 0; i < size; ++i) {
            if (i & bit) {
                continue;
            }
            const Complex a = v[i];
            const Complex b = v[i | bit];
            v[i] = m[0][0] * a + m[0][1] * b;
            v[i | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
    return v;
}

double norm2(const std::vector<Complex> &v) {
    double s = 0.0;
    for (auto x : v) {
        s += std::norm(x);
    }
    return s;
}

} // namespace

TEST_CASE("gate matrices agree with the oracle definitions", "[simulate]") {
    for (GateKind k : {GateKind::H, GateKind::T, GateKind::X_1_2, GateKind::Y_1_2}) {
        for (int col = 0; col < 2; ++col) {
            Circuit c;
            c.qubit_count = 1;
            if (col == 1) {
                // |1> = H T^4 H |0>
                for (int i = 0; i < 6; ++i) {
                    c.gates.push_back({i == 0 || i == 5 ? GateKind::H : GateKind::T, {0, -1}, i});
                }
            }
            c.gates.push_back({k, {0, -1}, 6});
            const auto got = dense_simulate(c);
            const auto want = oracle(c);
            CHECK(testing::max_diff(got, want) < 1e-14);
        }
    }
}

TEST_CASE("H on one qubit", "[simulate]") {
    const DecisionDiagram dd = simulate_circuit(parse_grcs("1\n0 h 0"));
    const auto v = to_statevector(dd);
    CHECK(std::abs(v[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(v[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(count_nodes(dd).total == 1);
}

TEST_CASE("H H CZ gives the signed uniform state", "[simulate]") {
    const auto v = to_statevector(simulate_circuit(parse_grcs("2\n0 h 0\n0 h 1\n1 cz 0 1")));
    const std::vector<Complex> want{0.5, 0.5, 0.5, -0.5};
    CHECK(testing::max_diff(v, want) < 1e-15);
}

TEST_CASE("T leaves |0> alone and phases |1>", "[simulate]") {
    const auto v0 = to_statevector(simulate_circuit(parse_grcs("1\n0 t 0")));
    CHECK(v0[0] == Complex{1.0, 0.0});
    const auto v = to_statevector(simulate_circuit(parse_grcs("1\n0 h 0\n1 t 0")));
    CHECK(std::abs(v[1] - std::exp(Complex{0.0, M_PI / 4}) / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("qubit 0 is the most significant index bit", "[simulate]") {
    const auto v = to_statevector(simulate_circuit(parse_grcs("3\n0 h 0")));
    CHECK(std::abs(v[4] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(v[1]) == 0.0);
}

TEST_CASE("random circuits match the dense oracle", "[simulate][property]") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int qubits = 1 + static_cast<int>(rng() % 6);
        const Circuit c = testing::random_circuit(qubits, 1 + static_cast<int>(rng() % 12), rng);
        const auto want = oracle(c);
        const auto got = to_statevector(simulate_circuit(c));
        CHECK(testing::max_diff(got, want) < 1e-12);
        CHECK(norm2(got) == Approx(1.0).margin(1e-12));
        CHECK(testing::max_diff(dense_simulate(c), want) < 1e-12);
    }
}

TEST_CASE("generated 5-qubit circuit matches", "[simulate]") {
    const Circuit c = generate_supremacy(1, 5, 8, 3);
    CHECK(testing::max_diff(to_statevector(simulate_circuit(c)), oracle(c)) < 1e-12);
    const Circuit d = generate_supremacy(2, 3, 12, 9);
    CHECK(testing::max_diff(to_statevector(simulate_circuit(d)), oracle(d)) < 1e-12);
}

TEST_CASE("norm is preserved gate by gate", "[simulate][property]") {
    std::mt19937_64 rng(5);
    const Circuit c = testing::random_circuit(7, 20, rng);
    DecisionDiagram dd(7);
    for (const Gate &g : c.gates) {
        apply_gate(dd, g);
        CHECK(norm2(to_statevector(dd)) == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("approximated diagrams refuse gates", "[simulate]") {
    DecisionDiagram dd = simulate_circuit(parse_grcs("2\n0 h 0"));
    dd.mark_approximated();
    try {
        apply_gate(dd, Gate{GateKind::H, {1, -1}, 0});
        FAIL("expected an error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::UnsupportedOnApproximatedDD);
    }
}

TEST_CASE("dense simulation refuses large registers", "[simulate]") {
    Circuit c;
    c.qubit_count = kMaxDenseQubits + 1;
    CHECK_THROWS_AS(dense_simulate(c), Error);
}

TEST_CASE("4x5 depth 10 diagram is nearly full", "[simulate][slow]") {
    const Circuit c = generate_supremacy(4, 5, 10, 0);
    const DecisionDiagram dd = DecisionDiagram::from_statevector(dense_simulate(c));
    CHECK(count_nodes(dd).per_level[0] >= static_cast<std::size_t>(0.9 * (1 << 19)));
}

TEST_CASE("4x4 depth 10 gate-by-gate matches dense", "[simulate][slow]") {
    const Circuit c = generate_supremacy(4, 4, 10, 1);
    const auto v = dense_simulate(c);
    const DecisionDiagram sim = simulate_circuit(c);
    CHECK(testing::max_diff(to_statevector(sim), v) < 1e-12);
    CHECK(count_nodes(sim).per_level == count_nodes(DecisionDiagram::from_statevector(v)).per_level);
}
