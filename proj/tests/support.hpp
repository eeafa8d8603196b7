#pragma once

// Test-only helpers: random inputs and brute-force oracles that do not
// reuse the library's traversal code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "ddapprox/circuit.hpp"
#include "ddapprox/dd.hpp"

namespace testing {

using ddapprox::Complex;

inline std::vector<Complex> random_unit(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> v(n);
    double norm = 0.0;
    for (auto &x : v) {
        x = {g(rng), g(rng)};
        norm += std::norm(x);
    }
    for (auto &x : v) {
        x /= std::sqrt(norm);
    }
    return v;
}

inline Complex dot(const std::vector<Complex> &a, const std::vector<Complex> &b) {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

inline double max_diff(const std::vector<Complex> &a, const std::vector<Complex> &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

/// Random circuit over the generator's gate set, one gate per qubit per
/// cycle at most.
inline ddapprox::Circuit random_circuit(int qubits, int depth, std::mt19937_64 &rng) {
    using ddapprox::GateKind;
    ddapprox::Circuit c;
    c.qubit_count = qubits;
    const GateKind singles[] = {GateKind::H, GateKind::T, GateKind::X_1_2, GateKind::Y_1_2};
    for (int cycle = 0; cycle < depth; ++cycle) {
        std::vector<int> order(static_cast<std::size_t>(qubits));
        for (int q = 0; q < qubits; ++q) {
            order[static_cast<std::size_t>(q)] = q;
        }
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t i = 0;
        while (i < order.size()) {
            if (i + 1 < order.size() && (rng() % 3 == 0)) {
                c.gates.push_back({GateKind::CZ, {order[i], order[i + 1]}, cycle});
                i += 2;
            } else {
                c.gates.push_back({singles[rng() % 4], {order[i], -1}, cycle});
                i += 1;
            }
        }
    }
    return c;
}

/// Amplitude of basis index `index` by walking the diagram from the root,
/// honoring virtual edges the long way: per edge, look up the replacement
/// block and its continuations directly.
inline Complex amplitude_by_walk(const ddapprox::DecisionDiagram &dd, std::size_t index,
                                 std::vector<ddapprox::NodeId> *visited = nullptr) {
    using namespace ddapprox;
    Edge e = dd.root();
    Complex amp = e.weight;
    // Active virtual evaluation: owner, entry, bits taken so far.
    NodeId owner = kTerminal;
    std::int32_t vnum = kNoVnum;
    std::uint32_t path = 0;
    int taken = 0;
    if (e.has_vnum()) {
        owner = e.target;
        vnum = e.vnum;
    }
    NodeId at = e.target;
    while (at != kTerminal) {
        if (visited) {
            visited->push_back(at);
        }
        const Node &n = dd.node(at);
        const int bit = static_cast<int>((index >> n.level) & 1U);
        const Edge &child = n.children[static_cast<std::size_t>(bit)];
        amp *= child.weight;
        if (amp == Complex{0.0, 0.0}) {
            return amp;
        }
        if (vnum != kNoVnum) {
            const VirtualEntry &ve = dd.node(owner).virtual_entries[static_cast<std::size_t>(vnum)];
            path = (path << 1U) | static_cast<std::uint32_t>(bit);
            ++taken;
            if (taken == ve.block_size) {
                const Continuation c = ve.continuations[path];
                if (c.target == kTerminal && n.level > 0) {
                    return {0.0, 0.0};
                }
                at = c.target;
                owner = c.target;
                vnum = c.nested_vnum;
                path = 0;
                taken = 0;
                continue;
            }
            at = child.target;
            continue;
        }
        at = child.target;
        if (child.has_vnum()) {
            owner = child.target;
            vnum = child.vnum;
            path = 0;
            taken = 0;
        }
    }
    return amp;
}

/// Contribution oracle: sum |amplitude|^2 over every basis path through
/// each node.
inline std::map<ddapprox::NodeId, double> contributions_by_paths(
    const ddapprox::DecisionDiagram &dd) {
    std::map<ddapprox::NodeId, double> out;
    const std::size_t size = std::size_t{1} << dd.qubit_count();
    for (std::size_t i = 0; i < size; ++i) {
        std::vector<ddapprox::NodeId> visited;
        const double p = std::norm(amplitude_by_walk(dd, i, &visited));
        std::sort(visited.begin(), visited.end());
        visited.erase(std::unique(visited.begin(), visited.end()), visited.end());
        for (auto id : visited) {
            out[id] += p;
        }
    }
    return out;
}

} // namespace testing
