#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ddapprox/dd.hpp"

namespace ddapprox {

enum class GateKind { H, T, X_1_2, Y_1_2, CZ };

/// GRCS mnemonic ("h", "t", "x_1_2", "y_1_2", "cz").
std::string_view gate_name(GateKind kind);

struct Gate {
    GateKind kind = GateKind::H;
    std::array<int, 2> qubits{0, -1};
    int cycle = 0;

    [[nodiscard]] int arity() const noexcept {
        return kind == GateKind::CZ ? 2 : 1;
    }
    friend bool operator==(const Gate &, const Gate &) = default;
};

struct Circuit {
    int qubit_count = 0;
    /// Ordered by (cycle, file order).
    std::vector<Gate> gates;
    /// Leading `#` lines, without the marker. Preserved by serialize_grcs.
    std::vector<std::string> header_comments;

    [[nodiscard]] int depth() const noexcept {
        return gates.empty() ? 0 : gates.back().cycle;
    }
};

using GateMatrix = std::array<std::array<Complex, 2>, 2>;

/// 2x2 unitary of a single-qubit gate. CZ has no 2x2 form and throws.
GateMatrix gate_matrix(GateKind kind);

/// GRCS qubit index q lives on DD level n-1-q.
[[nodiscard]] inline int qubit_level(int qubit_count, int qubit) noexcept {
    return qubit_count - 1 - qubit;
}

/**
 * Parses the GRCS text format: the first content line is the qubit count,
 * every further content line is `cycle name q [q2]`. Blank lines and lines
 * starting with `#` are skipped; `#` lines before the qubit count are kept
 * as header comments.
 */
Circuit parse_grcs(std::string_view text);

std::string serialize_grcs(const Circuit &circuit);

/// Checks the structural invariants parse_grcs enforces.
void validate(const Circuit &circuit);

/// CZ pairs of rotation slot `layer` (taken mod 8) on a rows x cols grid.
std::vector<std::pair<int, int>> cz_layer(int rows, int cols, int layer);

/**
 * Supremacy-style random circuit: an H cycle, depth + 1 CZ cycles in the
 * fixed 8-slot rotation (empty slots skipped), then a closing H cycle.
 * Qubits outside a CZ get T after H or X/Y, X^1/2 or Y^1/2 right after a
 * CZ, nothing otherwise. Deterministic per (rows, cols, depth, seed).
 */
Circuit generate_supremacy(int rows, int cols, int depth, std::uint64_t seed);

} // namespace ddapprox
