#include "ddapprox/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <set>

#include "ddapprox/error.hpp"

namespace ddapprox {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                     line[pos] == '\r')) {
            ++pos;
        }
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' &&
               line[pos] != '\r') {
            ++pos;
        }
        if (pos > start) {
            tokens.push_back(line.substr(start, pos - start));
        }
    }
    return tokens;
}

std::optional<int> parse_int(std::string_view token) {
    int value = 0;
    const auto *end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end || value < 0) {
        return std::nullopt;
    }
    return value;
}

std::optional<GateKind> parse_gate_name(std::string_view name) {
    for (GateKind k : {GateKind::H, GateKind::T, GateKind::X_1_2,
                       GateKind::Y_1_2, GateKind::CZ}) {
        if (name == gate_name(k)) {
            return k;
        }
    }
    return std::nullopt;
}

/// Tracks qubit use within the current cycle while gates are appended.
class CycleChecker {
  public:
    explicit CycleChecker(int qubits) : qubits_(qubits) {}

    void add(const Gate &g, int line) {
        if (g.cycle < cycle_) {
            throw Error(ErrorCode::NonMonotoneCycle,
                        "cycle " + std::to_string(g.cycle) + " after cycle " +
                            std::to_string(cycle_),
                        line);
        }
        if (g.cycle != cycle_) {
            cycle_ = g.cycle;
            used_.clear();
        }
        for (int i = 0; i < g.arity(); ++i) {
            const int q = g.qubits[static_cast<std::size_t>(i)];
            if (q < 0 || q >= qubits_) {
                throw Error(ErrorCode::QubitOutOfRange,
                            "qubit " + std::to_string(q), line);
            }
            if (!used_.insert(q).second) {
                throw Error(ErrorCode::DuplicateQubitInCycle,
                            "qubit " + std::to_string(q) + " in cycle " +
                                std::to_string(g.cycle),
                            line);
            }
        }
    }

  private:
    int qubits_;
    int cycle_ = 0;
    std::set<int> used_;
};

} // namespace

std::string_view gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::H:
        return "h";
    case GateKind::T:
        return "t";
    case GateKind::X_1_2:
        return "x_1_2";
    case GateKind::Y_1_2:
        return "y_1_2";
    case GateKind::CZ:
        return "cz";
    }
    return "?";
}

GateMatrix gate_matrix(GateKind kind) {
    using namespace std::complex_literals;
    const double r = std::numbers::sqrt2 / 2.0;
    switch (kind) {
    case GateKind::H:
        return {{{r, r}, {r, -r}}};
    case GateKind::T:
        return {{{1.0, 0.0}, {0.0, std::polar(1.0, std::numbers::pi / 4.0)}}};
    case GateKind::X_1_2:
        return {{{0.5 + 0.5i, 0.5 - 0.5i}, {0.5 - 0.5i, 0.5 + 0.5i}}};
    case GateKind::Y_1_2:
        return {{{0.5 + 0.5i, -0.5 - 0.5i}, {0.5 + 0.5i, 0.5 + 0.5i}}};
    case GateKind::CZ:
        break;
    }
    throw Error(ErrorCode::InvalidArgument, "cz has no single-qubit matrix");
}

Circuit parse_grcs(std::string_view text) {
    Circuit circuit;
    std::optional<CycleChecker> checker;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        const auto tokens = split_tokens(line);
        if (tokens.empty()) {
            continue;
        }
        if (tokens.front().front() == '#') {
            if (!checker) {
                std::string_view body = line.substr(line.find('#') + 1);
                if (!body.empty() && body.front() == ' ') {
                    body.remove_prefix(1);
                }
                while (!body.empty() && body.back() == '\r') {
                    body.remove_suffix(1);
                }
                circuit.header_comments.emplace_back(body);
            }
            continue;
        }
        if (!checker) {
            const auto n = parse_int(tokens.front());
            if (tokens.size() != 1 || !n || *n < 1) {
                throw Error(ErrorCode::MalformedLine,
                            "expected qubit count, got '" + std::string(line) +
                                "'",
                            line_no);
            }
            circuit.qubit_count = *n;
            checker.emplace(*n);
            continue;
        }
        if (tokens.size() < 3 || tokens.size() > 4) {
            throw Error(ErrorCode::MalformedLine,
                        "expected 'cycle gate qubit [qubit]'", line_no);
        }
        const auto cycle = parse_int(tokens[0]);
        if (!cycle) {
            throw Error(ErrorCode::MalformedLine,
                        "bad cycle '" + std::string(tokens[0]) + "'", line_no);
        }
        const auto kind = parse_gate_name(tokens[1]);
        if (!kind) {
            throw Error(ErrorCode::UnknownGate,
                        "'" + std::string(tokens[1]) + "'", line_no);
        }
        Gate g;
        g.kind = *kind;
        g.cycle = *cycle;
        if (static_cast<int>(tokens.size()) - 2 != g.arity()) {
            throw Error(ErrorCode::MalformedLine,
                        std::string(tokens[1]) + " takes " +
                            std::to_string(g.arity()) + " qubit(s)",
                        line_no);
        }
        for (int i = 0; i < g.arity(); ++i) {
            const auto q = parse_int(tokens[static_cast<std::size_t>(i) + 2]);
            if (!q) {
                throw Error(ErrorCode::MalformedLine,
                            "bad qubit '" +
                                std::string(tokens[static_cast<std::size_t>(i) + 2]) +
                                "'",
                            line_no);
            }
            g.qubits[static_cast<std::size_t>(i)] = *q;
        }
        checker->add(g, line_no);
        circuit.gates.push_back(g);
    }
    if (!checker) {
        throw Error(ErrorCode::MalformedLine, "missing qubit count", line_no);
    }
    return circuit;
}

std::string serialize_grcs(const Circuit &circuit) {
    std::string out;
    for (const auto &comment : circuit.header_comments) {
        out += "# ";
        out += comment;
        out += '\n';
    }
    out += std::to_string(circuit.qubit_count);
    out += '\n';
    for (const Gate &g : circuit.gates) {
        out += std::to_string(g.cycle);
        out += ' ';
        out += gate_name(g.kind);
        for (int i = 0; i < g.arity(); ++i) {
            out += ' ';
            out += std::to_string(g.qubits[static_cast<std::size_t>(i)]);
        }
        out += '\n';
    }
    return out;
}

void validate(const Circuit &circuit) {
    if (circuit.qubit_count < 1) {
        throw Error(ErrorCode::InvalidArgument, "circuit has no qubits");
    }
    CycleChecker checker(circuit.qubit_count);
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        checker.add(circuit.gates[i], static_cast<int>(i) + 1);
    }
}

std::vector<std::pair<int, int>> cz_layer(int rows, int cols, int layer) {
    // Slot order matches the public GRCS instances; each slot is a shift or
    // transpose of one brick pattern.
    static constexpr std::array<int, 8> kSlotPattern{0, 3, 2, 1, 4, 7, 6, 5};
    const int pattern = kSlotPattern[static_cast<std::size_t>(((layer % 8) + 8) % 8)];
    const int dir_row = pattern % 2;
    const int dir_col = 1 - dir_row;
    const int shift = (pattern >> 1) % 4;

    std::vector<std::pair<int, int>> pairs;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int r2 = r + dir_row;
            const int c2 = c + dir_col;
            if (r2 >= rows || c2 >= cols) {
                continue;
            }
            if ((r * (2 - dir_row) + c * (2 - dir_col)) % 4 != shift) {
                continue;
            }
            pairs.emplace_back(r * cols + c, r2 * cols + c2);
        }
    }
    return pairs;
}

Circuit generate_supremacy(int rows, int cols, int depth, std::uint64_t seed) {
    if (rows < 1 || cols < 1 || rows * cols < 2) {
        throw Error(ErrorCode::GridTooSmall,
                    std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (depth < 1) {
        throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
    }
    const int n = rows * cols;
    const auto nq = static_cast<std::size_t>(n);
    Circuit circuit;
    circuit.qubit_count = n;
    circuit.header_comments.push_back(
        "generator=supremacy-v1 rng=mt19937_64 rows=" + std::to_string(rows) +
        " cols=" + std::to_string(cols) + " depth=" + std::to_string(depth) +
        " seed=" + std::to_string(seed));

    std::mt19937_64 rng(seed);
    for (int q = 0; q < n; ++q) {
        circuit.gates.push_back({GateKind::H, {q, -1}, 0});
    }
    // depth + 1 entangling cycles and a closing H cycle, as in the public
    // instances of the same name.
    const int cz_cycles = depth + 1;
    enum class Prev { None, H, CZ, T, NonDiagonal };
    std::vector<Prev> prev(nq, Prev::H);
    std::vector<GateKind> last_single(nq, GateKind::H);
    int layer = 0;
    for (int cycle = 1; cycle <= cz_cycles; ++cycle) {
        std::vector<std::pair<int, int>> pairs;
        while (pairs.empty()) {
            pairs = cz_layer(rows, cols, layer++);
        }
        std::vector<Prev> now(nq, Prev::None);
        for (const auto &[a, b] : pairs) {
            circuit.gates.push_back({GateKind::CZ, {a, b}, cycle});
            now[static_cast<std::size_t>(a)] = Prev::CZ;
            now[static_cast<std::size_t>(b)] = Prev::CZ;
        }
        for (int q = 0; q < n; ++q) {
            const auto qi = static_cast<std::size_t>(q);
            if (now[qi] == Prev::CZ) {
                continue;
            }
            GateKind kind;
            if (prev[qi] == Prev::H || prev[qi] == Prev::NonDiagonal) {
                kind = GateKind::T;
                now[qi] = Prev::T;
            } else if (prev[qi] == Prev::CZ) {
                if (last_single[qi] == GateKind::X_1_2) {
                    kind = GateKind::Y_1_2;
                } else if (last_single[qi] == GateKind::Y_1_2) {
                    kind = GateKind::X_1_2;
                } else {
                    kind = (rng() & 1U) ? GateKind::Y_1_2 : GateKind::X_1_2;
                }
                now[qi] = Prev::NonDiagonal;
            } else {
                continue;
            }
            circuit.gates.push_back({kind, {q, -1}, cycle});
            last_single[qi] = kind;
        }
        prev = std::move(now);
    }
    for (int q = 0; q < n; ++q) {
        circuit.gates.push_back({GateKind::H, {q, -1}, cz_cycles + 1});
    }
    return circuit;
}

} // namespace ddapprox
