#include "ddapprox/simulate.hpp"

#include <algorithm>
#include <cstring>
#include <string>
#include <unordered_map>

#include "ddapprox/error.hpp"

namespace ddapprox {

namespace {

Complex snap(Complex w) noexcept {
    return std::abs(w) < kSnapTolerance ? Complex{0.0, 0.0} : w;
}

Edge scale(const Edge &e, Complex factor) noexcept {
    const Complex w = snap(e.weight * factor);
    if (w == Complex{0.0, 0.0}) {
        return Edge::zero();
    }
    return {e.target, w, e.vnum};
}

struct AddKey {
    NodeId a;
    NodeId b;
    Complex ratio;

    bool operator==(const AddKey &o) const noexcept {
        return a == o.a && b == o.b && ratio == o.ratio;
    }
};

struct AddKeyHash {
    std::size_t operator()(const AddKey &k) const noexcept {
        std::uint64_t re = 0;
        std::uint64_t im = 0;
        const double r = k.ratio.real();
        const double i = k.ratio.imag();
        std::memcpy(&re, &r, sizeof re);
        std::memcpy(&im, &i, sizeof im);
        std::uint64_t h = (static_cast<std::uint64_t>(k.a) << 32U) ^ k.b;
        h ^= re + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U);
        h ^= im + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U);
        return static_cast<std::size_t>(h);
    }
};

/// Memoized recursive gate application. One instance per gate.
class GateApplier {
  public:
    explicit GateApplier(DecisionDiagram &dd) : dd_(dd) {}

    Edge single(const Edge &e, int target_level, const GateMatrix &u) {
        level_ = target_level;
        u_ = u;
        return apply(e);
    }

    Edge controlled_z(const Edge &e, int level_a, int level_b) {
        high_level_ = std::max(level_a, level_b);
        low_level_ = std::min(level_a, level_b);
        return cz(e);
    }

  private:
    Edge add(const Edge &a, const Edge &b) {
        if (a.is_zero()) {
            return b;
        }
        if (b.is_zero()) {
            return a;
        }
        if (a.target == b.target) {
            const Complex w = snap(a.weight + b.weight);
            return w == Complex{0.0, 0.0} ? Edge::zero() : Edge{a.target, w, kNoVnum};
        }
        const Complex ratio = b.weight / a.weight;
        const AddKey key{a.target, b.target, ratio};
        if (auto it = add_memo_.find(key); it != add_memo_.end()) {
            return scale(it->second, a.weight);
        }
        const Node &na = dd_.node(a.target);
        const int level = na.level;
        const auto ka = na.children;
        const auto kb = dd_.node(b.target).children;
        const Edge lo = add(ka[0], scale(kb[0], ratio));
        const Edge hi = add(ka[1], scale(kb[1], ratio));
        const Edge r = dd_.make_node_or_zero(level, lo, hi);
        add_memo_.emplace(key, r);
        return scale(r, a.weight);
    }

    Edge apply(const Edge &e) {
        if (e.is_zero()) {
            return e;
        }
        if (auto it = memo_.find(e.target); it != memo_.end()) {
            return scale(it->second, e.weight);
        }
        const Node &n = dd_.node(e.target);
        const int level = n.level;
        const auto kids = n.children;
        Edge r;
        if (level == level_) {
            const Edge lo = add(scale(kids[0], u_[0][0]), scale(kids[1], u_[0][1]));
            const Edge hi = add(scale(kids[0], u_[1][0]), scale(kids[1], u_[1][1]));
            r = dd_.make_node_or_zero(level, lo, hi);
        } else {
            const Edge lo = apply(kids[0]);
            const Edge hi = apply(kids[1]);
            r = dd_.make_node_or_zero(level, lo, hi);
        }
        memo_.emplace(e.target, r);
        return scale(r, e.weight);
    }

    Edge cz(const Edge &e) {
        if (e.is_zero()) {
            return e;
        }
        if (auto it = memo_.find(e.target); it != memo_.end()) {
            return scale(it->second, e.weight);
        }
        const Node &n = dd_.node(e.target);
        const int level = n.level;
        const auto kids = n.children;
        Edge r;
        if (level > high_level_) {
            const Edge lo = cz(kids[0]);
            const Edge hi = cz(kids[1]);
            r = dd_.make_node_or_zero(level, lo, hi);
        } else {
            r = dd_.make_node_or_zero(level, kids[0], flip(kids[1]));
        }
        memo_.emplace(e.target, r);
        return scale(r, e.weight);
    }

    // Z on low_level_ for the sub-diagram below the control's high branch.
    Edge flip(const Edge &e) {
        if (e.is_zero()) {
            return e;
        }
        if (auto it = flip_memo_.find(e.target); it != flip_memo_.end()) {
            return scale(it->second, e.weight);
        }
        const Node &n = dd_.node(e.target);
        const int level = n.level;
        const auto kids = n.children;
        Edge r;
        if (level > low_level_) {
            const Edge lo = flip(kids[0]);
            const Edge hi = flip(kids[1]);
            r = dd_.make_node_or_zero(level, lo, hi);
        } else {
            r = dd_.make_node_or_zero(level, kids[0], scale(kids[1], -1.0));
        }
        flip_memo_.emplace(e.target, r);
        return scale(r, e.weight);
    }

    DecisionDiagram &dd_;
    int level_ = 0;
    int high_level_ = 0;
    int low_level_ = 0;
    GateMatrix u_{};
    std::unordered_map<AddKey, Edge, AddKeyHash> add_memo_;
    std::unordered_map<NodeId, Edge> memo_;
    std::unordered_map<NodeId, Edge> flip_memo_;
};

void check_qubits(const Gate &gate, int qubits) {
    for (int i = 0; i < gate.arity(); ++i) {
        const int q = gate.qubits[static_cast<std::size_t>(i)];
        if (q < 0 || q >= qubits) {
            throw Error(ErrorCode::QubitOutOfRange, "qubit " + std::to_string(q));
        }
    }
    if (gate.kind == GateKind::CZ && gate.qubits[0] == gate.qubits[1]) {
        throw Error(ErrorCode::DuplicateQubitInCycle, "cz on a single qubit");
    }
}

} // namespace

void apply_gate(DecisionDiagram &dd, const Gate &gate) {
    if (dd.approximated()) {
        throw Error(ErrorCode::UnsupportedOnApproximatedDD,
                    "gates apply to exact diagrams only");
    }
    const int n = dd.qubit_count();
    check_qubits(gate, n);
    GateApplier applier(dd);
    if (gate.kind == GateKind::CZ) {
        dd.set_root(applier.controlled_z(dd.root(), qubit_level(n, gate.qubits[0]),
                                         qubit_level(n, gate.qubits[1])));
    } else {
        dd.set_root(applier.single(dd.root(), qubit_level(n, gate.qubits[0]),
                                   gate_matrix(gate.kind)));
    }
}

DecisionDiagram simulate_circuit(const Circuit &circuit) {
    validate(circuit);
    DecisionDiagram dd(circuit.qubit_count);
    std::size_t compacted_size = std::max<std::size_t>(dd.arena_size(), 4096);
    for (const Gate &gate : circuit.gates) {
        apply_gate(dd, gate);
        if (dd.arena_size() > 2 * compacted_size) {
            dd.compact();
            compacted_size = std::max<std::size_t>(dd.arena_size(), 4096);
        }
    }
    dd.compact();
    return dd;
}

std::vector<Complex> dense_simulate(const Circuit &circuit) {
    validate(circuit);
    const int n = circuit.qubit_count;
    if (n > kMaxDenseQubits) {
        throw Error(ErrorCode::TooManyQubits,
                    std::to_string(n) + " > " + std::to_string(kMaxDenseQubits));
    }
    const std::size_t size = std::size_t{1} << n;
    std::vector<Complex> state(size, Complex{0.0, 0.0});
    state[0] = 1.0;
    for (const Gate &g : circuit.gates) {
        const auto bit_of = [n](int q) {
            return std::size_t{1} << static_cast<unsigned>(n - 1 - q);
        };
        if (g.kind == GateKind::CZ) {
            const std::size_t mask = bit_of(g.qubits[0]) | bit_of(g.qubits[1]);
            for (std::size_t i = 0; i < size; ++i) {
                if ((i & mask) == mask) {
                    state[i] = -state[i];
                }
            }
            continue;
        }
        const GateMatrix u = gate_matrix(g.kind);
        const std::size_t b = bit_of(g.qubits[0]);
        for (std::size_t i = 0; i < size; ++i) {
            if (i & b) {
                continue;
            }
            const Complex a0 = state[i];
            const Complex a1 = state[i | b];
            state[i] = u[0][0] * a0 + u[0][1] * a1;
            state[i | b] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
    return state;
}

} // namespace ddapprox
