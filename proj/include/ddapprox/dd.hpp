#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

namespace ddapprox {

using Complex = std::complex<double>;
using NodeId = std::uint32_t;

inline constexpr NodeId kTerminal = std::numeric_limits<NodeId>::max();
inline constexpr std::int32_t kNoVnum = -1;

/// Tolerance under which two weights are considered equal for node sharing.
inline constexpr double kShareTolerance = 1e-12;

struct Edge {
    NodeId target = kTerminal;
    Complex weight{0.0, 0.0};
    /// Virtual-edge number into `target`'s virtual entries, or kNoVnum.
    std::int32_t vnum = kNoVnum;

    [[nodiscard]] bool is_terminal() const noexcept {
        return target == kTerminal;
    }
    [[nodiscard]] bool is_zero() const noexcept {
        return weight == Complex{0.0, 0.0};
    }
    [[nodiscard]] bool has_vnum() const noexcept { return vnum != kNoVnum; }

    static Edge zero() noexcept { return {}; }
    static Edge terminal(Complex w) noexcept { return {kTerminal, w, kNoVnum}; }
};

struct Continuation {
    NodeId target = kTerminal;
    std::int32_t nested_vnum = kNoVnum;

    friend bool operator==(const Continuation &, const Continuation &) = default;
};

/// Continuation record left on a replacement node: the replaced node's
/// children below the block, in block-path order (first level = MSB).
struct VirtualEntry {
    int block_size = 1;
    /// Index of the replacement block that created the entry (>= 1).
    int block = 1;
    std::vector<Continuation> continuations;
};

struct Node {
    int level = 0;
    std::array<Edge, 2> children{};
    /// Indexed by virtual-edge number.
    std::vector<VirtualEntry> virtual_entries;

    [[nodiscard]] const Edge &low() const noexcept { return children[0]; }
    [[nodiscard]] const Edge &high() const noexcept { return children[1]; }
};

struct NodeCounts {
    /// per_level[l] = reachable nodes at level l.
    std::vector<std::size_t> per_level;
    std::size_t total = 0;
};

/**
 * Decision diagram over n qubits. Level n-1 is the top (qubit 0), level 0
 * sits directly above the terminal. Every node stores a weight pair of unit
 * Euclidean norm whose first nonzero entry is real positive; norm and phase
 * are pushed into the incoming edge.
 *
 * Nodes live in one arena addressed by NodeId. Exact construction shares
 * nodes through a unique table; approximation mutates edges in place after
 * which the diagram is flagged as approximated and no longer hash-consed.
 */
class DecisionDiagram {
  public:
    /// |0...0> on `qubits` qubits.
    explicit DecisionDiagram(int qubits);

    static DecisionDiagram from_statevector(std::span<const Complex> amplitudes);

    [[nodiscard]] int qubit_count() const noexcept { return qubits_; }
    [[nodiscard]] const Edge &root() const noexcept { return root_; }
    void set_root(const Edge &root) { root_ = root; }

    /// Normalizes (low.weight, high.weight) and returns an edge carrying the
    /// factor taken out, |factor| being the pair's norm. Throws ZeroNode when
    /// both weights are zero.
    Edge make_node(int level, const Edge &low, const Edge &high);

    /// As make_node, but returns a zero edge for an all-zero pair.
    Edge make_node_or_zero(int level, const Edge &low, const Edge &high);

    [[nodiscard]] const Node &node(NodeId id) const { return nodes_.at(id); }
    Node &mutable_node(NodeId id) { return nodes_.at(id); }
    [[nodiscard]] std::size_t arena_size() const noexcept {
        return nodes_.size();
    }

    [[nodiscard]] bool approximated() const noexcept { return approximated_; }
    /// True if any node in the arena carries a virtual entry.
    [[nodiscard]] bool has_virtual_entries() const noexcept;
    /// Drops the unique table; called before edges are mutated in place.
    void mark_approximated();

    /// Rebuilds the arena with only the reachable nodes. Invalidates NodeIds.
    void compact();

  private:
    [[nodiscard]] std::uint64_t share_key(int level, const Edge &low,
                                          const Edge &high) const noexcept;

    int qubits_;
    Edge root_;
    std::vector<Node> nodes_;
    std::unordered_multimap<std::uint64_t, NodeId> unique_;
    bool approximated_ = false;
};

/// Traversal state while following a virtual edge: the replacement node
/// that owns the entry, the entry number and the block-path bits taken so far.
struct VirtualContext {
    NodeId owner = kTerminal;
    std::int32_t vnum = kNoVnum;
    std::uint32_t path = 0;
    int depth = 0;

    [[nodiscard]] bool active() const noexcept { return vnum != kNoVnum; }
    friend bool operator==(const VirtualContext &,
                           const VirtualContext &) = default;
};

struct Step {
    NodeId target = kTerminal;
    VirtualContext context;
    Complex weight{0.0, 0.0};
};

/// Context for descending into `target` through an edge numbered `vnum`.
VirtualContext enter_edge(const DecisionDiagram &dd, NodeId target,
                          std::int32_t vnum);

/// Follow child `bit` of `node` under `ctx`. Inside a virtual evaluation the
/// block weights are taken from `node`, and on leaving the block bottom the
/// owner's continuation for the accumulated path replaces the real child.
Step descend(const DecisionDiagram &dd, NodeId node, const VirtualContext &ctx,
             int bit);

/// One (node, context) pair reached from the root, with the squared
/// magnitude of all path weights above it summed over the paths reaching it.
struct PathState {
    NodeId node = kTerminal;
    VirtualContext context;
    double mass = 0.0;
};

/// All reachable (node, context) pairs, by descending level, then node id.
/// Paths through zero edges or empty continuations are dropped.
std::vector<PathState> path_states(const DecisionDiagram &dd);

std::vector<Complex> to_statevector(const DecisionDiagram &dd);

/// |sum_j a_j^* b_j|^2, no renormalization.
double fidelity(std::span<const Complex> a, std::span<const Complex> b);

/// Nodes reachable from the root, following child edges and the
/// continuations of virtual entries that some path actually enters.
/// Ordered by descending level then ascending id.
std::vector<NodeId> reachable_nodes(const DecisionDiagram &dd);

NodeCounts count_nodes(const DecisionDiagram &dd);

} // namespace ddapprox
