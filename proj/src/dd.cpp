#include "ddapprox/dd.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <tuple>

#include "ddapprox/error.hpp"

namespace ddapprox {

namespace {

constexpr double kKeyGrid = 1e9;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) noexcept {
    // splitmix64 finalizer folded into a running hash
    v += 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (v ^ (v >> 31));
}

std::uint64_t quantize(double x) noexcept {
    return static_cast<std::uint64_t>(std::llround(x * kKeyGrid));
}

bool close(Complex a, Complex b) noexcept {
    return std::abs(a.real() - b.real()) <= kShareTolerance &&
           std::abs(a.imag() - b.imag()) <= kShareTolerance;
}

bool same_edge(const Edge &a, const Edge &b) noexcept {
    return a.target == b.target && a.vnum == b.vnum && close(a.weight, b.weight);
}

bool finite(Complex w) noexcept {
    return std::isfinite(w.real()) && std::isfinite(w.imag());
}

Edge build_from_vector(DecisionDiagram &dd, std::span<const Complex> amps,
                       int level) {
    if (level == 0) {
        return dd.make_node_or_zero(0, Edge::terminal(amps[0]),
                                    Edge::terminal(amps[1]));
    }
    const auto half = amps.size() / 2;
    const Edge low = build_from_vector(dd, amps.first(half), level - 1);
    const Edge high = build_from_vector(dd, amps.subspan(half), level - 1);
    return dd.make_node_or_zero(level, low, high);
}

void expand(const DecisionDiagram &dd, NodeId id, const VirtualContext &ctx,
            Complex amplitude, std::size_t base, std::vector<Complex> &out) {
    const int level = dd.node(id).level;
    for (int bit = 0; bit < 2; ++bit) {
        const Step step = descend(dd, id, ctx, bit);
        const Complex amp = amplitude * step.weight;
        if (amp == Complex{0.0, 0.0}) {
            continue;
        }
        const std::size_t index = base | (static_cast<std::size_t>(bit) << level);
        if (level == 0) {
            out[index] = amp;
        } else if (step.target != kTerminal) {
            expand(dd, step.target, step.context, amp, index, out);
        }
        // A terminal target above level 0 encodes an all-zero sub-vector.
    }
}

} // namespace

DecisionDiagram::DecisionDiagram(int qubits) : qubits_(qubits) {
    if (qubits < 1) {
        throw Error(ErrorCode::InvalidArgument, "qubit count must be >= 1");
    }
    Edge e = Edge::terminal({1.0, 0.0});
    for (int level = 0; level < qubits; ++level) {
        e = make_node(level, e, Edge::zero());
    }
    root_ = e;
}

DecisionDiagram DecisionDiagram::from_statevector(
    std::span<const Complex> amplitudes) {
    const auto size = amplitudes.size();
    if (size < 2 || !std::has_single_bit(size)) {
        throw Error(ErrorCode::NotPowerOfTwo,
                    "state vector length " + std::to_string(size));
    }
    const bool all_zero =
        std::all_of(amplitudes.begin(), amplitudes.end(),
                    [](Complex a) { return a == Complex{0.0, 0.0}; });
    if (all_zero) {
        throw Error(ErrorCode::ZeroVector, "state vector has zero norm");
    }
    const int qubits = std::countr_zero(size);
    DecisionDiagram dd(qubits);
    dd.nodes_.clear();
    dd.unique_.clear();
    dd.root_ = build_from_vector(dd, amplitudes, qubits - 1);
    return dd;
}

std::uint64_t DecisionDiagram::share_key(int level, const Edge &low,
                                         const Edge &high) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(level);
    h = mix(h, low.target);
    h = mix(h, high.target);
    h = mix(h, static_cast<std::uint32_t>(low.vnum));
    h = mix(h, static_cast<std::uint32_t>(high.vnum));
    h = mix(h, quantize(low.weight.real()));
    h = mix(h, quantize(low.weight.imag()));
    h = mix(h, quantize(high.weight.real()));
    h = mix(h, quantize(high.weight.imag()));
    return h;
}

Edge DecisionDiagram::make_node(int level, const Edge &low, const Edge &high) {
    if (level < 0 || level >= qubits_) {
        throw Error(ErrorCode::InvalidArgument,
                    "level " + std::to_string(level) + " out of range");
    }
    if (!finite(low.weight) || !finite(high.weight)) {
        throw Error(ErrorCode::InvalidArgument, "non-finite edge weight");
    }
    if (low.is_zero() && high.is_zero()) {
        throw Error(ErrorCode::ZeroNode, "both child weights are zero");
    }
    const double norm = std::sqrt(std::norm(low.weight) + std::norm(high.weight));
    Node n;
    n.level = level;
    n.children[0] = low.is_zero() ? Edge::zero() : low;
    n.children[1] = high.is_zero() ? Edge::zero() : high;
    // The leading nonzero weight is made real positive; its phase moves
    // into the incoming edge together with the norm.
    const Complex lead =
        n.children[0].is_zero() ? n.children[1].weight : n.children[0].weight;
    const Complex scale = norm * (lead / std::abs(lead));
    n.children[0].weight /= scale;
    n.children[1].weight /= scale;
    Complex &led = n.children[0].is_zero() ? n.children[1].weight : n.children[0].weight;
    led = Complex{std::abs(led), 0.0};

    if (!approximated_) {
        const auto key = share_key(level, n.children[0], n.children[1]);
        auto [first, last] = unique_.equal_range(key);
        NodeId found = kTerminal;
        for (auto it = first; it != last; ++it) {
            const Node &cand = nodes_[it->second];
            if (cand.level == level && same_edge(cand.children[0], n.children[0]) &&
                same_edge(cand.children[1], n.children[1])) {
                found = std::min(found, it->second);
            }
        }
        if (found != kTerminal) {
            return {found, scale, kNoVnum};
        }
        unique_.emplace(key, static_cast<NodeId>(nodes_.size()));
    }
    nodes_.push_back(std::move(n));
    return {static_cast<NodeId>(nodes_.size() - 1), scale, kNoVnum};
}

Edge DecisionDiagram::make_node_or_zero(int level, const Edge &low,
                                        const Edge &high) {
    if (low.is_zero() && high.is_zero()) {
        return Edge::zero();
    }
    return make_node(level, low, high);
}

bool DecisionDiagram::has_virtual_entries() const noexcept {
    return std::any_of(nodes_.begin(), nodes_.end(),
                       [](const Node &n) { return !n.virtual_entries.empty(); });
}

void DecisionDiagram::mark_approximated() {
    approximated_ = true;
    unique_.clear();
}

void DecisionDiagram::compact() {
    const auto live = reachable_nodes(*this);
    // Children first so remapped targets exist when a node is re-inserted.
    std::vector<NodeId> remap(nodes_.size(), kTerminal);
    std::vector<Node> fresh;
    fresh.reserve(live.size());
    for (auto it = live.rbegin(); it != live.rend(); ++it) {
        remap[*it] = static_cast<NodeId>(fresh.size());
        fresh.push_back(std::move(nodes_[*it]));
    }
    auto fix = [&remap](NodeId id) { return id == kTerminal ? id : remap[id]; };
    for (Node &n : fresh) {
        for (Edge &e : n.children) {
            e.target = fix(e.target);
        }
        for (VirtualEntry &ve : n.virtual_entries) {
            for (Continuation &c : ve.continuations) {
                c.target = fix(c.target);
            }
        }
    }
    root_.target = fix(root_.target);
    nodes_ = std::move(fresh);
    unique_.clear();
    if (!approximated_) {
        for (NodeId id = 0; id < nodes_.size(); ++id) {
            const Node &n = nodes_[id];
            unique_.emplace(share_key(n.level, n.children[0], n.children[1]), id);
        }
    }
}

VirtualContext enter_edge(const DecisionDiagram &dd, NodeId target,
                          std::int32_t vnum) {
    if (vnum == kNoVnum) {
        return {};
    }
    if (target == kTerminal || vnum < 0 ||
        static_cast<std::size_t>(vnum) >=
            dd.node(target).virtual_entries.size()) {
        throw Error(ErrorCode::CorruptVirtualEdge,
                    "virtual edge number " + std::to_string(vnum) +
                        " has no matching entry");
    }
    return {target, vnum, 0, 0};
}

Step descend(const DecisionDiagram &dd, NodeId node, const VirtualContext &ctx,
             int bit) {
    const Edge &e = dd.node(node).children[static_cast<std::size_t>(bit)];
    if (e.is_zero()) {
        return {};
    }
    if (!ctx.active()) {
        return {e.target, enter_edge(dd, e.target, e.vnum), e.weight};
    }
    const VirtualEntry &entry =
        dd.node(ctx.owner).virtual_entries[static_cast<std::size_t>(ctx.vnum)];
    const std::uint32_t path = (ctx.path << 1U) | static_cast<std::uint32_t>(bit);
    const int depth = ctx.depth + 1;
    if (depth < entry.block_size) {
        return {e.target, VirtualContext{ctx.owner, ctx.vnum, path, depth},
                e.weight};
    }
    if (path >= entry.continuations.size()) {
        throw Error(ErrorCode::CorruptVirtualEdge, "continuation out of range");
    }
    const Continuation &c = entry.continuations[path];
    if (c.target == kTerminal) {
        return {kTerminal, {}, Complex{0.0, 0.0}};
    }
    return {c.target, enter_edge(dd, c.target, c.nested_vnum), e.weight};
}

std::vector<Complex> to_statevector(const DecisionDiagram &dd) {
    const std::size_t size = std::size_t{1} << dd.qubit_count();
    std::vector<Complex> out(size, Complex{0.0, 0.0});
    const Edge &root = dd.root();
    if (root.is_zero() || root.is_terminal()) {
        return out;
    }
    expand(dd, root.target, enter_edge(dd, root.target, root.vnum), root.weight,
           0, out);
    return out;
}

double fidelity(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    Complex overlap{0.0, 0.0};
    for (std::size_t j = 0; j < a.size(); ++j) {
        overlap += std::conj(a[j]) * b[j];
    }
    return std::norm(overlap);
}

namespace {

struct StateKey {
    NodeId node;
    VirtualContext context;

    bool operator==(const StateKey &) const noexcept = default;
};

struct StateKeyHash {
    std::size_t operator()(const StateKey &k) const noexcept {
        std::uint64_t h = k.node;
        h = mix(h, k.context.owner);
        h = mix(h, static_cast<std::uint32_t>(k.context.vnum));
        h = mix(h, k.context.path);
        h = mix(h, static_cast<std::uint64_t>(k.context.depth));
        return static_cast<std::size_t>(h);
    }
};

bool state_less(const PathState &a, const PathState &b) noexcept {
    const auto key = [](const PathState &s) {
        return std::tuple(s.node, s.context.owner, s.context.vnum,
                          s.context.path, s.context.depth);
    };
    return key(a) < key(b);
}

std::vector<NodeId> reachable_exact(const DecisionDiagram &dd) {
    std::vector<NodeId> out;
    std::vector<char> seen(dd.arena_size(), 0);
    std::vector<NodeId> stack{dd.root().target};
    seen[dd.root().target] = 1;
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        out.push_back(id);
        for (const Edge &e : dd.node(id).children) {
            if (!e.is_zero() && !e.is_terminal() && !seen[e.target]) {
                seen[e.target] = 1;
                stack.push_back(e.target);
            }
        }
    }
    return out;
}

} // namespace

std::vector<PathState> path_states(const DecisionDiagram &dd) {
    std::vector<PathState> out;
    const Edge &root = dd.root();
    if (root.is_zero() || root.is_terminal()) {
        return out;
    }
    using Frontier = std::unordered_map<StateKey, double, StateKeyHash>;
    Frontier current;
    current.emplace(StateKey{root.target, enter_edge(dd, root.target, root.vnum)},
                    std::norm(root.weight));
    for (int level = dd.node(root.target).level; level >= 0 && !current.empty();
         --level) {
        std::vector<PathState> layer;
        layer.reserve(current.size());
        for (const auto &[key, mass] : current) {
            layer.push_back({key.node, key.context, mass});
        }
        std::sort(layer.begin(), layer.end(), state_less);
        Frontier next;
        for (const PathState &s : layer) {
            if (level == 0) {
                break;
            }
            for (int bit = 0; bit < 2; ++bit) {
                const Step step = descend(dd, s.node, s.context, bit);
                if (step.target == kTerminal || step.weight == Complex{0.0, 0.0}) {
                    continue;
                }
                next[StateKey{step.target, step.context}] +=
                    s.mass * std::norm(step.weight);
            }
        }
        out.insert(out.end(), layer.begin(), layer.end());
        current = std::move(next);
    }
    return out;
}

std::vector<NodeId> reachable_nodes(const DecisionDiagram &dd) {
    std::vector<NodeId> out;
    if (dd.root().is_terminal()) {
        return out;
    }
    if (dd.has_virtual_entries()) {
        for (const PathState &s : path_states(dd)) {
            out.push_back(s.node);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    } else {
        out = reachable_exact(dd);
    }
    std::sort(out.begin(), out.end(), [&dd](NodeId a, NodeId b) {
        const int la = dd.node(a).level;
        const int lb = dd.node(b).level;
        return la != lb ? la > lb : a < b;
    });
    return out;
}

NodeCounts count_nodes(const DecisionDiagram &dd) {
    NodeCounts counts;
    counts.per_level.assign(static_cast<std::size_t>(dd.qubit_count()), 0);
    for (NodeId id : reachable_nodes(dd)) {
        ++counts.per_level[static_cast<std::size_t>(dd.node(id).level)];
        ++counts.total;
    }
    return counts;
}

} // namespace ddapprox
