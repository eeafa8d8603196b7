#include "ddapprox/approx.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "ddapprox/blocks.hpp"
#include "ddapprox/error.hpp"
#include "ddapprox/lsh.hpp"

namespace ddapprox {

namespace {

std::vector<std::vector<NodeId>> nodes_by_level(const DecisionDiagram &dd) {
    std::vector<std::vector<NodeId>> by_level(
        static_cast<std::size_t>(dd.qubit_count()));
    for (NodeId id : reachable_nodes(dd)) {
        by_level[static_cast<std::size_t>(dd.node(id).level)].push_back(id);
    }
    return by_level;
}

std::uint64_t block_seed(std::uint64_t seed, int block) noexcept {
    return seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(block);
}

} // namespace

std::string_view matcher_name(Matcher m) {
    switch (m) {
    case Matcher::Exhaustive:
        return "exhaustive";
    case Matcher::Lsh:
        return "lsh";
    case Matcher::Removal:
        return "removal";
    }
    return "?";
}

Matcher parse_matcher(std::string_view name) {
    for (Matcher m : {Matcher::Exhaustive, Matcher::Lsh, Matcher::Removal}) {
        if (name == matcher_name(m)) {
            return m;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown matcher '" + std::string(name) + "'");
}

void validate(const StrategySpec &spec, int qubits) {
    if (spec.block_size < 1 || spec.blocks < 1 ||
        spec.block_size * spec.blocks > qubits) {
        throw Error(ErrorCode::InvalidArgument,
                    "strategy " + std::to_string(spec.block_size) + "x" +
                        std::to_string(spec.blocks) + " does not fit " +
                        std::to_string(qubits) + " qubits");
    }
    if (!(spec.fraction >= 0.0 && spec.fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "fraction outside [0, 1]");
    }
}

double entry_units(int block_size, int block) {
    const double paths = std::ldexp(1.0, block_size);
    return block <= 1 ? paths * 2.0 + 2.0 : paths * 4.0 + 2.0;
}

MemoryReport tally_memory(const MemoryTally &tally) {
    MemoryReport r;
    r.units_before = tally.original_nodes * kNodeUnits;
    r.units_after = tally.nodes * (tally.plain_nodes ? kNodeUnits : kWideNodeUnits);
    for (std::size_t b = 1; b < tally.entries.size(); ++b) {
        r.units_after += tally.entries[b] * entry_units(tally.block_size, static_cast<int>(b));
    }
    r.ratio = r.units_before > 0.0 ? r.units_after / r.units_before : 0.0;
    return r;
}

MemoryReport memory_report(const DecisionDiagram &dd, const StrategySpec &spec,
                           std::size_t original_nodes) {
    MemoryTally tally;
    tally.original_nodes = static_cast<double>(original_nodes);
    tally.plain_nodes = spec.plain_nodes();
    tally.block_size = spec.block_size;
    tally.entries.assign(static_cast<std::size_t>(spec.blocks), 0.0);
    if (!dd.has_virtual_entries()) {
        tally.nodes = static_cast<double>(reachable_nodes(dd).size());
        return tally_memory(tally);
    }
    std::set<NodeId> nodes;
    std::set<std::pair<NodeId, std::int32_t>> entered;
    for (const PathState &s : path_states(dd)) {
        nodes.insert(s.node);
        if (s.context.active() && s.context.depth == 0 && s.context.owner == s.node) {
            entered.emplace(s.node, s.context.vnum);
        }
    }
    tally.nodes = static_cast<double>(nodes.size());
    for (const auto &[owner, vnum] : entered) {
        const int block =
            dd.node(owner).virtual_entries[static_cast<std::size_t>(vnum)].block;
        if (static_cast<std::size_t>(block) >= tally.entries.size()) {
            tally.entries.resize(static_cast<std::size_t>(block) + 1, 0.0);
        }
        tally.entries[static_cast<std::size_t>(block)] += 1.0;
    }
    return tally_memory(tally);
}

BlockReplacer::BlockReplacer(DecisionDiagram &dd, int block, int block_size)
    : dd_(dd), block_(block), block_size_(block_size),
      top_level_((block + 1) * block_size - 1) {
    if (block < 0 || block_size < 1 || top_level_ >= dd.qubit_count()) {
        throw Error(ErrorCode::InvalidArgument, "block outside the diagram");
    }
}

void BlockReplacer::schedule(NodeId replaced, NodeId replacement) {
    if (dd_.node(replaced).level != top_level_ ||
        dd_.node(replacement).level != top_level_) {
        throw Error(ErrorCode::InvalidArgument,
                    "nodes must sit on level " + std::to_string(top_level_));
    }
    if (replaced == replacement || pairs_.count(replacement) != 0 ||
        replacements_.count(replaced) != 0 || pairs_.count(replaced) != 0) {
        throw Error(ErrorCode::IllegalPair,
                    std::to_string(replaced) + " -> " + std::to_string(replacement));
    }
    pairs_.emplace(replaced, replacement);
    ++replacements_[replacement];
}

std::vector<Continuation> BlockReplacer::boundary(NodeId node) const {
    const std::size_t paths = std::size_t{1} << block_size_;
    std::vector<Continuation> out(paths);
    for (std::size_t p = 0; p < paths; ++p) {
        NodeId at = node;
        for (int d = block_size_ - 1; d >= 0; --d) {
            const Edge &e = dd_.node(at).children[(p >> static_cast<unsigned>(d)) & 1U];
            if (e.is_zero()) {
                break;
            }
            if (d == 0) {
                out[p] = {e.target, e.vnum};
            }
            at = e.target;
        }
    }
    return out;
}

void BlockReplacer::commit() {
    dd_.mark_approximated();
    std::vector<std::pair<NodeId, NodeId>> ordered(pairs_.begin(), pairs_.end());
    std::sort(ordered.begin(), ordered.end());
    std::unordered_map<NodeId, Edge> redirect;
    for (const auto &[replaced, replacement] : ordered) {
        std::int32_t vnum = kNoVnum;
        if (block_ > 0) {
            VirtualEntry entry{block_size_, block_, boundary(replaced)};
            auto &entries = dd_.mutable_node(replacement).virtual_entries;
            vnum = static_cast<std::int32_t>(entries.size());
            entries.push_back(std::move(entry));
        }
        redirect.emplace(replaced, Edge{replacement, {}, vnum});
    }
    auto retarget = [&redirect](Edge &e) {
        if (e.is_zero() || e.is_terminal()) {
            return;
        }
        if (auto it = redirect.find(e.target); it != redirect.end()) {
            e.target = it->second.target;
            e.vnum = it->second.vnum;
        }
    };
    Edge root = dd_.root();
    retarget(root);
    dd_.set_root(root);
    if (top_level_ + 1 < dd_.qubit_count()) {
        for (NodeId id = 0; id < dd_.arena_size(); ++id) {
            Node &n = dd_.mutable_node(id);
            if (n.level == top_level_ + 1) {
                retarget(n.children[0]);
                retarget(n.children[1]);
            }
        }
    }
    pairs_.clear();
    replacements_.clear();
}

ReplacementRecord apply_replacement(DecisionDiagram &dd, NodeId replaced,
                                    NodeId replacement, int block, int block_size,
                                    const ContributionMap &cmap) {
    const auto v = block_vector(dd, replaced, block_size);
    const auto w = block_vector(dd, replacement, block_size);
    BlockReplacer replacer(dd, block, block_size);
    replacer.schedule(replaced, replacement);
    const double c = replaced < cmap.size() ? cmap[replaced] : 0.0;
    const Complex loss = c * (Complex{1.0, 0.0} - inner(v, w));
    replacer.commit();
    return {replaced, replacement, block, loss};
}

ApproxResult run_strategy(const DecisionDiagram &exact, const StrategySpec &spec,
                          const ContributionMap &cmap) {
    validate(spec, exact.qubit_count());
    if (spec.matcher == Matcher::Removal) {
        throw Error(ErrorCode::InvalidArgument, "removal is not a replacement matcher");
    }
    const auto by_level = nodes_by_level(exact);
    std::size_t original = 0;
    for (const auto &level : by_level) {
        original += level.size();
    }

    ApproxResult result;
    result.dd = exact;
    result.dd.mark_approximated();
    Complex loss_sum{0.0, 0.0};
    for (int b = 0; b < spec.blocks; ++b) {
        const int top = (b + 1) * spec.block_size - 1;
        const Split split =
            rank_and_split(cmap, by_level[static_cast<std::size_t>(top)], spec.fraction);
        if (split.replaced.empty()) {
            continue;
        }
        if (split.candidates.empty()) {
            result.unmatched.insert(result.unmatched.end(), split.replaced.begin(),
                                    split.replaced.end());
            continue;
        }
        const BlockVectors replaced = block_vectors(result.dd, split.replaced, spec.block_size);
        const BlockVectors candidates =
            block_vectors(result.dd, split.candidates, spec.block_size);

        const auto start = std::chrono::steady_clock::now();
        std::vector<std::int64_t> best(replaced.size(), -1);
        if (spec.matcher == Matcher::Exhaustive) {
            for (std::size_t i = 0; i < replaced.size(); ++i) {
                best[i] = static_cast<std::int64_t>(
                    match_exhaustive(replaced.row(i), candidates).index);
            }
            result.comparisons +=
                static_cast<std::uint64_t>(replaced.size()) * candidates.size();
        } else {
            LshMatch m = lsh_match(replaced, candidates, block_seed(spec.seed, b));
            best = std::move(m.best);
            result.comparisons += m.comparisons;
        }
        result.match_ms += std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();

        BlockReplacer replacer(result.dd, b, spec.block_size);
        for (std::size_t i = 0; i < replaced.size(); ++i) {
            const NodeId id = replaced.ids[i];
            if (best[i] < 0) {
                result.unmatched.push_back(id);
                continue;
            }
            const auto j = static_cast<std::size_t>(best[i]);
            replacer.schedule(id, candidates.ids[j]);
            const Complex loss =
                cmap[id] * (Complex{1.0, 0.0} - inner(replaced.row(i), candidates.row(j)));
            loss_sum += loss;
            result.replacements.push_back({id, candidates.ids[j], b, loss});
        }
        replacer.commit();
    }
    result.predicted_fidelity = std::norm(Complex{1.0, 0.0} - loss_sum);
    result.memory = memory_report(result.dd, spec, original);
    return result;
}

ApproxResult remove_nodes_baseline(const DecisionDiagram &exact, double budget) {
    if (!(budget >= 0.0 && budget < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "budget outside [0, 1)");
    }
    if (exact.has_virtual_entries()) {
        throw Error(ErrorCode::UnsupportedOnApproximatedDD,
                    "removal runs on exact diagrams");
    }
    const auto by_level = nodes_by_level(exact);
    std::size_t original = 0;
    std::vector<std::vector<std::pair<NodeId, int>>> parents(exact.arena_size());
    for (const auto &level : by_level) {
        original += level.size();
        for (NodeId id : level) {
            for (int bit = 0; bit < 2; ++bit) {
                const Edge &e = exact.node(id).children[static_cast<std::size_t>(bit)];
                if (!e.is_zero() && !e.is_terminal()) {
                    parents[e.target].emplace_back(id, bit);
                }
            }
        }
    }

    ApproxResult result;
    result.dd = exact;
    result.dd.mark_approximated();
    DecisionDiagram &dd = result.dd;
    std::vector<double> c(dd.arena_size(), 0.0);
    std::vector<char> dead(dd.arena_size(), 0);
    if (!dd.root().is_terminal()) {
        c[dd.root().target] = std::norm(dd.root().weight);
    }

    // Zero every live edge into `id`; parents left without children go too.
    auto drop = [&](NodeId id, auto &self) -> void {
        dead[id] = 1;
        for (const auto &[p, bit] : parents[id]) {
            if (dead[p]) {
                continue;
            }
            Node &parent = dd.mutable_node(p);
            parent.children[static_cast<std::size_t>(bit)] = Edge::zero();
            if (parent.children[0].is_zero() && parent.children[1].is_zero()) {
                self(p, self);
            }
        }
        if (dd.root().target == id) {
            dd.set_root(Edge::zero());
        }
    };

    double removed = 0.0;
    for (int level = dd.qubit_count() - 1; level >= 0; --level) {
        std::vector<NodeId> nodes;
        for (NodeId id : by_level[static_cast<std::size_t>(level)]) {
            if (c[id] > 0.0) {
                nodes.push_back(id);
            }
        }
        std::sort(nodes.begin(), nodes.end(), [&c](NodeId a, NodeId b) {
            return c[a] != c[b] ? c[a] < c[b] : a < b;
        });
        double acc = 0.0;
        for (NodeId id : nodes) {
            if (acc + c[id] > budget) {
                break;
            }
            acc += c[id];
            result.replacements.push_back({id, kTerminal, 0, Complex{c[id], 0.0}});
            drop(id, drop);
        }
        removed += acc;
        for (NodeId id : nodes) {
            if (dead[id]) {
                continue;
            }
            for (const Edge &e : dd.node(id).children) {
                if (!e.is_zero() && !e.is_terminal()) {
                    c[e.target] += c[id] * std::norm(e.weight);
                }
            }
        }
    }
    result.predicted_fidelity = std::norm(Complex{1.0 - removed, 0.0});
    StrategySpec plain;
    plain.matcher = Matcher::Removal;
    result.memory = memory_report(dd, plain, original);
    return result;
}

} // namespace ddapprox
