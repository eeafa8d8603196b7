#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ddapprox/contribution.hpp"
#include "ddapprox/dd.hpp"

namespace ddapprox {

enum class Matcher { Exhaustive, Lsh, Removal };

std::string_view matcher_name(Matcher m);
/// "exhaustive", "lsh" or "removal"; throws InvalidArgument otherwise.
Matcher parse_matcher(std::string_view name);

/// N x X: X blocks of N levels each, from the bottom of the diagram up.
struct StrategySpec {
    int block_size = 1;
    int blocks = 1;
    double fraction = 0.0;
    Matcher matcher = Matcher::Exhaustive;
    std::uint64_t seed = 0;

    /// Only 1x1 keeps the plain node layout; every other strategy pays
    /// for the virtual-edge field on each node.
    [[nodiscard]] bool plain_nodes() const noexcept {
        return block_size == 1 && blocks == 1;
    }
};

/// Throws InvalidArgument unless 1 <= N, 1 <= X, N*X <= qubits.
void validate(const StrategySpec &spec, int qubits);

inline constexpr double kNodeUnits = 18.0;
inline constexpr double kWideNodeUnits = 20.0;

/// Cost of one virtual entry created in `block` (>= 1).
double entry_units(int block_size, int block);

struct MemoryReport {
    double units_before = 0.0;
    double units_after = 0.0;
    double ratio = 1.0;
};

/// Counts fed to the cost model; fractional counts are allowed so the model
/// can be evaluated on idealized distributions.
struct MemoryTally {
    double original_nodes = 0.0;
    double nodes = 0.0;
    bool plain_nodes = true;
    int block_size = 1;
    /// entries[b] = live virtual entries created by block b.
    std::vector<double> entries;
};

MemoryReport tally_memory(const MemoryTally &tally);

/// Live nodes and entered virtual entries of `dd`, priced against
/// `original_nodes` plain nodes.
MemoryReport memory_report(const DecisionDiagram &dd, const StrategySpec &spec,
                           std::size_t original_nodes);

struct ReplacementRecord {
    NodeId replaced = kTerminal;
    /// kTerminal for a removal.
    NodeId replacement = kTerminal;
    int block = 0;
    Complex loss{0.0, 0.0};
};

struct ApproxResult {
    DecisionDiagram dd{1};
    double predicted_fidelity = 1.0;
    std::optional<double> measured_fidelity;
    MemoryReport memory;
    std::vector<ReplacementRecord> replacements;
    /// Replaced nodes that found no candidate and were left in place.
    std::vector<NodeId> unmatched;
    std::uint64_t comparisons = 0;
    double match_ms = 0.0;
};

/**
 * Collects the replacements of one block and applies them together.
 * Every incoming edge of a replaced node, the root included, is pointed at
 * its replacement. Above the bottom block the replacement also gets a
 * virtual entry holding the replaced node's children below the block, and
 * the redirected edges carry its number.
 */
class BlockReplacer {
  public:
    BlockReplacer(DecisionDiagram &dd, int block, int block_size);

    /// Throws IllegalPair if either node already plays the other role in
    /// this block, InvalidArgument if a node is not at the block top.
    void schedule(NodeId replaced, NodeId replacement);
    void commit();

  private:
    [[nodiscard]] std::vector<Continuation> boundary(NodeId node) const;

    DecisionDiagram &dd_;
    int block_;
    int block_size_;
    int top_level_;
    std::unordered_map<NodeId, NodeId> pairs_;
    std::unordered_map<NodeId, int> replacements_;
};

/// Single replacement; returns its loss term c * (1 - <v, v'>).
ReplacementRecord apply_replacement(DecisionDiagram &dd, NodeId replaced,
                                    NodeId replacement, int block, int block_size,
                                    const ContributionMap &cmap);

/// Runs an N x X strategy on a copy of `exact`. `cmap` must come from the
/// same diagram.
ApproxResult run_strategy(const DecisionDiagram &exact, const StrategySpec &spec,
                          const ContributionMap &cmap);

/**
 * Prior-work baseline: level by level from the top, drop the lowest
 * contribution nodes while their summed contribution stays within
 * `budget`. Parents of dropped nodes get zero edges; a parent left with two
 * zero edges is dropped too.
 */
ApproxResult remove_nodes_baseline(const DecisionDiagram &exact, double budget);

} // namespace ddapprox
