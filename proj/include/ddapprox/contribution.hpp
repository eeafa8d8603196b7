#pragma once

#include <span>
#include <vector>

#include "ddapprox/dd.hpp"

namespace ddapprox {

/// Contribution per node, indexed by NodeId. Unreachable nodes hold 0.
using ContributionMap = std::vector<double>;

/**
 * c(node) = sum over root-to-node paths of |product of the weights above
 * the node|^2. Virtual edges are followed, so a replacement node also
 * collects the mass of the paths it now serves.
 */
ContributionMap compute_contributions(const DecisionDiagram &dd);

struct Split {
    /// Ascending contribution, ties by id.
    std::vector<NodeId> replaced;
    std::vector<NodeId> candidates;
};

/// The floor(f * |nodes|) lowest-contribution nodes go to `replaced`.
Split rank_and_split(const ContributionMap &cmap, std::span<const NodeId> nodes,
                     double fraction);

} // namespace ddapprox
