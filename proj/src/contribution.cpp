#include "ddapprox/contribution.hpp"

#include <algorithm>
#include <cmath>

#include "ddapprox/error.hpp"

namespace ddapprox {

ContributionMap compute_contributions(const DecisionDiagram &dd) {
    ContributionMap c(dd.arena_size(), 0.0);
    if (dd.has_virtual_entries()) {
        for (const PathState &s : path_states(dd)) {
            c[s.node] += s.mass;
        }
        return c;
    }
    const Edge &root = dd.root();
    if (root.is_zero() || root.is_terminal()) {
        return c;
    }
    // Parents always sit above their children, so one pass in level order
    // has every node's mass complete before it is pushed down.
    c[root.target] = std::norm(root.weight);
    for (NodeId id : reachable_nodes(dd)) {
        for (const Edge &e : dd.node(id).children) {
            if (!e.is_zero() && !e.is_terminal()) {
                c[e.target] += c[id] * std::norm(e.weight);
            }
        }
    }
    return c;
}

Split rank_and_split(const ContributionMap &cmap, std::span<const NodeId> nodes,
                     double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "fraction outside [0, 1]");
    }
    std::vector<NodeId> sorted(nodes.begin(), nodes.end());
    std::sort(sorted.begin(), sorted.end(), [&cmap](NodeId a, NodeId b) {
        return cmap[a] != cmap[b] ? cmap[a] < cmap[b] : a < b;
    });
    const auto k = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(sorted.size())));
    Split split;
    split.replaced.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k));
    split.candidates.assign(sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
    return split;
}

} // namespace ddapprox
