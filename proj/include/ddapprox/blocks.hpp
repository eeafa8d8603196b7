#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ddapprox/dd.hpp"

namespace ddapprox {

/// Row-major set of block vectors, one row of length `dim` per id.
struct BlockVectors {
    std::size_t dim = 0;
    std::vector<NodeId> ids;
    std::vector<Complex> data;

    [[nodiscard]] std::size_t size() const noexcept { return ids.size(); }
    [[nodiscard]] std::span<const Complex> row(std::size_t i) const noexcept {
        return {data.data() + i * dim, dim};
    }
};

/**
 * Weight products along the 2^N paths from `node` down N levels, including
 * the edges leaving the bottom nodes of the block. Entry p follows the bits
 * of p from most to least significant. Throws LevelTooLow if the node sits
 * below level N-1.
 */
std::vector<Complex> block_vector(const DecisionDiagram &dd, NodeId node,
                                  int block_size);

BlockVectors block_vectors(const DecisionDiagram &dd, std::span<const NodeId> nodes,
                           int block_size);

/// sum_j a_j conj(b_j)
Complex inner(std::span<const Complex> a, std::span<const Complex> b);

struct MatchResult {
    /// Row in the candidate set.
    std::size_t index = 0;
    double score = 0.0;
};

/// Candidate maximizing Re<v, c>; ties go to the smallest candidate id.
/// Throws NoCandidate on an empty set.
MatchResult match_exhaustive(std::span<const Complex> v,
                             const BlockVectors &candidates);

/// As above over a subset of candidate rows, counting comparisons.
MatchResult match_among(std::span<const Complex> v, const BlockVectors &candidates,
                        std::span<const std::uint32_t> rows,
                        std::uint64_t &comparisons);

} // namespace ddapprox
