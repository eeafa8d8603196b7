#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ddapprox/blocks.hpp"

namespace ddapprox {

/// Hyperplanes per batch.
inline constexpr int kLshN = 2;
/// Refinement rounds after which an oversized bucket is left as is.
inline constexpr int kMaxRefineDepth = 32;

/// (re0, im0, re1, im1, ...). Dot products of realified vectors equal the
/// real part of the complex inner product.
std::vector<double> realify(std::span<const Complex> v);

/// Batch `index` of the family seeded by `seed`: kLshN orthonormal vectors
/// of length d drawn from a Gaussian and Gram-Schmidt orthogonalized.
/// Each batch depends on (seed, index) only.
std::vector<std::vector<double>> make_batch(std::size_t d, std::uint64_t seed,
                                            std::uint64_t index);

struct HashFamily {
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    /// batches[i][j] is hyperplane j of batch i.
    std::vector<std::vector<std::vector<double>>> batches;

    [[nodiscard]] std::size_t bits() const noexcept {
        return batches.size() * static_cast<std::size_t>(kLshN);
    }
};

/// Throws DimensionMismatch if d < kLshN, InvalidArgument if lsh_l < 1.
HashFamily build_family(std::size_t d, int lsh_l, std::uint64_t seed);

/// Bit i is '1' iff the projection on hyperplane i is >= 0.
std::string hash_code(const HashFamily &family, std::span<const double> v);

struct Bucket {
    std::string code;
    /// Row indices into the bucketized set, ascending.
    std::vector<std::uint32_t> members;
};

/// Initial batch count for a set of n vectors: max(1, round(log2(n) / 2)).
int initial_batches(std::size_t n);

/**
 * Leaf buckets of the hierarchical hash over `rows` vectors of length `dim`
 * stored row-major in `data`. A bucket with more than ceil(sqrt(rows))
 * members is re-hashed with the next batch, appending its bits to the code,
 * unless all members are identical or kMaxRefineDepth is reached.
 * Buckets are returned in code order.
 */
std::vector<Bucket> hierarchical_bucketize(std::span<const double> data,
                                           std::size_t dim, std::uint64_t seed);

struct LshMatch {
    /// Candidate row per replaced row, or -1 when its bucket had no candidate.
    std::vector<std::int64_t> best;
    std::uint64_t comparisons = 0;
    std::size_t buckets = 0;
};

/// Buckets replaced and candidate vectors together and matches every
/// replaced vector to the best candidate inside its own leaf bucket.
LshMatch lsh_match(const BlockVectors &replaced, const BlockVectors &candidates,
                   std::uint64_t seed);

} // namespace ddapprox
