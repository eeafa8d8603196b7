#include "ddapprox/lsh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "ddapprox/error.hpp"

namespace ddapprox {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

void normalize(std::vector<double> &v) {
    const double n = std::sqrt(dot(v, v));
    for (double &x : v) {
        x /= n;
    }
}

std::vector<double> gaussian(std::size_t d, std::mt19937_64 &rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(d);
    do {
        for (double &x : v) {
            x = dist(rng);
        }
    } while (dot(v, v) == 0.0);
    return v;
}

char bit(std::span<const double> plane, std::span<const double> v) noexcept {
    return dot(plane, v) >= 0.0 ? '1' : '0';
}

std::span<const double> row(std::span<const double> data, std::size_t dim,
                            std::uint32_t r) noexcept {
    return data.subspan(static_cast<std::size_t>(r) * dim, dim);
}

bool all_identical(std::span<const double> data, std::size_t dim,
                   const std::vector<std::uint32_t> &members) {
    const auto first = row(data, dim, members.front());
    for (std::size_t m = 1; m < members.size(); ++m) {
        const auto other = row(data, dim, members[m]);
        for (std::size_t j = 0; j < dim; ++j) {
            if (std::abs(first[j] - other[j]) > 1e-12) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

std::vector<double> realify(std::span<const Complex> v) {
    std::vector<double> out;
    out.reserve(2 * v.size());
    for (const Complex &c : v) {
        out.push_back(c.real());
        out.push_back(c.imag());
    }
    return out;
}

std::vector<std::vector<double>> make_batch(std::size_t d, std::uint64_t seed,
                                            std::uint64_t index) {
    if (d < static_cast<std::size_t>(kLshN)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "hash dimension " + std::to_string(d) + " below batch size");
    }
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index)));
    std::vector<std::vector<double>> batch;
    while (batch.size() < static_cast<std::size_t>(kLshN)) {
        auto g = gaussian(d, rng);
        normalize(g);
        bool collinear = false;
        for (const auto &h : batch) {
            if (std::abs(dot(g, h)) > 1.0 - 1e-9) {
                collinear = true;
                break;
            }
        }
        if (collinear) {
            continue;
        }
        for (const auto &h : batch) {
            const double p = dot(g, h);
            for (std::size_t i = 0; i < d; ++i) {
                g[i] -= p * h[i];
            }
        }
        normalize(g);
        batch.push_back(std::move(g));
    }
    return batch;
}

HashFamily build_family(std::size_t d, int lsh_l, std::uint64_t seed) {
    if (lsh_l < 1) {
        throw Error(ErrorCode::InvalidArgument, "lsh_l must be >= 1");
    }
    HashFamily family;
    family.dim = d;
    family.seed = seed;
    for (int i = 0; i < lsh_l; ++i) {
        family.batches.push_back(make_batch(d, seed, static_cast<std::uint64_t>(i)));
    }
    return family;
}

std::string hash_code(const HashFamily &family, std::span<const double> v) {
    if (v.size() != family.dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(v.size()) + " vs " + std::to_string(family.dim));
    }
    std::string code;
    code.reserve(family.bits());
    for (const auto &batch : family.batches) {
        for (const auto &plane : batch) {
            code.push_back(bit(plane, v));
        }
    }
    return code;
}

int initial_batches(std::size_t n) {
    if (n < 2) {
        return 1;
    }
    return std::max(1, static_cast<int>(std::lround(std::log2(static_cast<double>(n)) / 2.0)));
}

std::vector<Bucket> hierarchical_bucketize(std::span<const double> data,
                                           std::size_t dim, std::uint64_t seed) {
    if (dim == 0 || data.size() % dim != 0) {
        throw Error(ErrorCode::DimensionMismatch, "ragged vector set");
    }
    const std::size_t n = data.size() / dim;
    std::vector<Bucket> leaves;
    if (n == 0) {
        return leaves;
    }
    const int lsh_l = initial_batches(n);
    const auto limit = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const HashFamily family = build_family(dim, lsh_l, seed);

    std::map<std::string, std::vector<std::uint32_t>> groups;
    for (std::uint32_t r = 0; r < n; ++r) {
        groups[hash_code(family, row(data, dim, r))].push_back(r);
    }
    // Work list of (bucket, refinement depth); all buckets at one depth share
    // the same extra batch.
    std::vector<std::pair<Bucket, int>> pending;
    for (auto &[code, members] : groups) {
        pending.push_back({Bucket{code, std::move(members)}, 0});
    }
    std::vector<std::vector<std::vector<double>>> extra;
    while (!pending.empty()) {
        auto [bucket, depth] = std::move(pending.back());
        pending.pop_back();
        if (bucket.members.size() <= limit || depth >= kMaxRefineDepth ||
            all_identical(data, dim, bucket.members)) {
            leaves.push_back(std::move(bucket));
            continue;
        }
        while (extra.size() <= static_cast<std::size_t>(depth)) {
            extra.push_back(make_batch(dim, seed,
                                       static_cast<std::uint64_t>(lsh_l) + extra.size()));
        }
        const auto &batch = extra[static_cast<std::size_t>(depth)];
        std::map<std::string, std::vector<std::uint32_t>> split;
        for (const std::uint32_t r : bucket.members) {
            std::string code = bucket.code;
            for (const auto &plane : batch) {
                code.push_back(bit(plane, row(data, dim, r)));
            }
            split[code].push_back(r);
        }
        for (auto &[code, members] : split) {
            pending.push_back({Bucket{code, std::move(members)}, depth + 1});
        }
    }
    std::sort(leaves.begin(), leaves.end(),
              [](const Bucket &a, const Bucket &b) { return a.code < b.code; });
    return leaves;
}

LshMatch lsh_match(const BlockVectors &replaced, const BlockVectors &candidates,
                   std::uint64_t seed) {
    LshMatch out;
    out.best.assign(replaced.size(), -1);
    if (replaced.size() == 0 || candidates.size() == 0) {
        return out;
    }
    if (replaced.dim != candidates.dim) {
        throw Error(ErrorCode::DimensionMismatch, "block vector length");
    }
    const std::size_t dim = 2 * replaced.dim;
    std::vector<double> data;
    data.reserve(dim * (replaced.size() + candidates.size()));
    for (const Complex &c : replaced.data) {
        data.push_back(c.real());
        data.push_back(c.imag());
    }
    for (const Complex &c : candidates.data) {
        data.push_back(c.real());
        data.push_back(c.imag());
    }
    const auto buckets = hierarchical_bucketize(data, dim, seed);
    out.buckets = buckets.size();
    const auto split = static_cast<std::uint32_t>(replaced.size());
    std::vector<std::uint32_t> cand_rows;
    for (const Bucket &b : buckets) {
        cand_rows.clear();
        for (const std::uint32_t m : b.members) {
            if (m >= split) {
                cand_rows.push_back(m - split);
            }
        }
        if (cand_rows.empty()) {
            continue;
        }
        for (const std::uint32_t m : b.members) {
            if (m < split) {
                out.best[m] = static_cast<std::int64_t>(
                    match_among(replaced.row(m), candidates, cand_rows, out.comparisons)
                        .index);
            }
        }
    }
    return out;
}

} // namespace ddapprox
