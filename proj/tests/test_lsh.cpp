#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <numbers>
#include <set>

#include "ddapprox/blocks.hpp"
#include "ddapprox/error.hpp"
#include "ddapprox/lsh.hpp"
#include "support.hpp"

using namespace ddapprox;
using Catch::Approx;

namespace {

std::vector<double> gaussian(std::size_t d, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(d);
    for (auto &x : v) {
        x = g(rng);
    }
    return v;
}

double rdot(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

void normalize(std::vector<double> &v) {
    const double n = std::sqrt(rdot(v, v));
    for (auto &x : v) {
        x /= n;
    }
}

BlockVectors rows_of(const std::vector<std::vector<Complex>> &vs) {
    BlockVectors b;
    b.dim = vs.front().size();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        b.ids.push_back(static_cast<NodeId>(i));
        b.data.insert(b.data.end(), vs[i].begin(), vs[i].end());
    }
    return b;
}

} // namespace

TEST_CASE("realify keeps the real inner product", "[lsh]") {
    std::mt19937_64 rng(1);
    const auto a = testing::random_unit(4, rng);
    const auto b = testing::random_unit(4, rng);
    const auto ra = realify(a);
    REQUIRE(ra.size() == 8);
    CHECK(ra[0] == a[0].real());
    CHECK(ra[1] == a[0].imag());
    CHECK(rdot(ra, realify(b)) == Approx(inner(a, b).real()).margin(1e-15));
}

TEST_CASE("hash batches are orthonormal", "[lsh]") {
    for (std::size_t d : {2U, 4U, 8U, 32U, 128U}) {
        const HashFamily fam = build_family(d, 6, d * 17);
        CHECK(fam.bits() == 12);
        for (const auto &batch : fam.batches) {
            REQUIRE(batch.size() == static_cast<std::size_t>(kLshN));
            for (std::size_t i = 0; i < batch.size(); ++i) {
                for (std::size_t j = 0; j < batch.size(); ++j) {
                    CHECK(std::abs(rdot(batch[i], batch[j]) - (i == j ? 1.0 : 0.0)) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("families are deterministic per seed", "[lsh]") {
    CHECK(build_family(8, 3, 5).batches == build_family(8, 3, 5).batches);
    CHECK(build_family(8, 3, 5).batches != build_family(8, 3, 6).batches);
    // batch i does not depend on how many batches were built
    CHECK(build_family(8, 2, 5).batches[1] == build_family(8, 4, 5).batches[1]);
    CHECK(make_batch(8, 5, 1) == build_family(8, 2, 5).batches[1]);
}

TEST_CASE("family input errors", "[lsh]") {
    auto code_of = [](const std::function<void()> &fn) {
        try {
            fn();
        } catch (const Error &e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    CHECK(code_of([] { build_family(1, 1, 0); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([] { build_family(4, 0, 0); }) == ErrorCode::InvalidArgument);
    const HashFamily fam = build_family(4, 1, 0);
    const std::vector<double> v(3, 1.0);
    CHECK(code_of([&] { hash_code(fam, v); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("hash codes ignore scale and flip under negation", "[lsh][property]") {
    std::mt19937_64 rng(4);
    const HashFamily fam = build_family(16, 5, 9);
    for (int trial = 0; trial < 200; ++trial) {
        auto v = gaussian(16, rng);
        const std::string code = hash_code(fam, v);
        CHECK(code.size() == fam.bits());
        auto twice = v;
        for (auto &x : twice) {
            x *= 2.0;
        }
        CHECK(hash_code(fam, twice) == code);
        auto neg = v;
        for (auto &x : neg) {
            x = -x;
        }
        const std::string flipped = hash_code(fam, neg);
        for (std::size_t i = 0; i < code.size(); ++i) {
            CHECK(flipped[i] != code[i]);
        }
    }
}

TEST_CASE("per-bit collision rate is 1 - angle/pi", "[lsh][property]") {
    constexpr int kPairs = 10000;
    constexpr std::size_t kDim = 8;
    std::mt19937_64 rng(77);
    for (double theta : {0.1, std::numbers::pi / 6, std::numbers::pi / 3, std::numbers::pi / 2,
                         2 * std::numbers::pi / 3, 2.9}) {
        int same[kLshN] = {0, 0};
        for (int p = 0; p < kPairs; ++p) {
            // u and a unit w orthogonal to it span the pair
            auto u = gaussian(kDim, rng);
            normalize(u);
            auto w = gaussian(kDim, rng);
            const double k = rdot(w, u);
            for (std::size_t i = 0; i < kDim; ++i) {
                w[i] -= k * u[i];
            }
            normalize(w);
            std::vector<double> v(kDim);
            for (std::size_t i = 0; i < kDim; ++i) {
                v[i] = std::cos(theta) * u[i] + std::sin(theta) * w[i];
            }
            const auto batch = make_batch(kDim, 1234, static_cast<std::uint64_t>(p));
            for (int j = 0; j < kLshN; ++j) {
                const bool a = rdot(batch[static_cast<std::size_t>(j)], u) >= 0.0;
                const bool b = rdot(batch[static_cast<std::size_t>(j)], v) >= 0.0;
                same[j] += a == b ? 1 : 0;
            }
        }
        for (int j = 0; j < kLshN; ++j) {
            const double rate = static_cast<double>(same[j]) / kPairs;
            CHECK(std::abs(rate - (1.0 - theta / std::numbers::pi)) <= 0.02);
        }
    }
}

TEST_CASE("initial batch count", "[lsh]") {
    CHECK(initial_batches(0) == 1);
    CHECK(initial_batches(1) == 1);
    CHECK(initial_batches(16) == 2);
    CHECK(initial_batches(1024) == 5);
    CHECK(initial_batches(30000) == 7);
}

TEST_CASE("bucketize edge cases", "[lsh]") {
    const std::vector<double> one{0.6, 0.8};
    const auto single = hierarchical_bucketize(one, 2, 0);
    REQUIRE(single.size() == 1);
    CHECK(single[0].members == std::vector<std::uint32_t>{0});

    std::vector<double> same;
    for (int i = 0; i < 100; ++i) {
        same.insert(same.end(), {0.6, 0.0, 0.8, 0.0});
    }
    const auto identical = hierarchical_bucketize(same, 4, 0);
    REQUIRE(identical.size() == 1);
    CHECK(identical[0].members.size() == 100);
    CHECK(hierarchical_bucketize({}, 4, 0).empty());
}

TEST_CASE("leaf buckets respect the size bound", "[lsh][property]") {
    std::mt19937_64 rng(10);
    constexpr std::size_t kRows = 10000;
    constexpr std::size_t kDim = 8;
    std::vector<double> data;
    for (std::size_t i = 0; i < kRows; ++i) {
        auto v = gaussian(kDim, rng);
        normalize(v);
        data.insert(data.end(), v.begin(), v.end());
    }
    const auto buckets = hierarchical_bucketize(data, kDim, 3);
    std::vector<int> seen(kRows, 0);
    std::set<std::string> codes;
    for (const Bucket &b : buckets) {
        CHECK(b.members.size() <= 100);
        CHECK(std::is_sorted(b.members.begin(), b.members.end()));
        CHECK(codes.insert(b.code).second);
        for (auto m : b.members) {
            ++seen[m];
        }
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
    CHECK(std::is_sorted(codes.begin(), codes.end()));
    // same input, same seed, same buckets
    const auto again = hierarchical_bucketize(data, kDim, 3);
    REQUIRE(again.size() == buckets.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
        CHECK(again[i].code == buckets[i].code);
        CHECK(again[i].members == buckets[i].members);
    }
}

TEST_CASE("identical twins find each other", "[lsh]") {
    std::mt19937_64 rng(6);
    std::vector<std::vector<Complex>> cands;
    for (int i = 0; i < 400; ++i) {
        cands.push_back(testing::random_unit(8, rng));
    }
    std::vector<std::vector<Complex>> repl;
    std::vector<std::size_t> twin;
    for (int i = 0; i < 50; ++i) {
        twin.push_back(rng() % cands.size());
        repl.push_back(cands[twin.back()]);
    }
    const LshMatch m = lsh_match(rows_of(repl), rows_of(cands), 2);
    REQUIRE(m.best.size() == repl.size());
    for (std::size_t i = 0; i < repl.size(); ++i) {
        CHECK(m.best[i] == static_cast<std::int64_t>(twin[i]));
    }
    CHECK(m.comparisons < repl.size() * cands.size());
}

TEST_CASE("lsh match without candidates", "[lsh]") {
    std::mt19937_64 rng(6);
    const BlockVectors repl = rows_of({testing::random_unit(4, rng), testing::random_unit(4, rng)});
    BlockVectors none;
    none.dim = 4;
    const LshMatch m = lsh_match(repl, none, 0);
    CHECK(m.best == std::vector<std::int64_t>{-1, -1});
    CHECK(m.comparisons == 0);
}

TEST_CASE("lsh matches are good and cheap", "[lsh][property]") {
    std::mt19937_64 rng(13);
    std::vector<std::vector<Complex>> cands;
    std::vector<std::vector<Complex>> repl;
    for (int i = 0; i < 2000; ++i) {
        cands.push_back(testing::random_unit(4, rng));
    }
    for (int i = 0; i < 500; ++i) {
        repl.push_back(testing::random_unit(4, rng));
    }
    const BlockVectors c = rows_of(cands);
    const LshMatch m = lsh_match(rows_of(repl), c, 5);
    double lsh_score = 0.0;
    double best_score = 0.0;
    int matched = 0;
    for (std::size_t i = 0; i < repl.size(); ++i) {
        const double best = match_exhaustive(repl[i], c).score;
        best_score += best;
        if (m.best[i] >= 0) {
            const double s = inner(repl[i], c.row(static_cast<std::size_t>(m.best[i]))).real();
            CHECK(s <= best + 1e-15);
            lsh_score += s;
            ++matched;
        }
    }
    CHECK(matched > 400);
    // close to the exhaustive optimum on average, far fewer comparisons
    CHECK(lsh_score / matched > 0.8 * best_score / static_cast<double>(repl.size()));
    CHECK(m.comparisons * 10 < repl.size() * cands.size());
}
