#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddapprox/approx.hpp"
#include "ddapprox/dd.hpp"

namespace ddapprox {

inline constexpr std::string_view kCsvHeader =
    "benchmark,N,X,f,matcher,fid_measured,fid_predicted,mem_ratio,match_ms,seed";

/// Largest register whose approximated state is expanded to measure fidelity.
inline constexpr int kMaxMeasuredQubits = 24;

struct SweepRecord {
    std::string benchmark;
    int block_size = 1;
    int blocks = 1;
    /// Replaced fraction, or the fidelity budget for the removal baseline.
    double f = 0.0;
    Matcher matcher = Matcher::Exhaustive;
    /// Empty above kMaxMeasuredQubits.
    std::optional<double> fid_measured;
    double fid_predicted = 1.0;
    double mem_ratio = 1.0;
    double match_ms = 0.0;
    std::uint64_t seed = 0;

    /// Measured fidelity when available, else the prediction.
    [[nodiscard]] double fidelity() const noexcept {
        return fid_measured.value_or(fid_predicted);
    }
};

/// `count` points spaced geometrically over [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int count);
/// 40 points over [1e-3, 0.995].
std::vector<double> default_fractions();
/// 40 removal budgets over [1e-6, 0.05].
std::vector<double> default_budgets();

struct SweepOptions {
    std::string benchmark;
    int block_size = 1;
    int blocks = 1;
    Matcher matcher = Matcher::Exhaustive;
    std::vector<double> fractions;
    std::uint64_t seed = 0;
    /// Record wall-clock matching time; off keeps output reproducible.
    bool timing = false;
    /// 0 picks worker_count().
    unsigned threads = 0;
};

/// Worker limit: DDAPPROX_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
unsigned worker_count();

/// One record per fraction, in input order. `exact` is only read.
std::vector<SweepRecord> run_sweep(const DecisionDiagram &exact,
                                   const SweepOptions &options);

std::string format_csv(const std::vector<SweepRecord> &records);
/// Throws MalformedLine (with line number) on bad rows or header.
std::vector<SweepRecord> parse_csv(std::string_view text);

/// Lowest memory ratio among records reaching fidelity >= target.
std::optional<double> ratio_at_fidelity(const std::vector<SweepRecord> &records,
                                        double target);

/// Lowest memory ratio over the whole sweep.
double saturation_ratio(const std::vector<SweepRecord> &records);

/**
 * Root-mean-square difference of memory ratio between two sweeps at matched
 * fidelity: at the fidelity of every `reference` point, the lower envelopes
 * (ratio_at_fidelity) of both sweeps are compared. Points where `other`
 * never reaches that fidelity are skipped; nullopt if none remain.
 */
std::optional<double> ratio_rmse(const std::vector<SweepRecord> &reference,
                                 const std::vector<SweepRecord> &other);

struct MatcherComparison {
    std::vector<SweepRecord> exhaustive;
    std::vector<SweepRecord> lsh;
    std::optional<double> rmse;
    double exhaustive_ms = 0.0;
    double lsh_ms = 0.0;
    std::uint64_t exhaustive_comparisons = 0;
    std::uint64_t lsh_comparisons = 0;

    [[nodiscard]] double speedup() const noexcept {
        return lsh_ms > 0.0 ? exhaustive_ms / lsh_ms : 0.0;
    }
};

/// Runs the same N x X sweep with both matchers, single-threaded so the
/// matching times are comparable. Records carry their match_ms.
MatcherComparison compare_matchers(const DecisionDiagram &exact,
                                   const SweepOptions &options);

/// Gnuplot script with inline data, one curve per (N, X, matcher).
/// Throws InvalidArgument on an empty record set.
std::string plot_script(const std::vector<SweepRecord> &records,
                        std::string_view title);

} // namespace ddapprox
