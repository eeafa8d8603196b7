#include "ddapprox/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <thread>
#include <tuple>

#include "ddapprox/contribution.hpp"
#include "ddapprox/error.hpp"

namespace ddapprox {

namespace {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

double parse_double(std::string_view field, int line) {
    const std::string s(field);
    char *end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw Error(ErrorCode::MalformedLine, "bad number '" + s + "'", line);
    }
    return v;
}

std::uint64_t parse_uint(std::string_view field, int line) {
    const std::string s(field);
    char *end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s.front() == '-' || end != s.c_str() + s.size() || errno == ERANGE) {
        throw Error(ErrorCode::MalformedLine, "bad integer '" + s + "'", line);
    }
    return v;
}

} // namespace

std::vector<double> geometric_grid(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi >= lo) || count < 1) {
        throw Error(ErrorCode::InvalidArgument, "bad grid bounds");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(hi);
        return out;
    }
    const double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) {
        out.push_back(i == count - 1 ? hi : lo * std::exp(step * i));
    }
    return out;
}

std::vector<double> default_fractions() { return geometric_grid(1e-3, 0.995, 40); }

std::vector<double> default_budgets() { return geometric_grid(1e-6, 0.05, 40); }

unsigned worker_count() {
    if (const char *env = std::getenv("DDAPPROX_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

std::vector<SweepRecord> run_sweep(const DecisionDiagram &exact,
                                   const SweepOptions &options) {
    StrategySpec base;
    base.block_size = options.block_size;
    base.blocks = options.blocks;
    base.matcher = options.matcher;
    base.seed = options.seed;
    validate(base, exact.qubit_count());

    const bool measure = exact.qubit_count() <= kMaxMeasuredQubits;
    const std::vector<Complex> psi =
        measure ? to_statevector(exact) : std::vector<Complex>{};
    const ContributionMap cmap = options.matcher == Matcher::Removal
                                     ? ContributionMap{}
                                     : compute_contributions(exact);

    std::vector<SweepRecord> records(options.fractions.size());
    auto run_point = [&](std::size_t i) {
        const double f = options.fractions[i];
        ApproxResult result;
        if (options.matcher == Matcher::Removal) {
            result = remove_nodes_baseline(exact, f);
        } else {
            StrategySpec spec = base;
            spec.fraction = f;
            result = run_strategy(exact, spec, cmap);
        }
        SweepRecord &r = records[i];
        r.benchmark = options.benchmark;
        r.block_size = options.block_size;
        r.blocks = options.blocks;
        r.f = f;
        r.matcher = options.matcher;
        if (measure) {
            r.fid_measured = fidelity(psi, to_statevector(result.dd));
        }
        r.fid_predicted = result.predicted_fidelity;
        r.mem_ratio = result.memory.ratio;
        r.match_ms = options.timing ? result.match_ms : 0.0;
        r.seed = options.seed;
    };

    const unsigned threads = std::min<std::size_t>(
        options.threads == 0 ? worker_count() : options.threads,
        std::max<std::size_t>(records.size(), 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < records.size(); ++i) {
            run_point(i);
        }
        return records;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < records.size() && !failed; i = next++) {
                try {
                    run_point(i);
                } catch (...) {
                    if (!failed.exchange(true)) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return records;
}

std::string format_csv(const std::vector<SweepRecord> &records) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const SweepRecord &r : records) {
        out += r.benchmark;
        out += ',' + std::to_string(r.block_size);
        out += ',' + std::to_string(r.blocks);
        out += ',' + format_double(r.f);
        out += ',';
        out += matcher_name(r.matcher);
        out += ',' + (r.fid_measured ? format_double(*r.fid_measured) : std::string());
        out += ',' + format_double(r.fid_predicted);
        out += ',' + format_double(r.mem_ratio);
        out += ',' + format_double(r.match_ms);
        out += ',' + std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

std::vector<SweepRecord> parse_csv(std::string_view text) {
    std::vector<SweepRecord> records;
    bool header = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (!header) {
            if (line != kCsvHeader) {
                throw Error(ErrorCode::MalformedLine, "unexpected CSV header", line_no);
            }
            header = true;
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 10) {
            throw Error(ErrorCode::MalformedLine,
                        "expected 10 fields, got " + std::to_string(fields.size()),
                        line_no);
        }
        SweepRecord r;
        r.benchmark = std::string(fields[0]);
        r.block_size = static_cast<int>(parse_uint(fields[1], line_no));
        r.blocks = static_cast<int>(parse_uint(fields[2], line_no));
        r.f = parse_double(fields[3], line_no);
        try {
            r.matcher = parse_matcher(fields[4]);
        } catch (const Error &e) {
            throw Error(ErrorCode::MalformedLine, e.what(), line_no);
        }
        if (!fields[5].empty()) {
            r.fid_measured = parse_double(fields[5], line_no);
        }
        r.fid_predicted = parse_double(fields[6], line_no);
        r.mem_ratio = parse_double(fields[7], line_no);
        r.match_ms = parse_double(fields[8], line_no);
        r.seed = parse_uint(fields[9], line_no);
        records.push_back(std::move(r));
    }
    if (!header) {
        throw Error(ErrorCode::MalformedLine, "empty CSV", line_no);
    }
    return records;
}

std::optional<double> ratio_at_fidelity(const std::vector<SweepRecord> &records,
                                        double target) {
    std::optional<double> best;
    for (const SweepRecord &r : records) {
        if (r.fidelity() >= target && (!best || r.mem_ratio < *best)) {
            best = r.mem_ratio;
        }
    }
    return best;
}

double saturation_ratio(const std::vector<SweepRecord> &records) {
    if (records.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty sweep");
    }
    double best = records.front().mem_ratio;
    for (const SweepRecord &r : records) {
        best = std::min(best, r.mem_ratio);
    }
    return best;
}

std::optional<double> ratio_rmse(const std::vector<SweepRecord> &reference,
                                 const std::vector<SweepRecord> &other) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const SweepRecord &r : reference) {
        const auto a = ratio_at_fidelity(reference, r.fidelity());
        const auto b = ratio_at_fidelity(other, r.fidelity());
        if (a && b) {
            sum += (*a - *b) * (*a - *b);
            ++count;
        }
    }
    if (count == 0) {
        return std::nullopt;
    }
    return std::sqrt(sum / static_cast<double>(count));
}

MatcherComparison compare_matchers(const DecisionDiagram &exact,
                                   const SweepOptions &options) {
    StrategySpec spec;
    spec.block_size = options.block_size;
    spec.blocks = options.blocks;
    spec.seed = options.seed;
    validate(spec, exact.qubit_count());
    const bool measure = exact.qubit_count() <= kMaxMeasuredQubits;
    const std::vector<Complex> psi =
        measure ? to_statevector(exact) : std::vector<Complex>{};
    const ContributionMap cmap = compute_contributions(exact);

    MatcherComparison out;
    for (const Matcher m : {Matcher::Exhaustive, Matcher::Lsh}) {
        auto &records = m == Matcher::Exhaustive ? out.exhaustive : out.lsh;
        auto &ms = m == Matcher::Exhaustive ? out.exhaustive_ms : out.lsh_ms;
        auto &comparisons = m == Matcher::Exhaustive ? out.exhaustive_comparisons
                                                     : out.lsh_comparisons;
        spec.matcher = m;
        for (const double f : options.fractions) {
            spec.fraction = f;
            const ApproxResult result = run_strategy(exact, spec, cmap);
            SweepRecord r;
            r.benchmark = options.benchmark;
            r.block_size = spec.block_size;
            r.blocks = spec.blocks;
            r.f = f;
            r.matcher = m;
            if (measure) {
                r.fid_measured = fidelity(psi, to_statevector(result.dd));
            }
            r.fid_predicted = result.predicted_fidelity;
            r.mem_ratio = result.memory.ratio;
            r.match_ms = result.match_ms;
            r.seed = options.seed;
            records.push_back(std::move(r));
            ms += result.match_ms;
            comparisons += result.comparisons;
        }
    }
    out.rmse = ratio_rmse(out.exhaustive, out.lsh);
    return out;
}

std::string plot_script(const std::vector<SweepRecord> &records,
                        std::string_view title) {
    if (records.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no sweep records to plot");
    }
    using Key = std::tuple<int, int, int>;
    std::map<Key, std::vector<const SweepRecord *>> series;
    for (const SweepRecord &r : records) {
        series[{r.block_size, r.blocks, static_cast<int>(r.matcher)}].push_back(&r);
    }
    std::string out;
    out += "set title \"" + std::string(title) + "\"\n";
    out += "set xlabel \"fidelity\"\n";
    out += "set ylabel \"memory ratio\"\n";
    out += "set key left top\n";
    out += "set grid\n";
    std::vector<std::string> plots;
    int index = 0;
    for (auto &[key, points] : series) {
        std::sort(points.begin(), points.end(),
                  [](const SweepRecord *a, const SweepRecord *b) {
                      return a->fidelity() != b->fidelity() ? a->fidelity() < b->fidelity()
                                                            : a->f < b->f;
                  });
        const std::string block = "$s" + std::to_string(index++);
        out += block + " << EOD\n";
        for (const SweepRecord *p : points) {
            out += format_double(p->fidelity()) + ' ' + format_double(p->mem_ratio) + '\n';
        }
        out += "EOD\n";
        const auto &[n, x, m] = key;
        plots.push_back(block + " using 1:2 with linespoints title \"" +
                        std::to_string(n) + "x" + std::to_string(x) + ' ' +
                        std::string(matcher_name(static_cast<Matcher>(m))) + "\"");
    }
    out += "plot ";
    for (std::size_t i = 0; i < plots.size(); ++i) {
        out += plots[i];
        out += i + 1 < plots.size() ? ", \\\n     " : "\n";
    }
    return out;
}

} // namespace ddapprox
