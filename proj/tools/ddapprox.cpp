// Command-line front end: generate circuits, run approximation sweeps,
// compare matchers and emit gnuplot scripts.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ddapprox/approx.hpp"
#include "ddapprox/circuit.hpp"
#include "ddapprox/error.hpp"
#include "ddapprox/simulate.hpp"
#include "ddapprox/sweep.hpp"

namespace {

using namespace ddapprox;

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kSimulation = 3, kIo = 4 };

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownGate:
    case ErrorCode::QubitOutOfRange:
    case ErrorCode::DuplicateQubitInCycle:
    case ErrorCode::NonMonotoneCycle:
    case ErrorCode::MalformedLine:
        return kParse;
    case ErrorCode::Io:
        return kIo;
    case ErrorCode::InvalidArgument:
    case ErrorCode::GridTooSmall:
        return kUsage;
    default:
        return kSimulation;
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) {
            throw Error(ErrorCode::Io, "cannot write to stdout");
        }
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path);
    }
}

struct CircuitArgs {
    std::string path;
    int rows = 4;
    int cols = 4;
    int depth = 10;
    std::uint64_t seed = 1;

    void attach(CLI::App *app) {
        app->add_option("--circuit", path, "GRCS circuit file (overrides generation)");
        app->add_option("--rows", rows, "grid rows")->check(CLI::PositiveNumber);
        app->add_option("--cols", cols, "grid columns")->check(CLI::PositiveNumber);
        app->add_option("--depth", depth, "circuit depth")->check(CLI::PositiveNumber);
        app->add_option("--seed", seed, "generator and hashing seed");
    }

    [[nodiscard]] Circuit load() const {
        if (!path.empty()) {
            return parse_grcs(read_file(path));
        }
        return generate_supremacy(rows, cols, depth, seed);
    }

    [[nodiscard]] std::string name() const {
        if (!path.empty()) {
            const auto slash = path.find_last_of('/');
            std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
            const auto dot = base.rfind('.');
            return dot == std::string::npos ? base : base.substr(0, dot);
        }
        return "inst" + std::to_string(rows) + "x" + std::to_string(cols) + "_" +
               std::to_string(depth) + "_" + std::to_string(seed);
    }
};

std::pair<int, int> parse_strategy(const std::string &text) {
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "strategy must look like NxX");
    }
    try {
        std::size_t used_n = 0;
        std::size_t used_x = 0;
        const int n = std::stoi(text.substr(0, x), &used_n);
        const int b = std::stoi(text.substr(x + 1), &used_x);
        if (used_n != x || used_x != text.size() - x - 1) {
            throw std::invalid_argument(text);
        }
        return {n, b};
    } catch (const std::logic_error &) {
        throw Error(ErrorCode::InvalidArgument, "strategy must look like NxX");
    }
}

std::vector<double> parse_fractions(const std::string &text, Matcher m) {
    if (text.empty()) {
        return m == Matcher::Removal ? default_budgets() : default_fractions();
    }
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error &) {
            throw Error(ErrorCode::InvalidArgument, "bad fraction '" + item + "'");
        }
    }
    return out;
}

DecisionDiagram simulate(const Circuit &circuit) {
    // Small registers go through the dense simulator, which is faster and
    // yields the same diagram.
    if (circuit.qubit_count <= 20) {
        return DecisionDiagram::from_statevector(dense_simulate(circuit));
    }
    return simulate_circuit(circuit);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Decision-diagram approximation by node replacement"};
    app.require_subcommand(1);

    auto *gen = app.add_subcommand("generate", "write a supremacy-style circuit");
    int g_rows = 4;
    int g_cols = 4;
    int g_depth = 10;
    std::uint64_t g_seed = 1;
    std::string g_out = "-";
    gen->add_option("--rows", g_rows, "grid rows")->required();
    gen->add_option("--cols", g_cols, "grid columns")->required();
    gen->add_option("--depth", g_depth, "circuit depth")->required();
    gen->add_option("--seed", g_seed, "generator seed");
    gen->add_option("--out", g_out, "output file, - for stdout");

    auto *sweep = app.add_subcommand("sweep", "memory ratio vs fidelity sweep");
    CircuitArgs s_circuit;
    s_circuit.attach(sweep);
    std::string s_strategy = "1x1";
    std::string s_matcher = "exhaustive";
    std::string s_fractions;
    std::string s_out = "-";
    bool s_timing = false;
    sweep->add_option("--strategy", s_strategy, "NxX block layout");
    sweep->add_option("--matcher", s_matcher, "exhaustive, lsh or removal");
    sweep->add_option("--fractions", s_fractions,
                      "comma-separated fractions (budgets for removal)");
    sweep->add_option("--out", s_out, "CSV file, - for stdout");
    sweep->add_flag("--timing", s_timing, "record matching wall-clock time");

    auto *cmp = app.add_subcommand("compare-lsh", "LSH against exhaustive matching");
    CircuitArgs c_circuit;
    c_circuit.attach(cmp);
    std::string c_strategy = "1x1";
    std::string c_fractions;
    std::string c_out = "-";
    cmp->add_option("--strategy", c_strategy, "NxX block layout");
    cmp->add_option("--fractions", c_fractions, "comma-separated fractions");
    cmp->add_option("--out", c_out, "report file, - for stdout");

    auto *plot = app.add_subcommand("plot", "gnuplot script from sweep CSV");
    std::string p_csv;
    std::string p_out = "-";
    std::string p_title = "memory ratio vs fidelity";
    plot->add_option("--csv", p_csv, "sweep CSV")->required();
    plot->add_option("--out", p_out, "script file, - for stdout");
    plot->add_option("--title", p_title, "plot title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            write_output(g_out, serialize_grcs(generate_supremacy(g_rows, g_cols, g_depth, g_seed)));
        } else if (*sweep) {
            SweepOptions opt;
            std::tie(opt.block_size, opt.blocks) = parse_strategy(s_strategy);
            opt.matcher = parse_matcher(s_matcher);
            if (opt.matcher == Matcher::Removal && (opt.block_size != 1 || opt.blocks != 1)) {
                throw Error(ErrorCode::InvalidArgument, "removal runs as 1x1");
            }
            opt.fractions = parse_fractions(s_fractions, opt.matcher);
            opt.seed = s_circuit.seed;
            opt.timing = s_timing;
            opt.benchmark = s_circuit.name();
            const Circuit circuit = s_circuit.load();
            const DecisionDiagram dd = simulate(circuit);
            write_output(s_out, format_csv(run_sweep(dd, opt)));
        } else if (*cmp) {
            SweepOptions opt;
            std::tie(opt.block_size, opt.blocks) = parse_strategy(c_strategy);
            opt.fractions = parse_fractions(c_fractions, Matcher::Exhaustive);
            opt.seed = c_circuit.seed;
            opt.benchmark = c_circuit.name();
            const DecisionDiagram dd = simulate(c_circuit.load());
            const MatcherComparison cmpres = compare_matchers(dd, opt);
            std::string report = "f,ratio_exhaustive,ratio_lsh,fid_exhaustive,fid_lsh\n";
            char line[160];
            for (std::size_t i = 0; i < opt.fractions.size(); ++i) {
                const auto &e = cmpres.exhaustive[i];
                const auto &l = cmpres.lsh[i];
                std::snprintf(line, sizeof line, "%.6g,%.6f,%.6f,%.9f,%.9f\n", e.f,
                              e.mem_ratio, l.mem_ratio, e.fidelity(), l.fidelity());
                report += line;
            }
            if (cmpres.rmse) {
                std::snprintf(line, sizeof line, "rmse %.6f\n", *cmpres.rmse);
            } else {
                std::snprintf(line, sizeof line, "rmse n/a\n");
            }
            report += line;
            std::snprintf(line, sizeof line, "match_ms exhaustive %.3f lsh %.3f speedup %.2f\n",
                          cmpres.exhaustive_ms, cmpres.lsh_ms, cmpres.speedup());
            report += line;
            std::snprintf(line, sizeof line, "comparisons exhaustive %llu lsh %llu\n",
                          static_cast<unsigned long long>(cmpres.exhaustive_comparisons),
                          static_cast<unsigned long long>(cmpres.lsh_comparisons));
            report += line;
            write_output(c_out, report);
        } else if (*plot) {
            const auto records = parse_csv(read_file(p_csv));
            if (records.empty()) {
                throw Error(ErrorCode::InvalidArgument, p_csv + " has no data rows");
            }
            write_output(p_out, plot_script(records, p_title));
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSimulation;
    }
    return kOk;
}
