#include "ddapprox/blocks.hpp"

#include <limits>
#include <string>

#include "ddapprox/error.hpp"

namespace ddapprox {

namespace {

void walk(const DecisionDiagram &dd, NodeId node, int remaining, Complex acc,
          std::size_t path, std::vector<Complex> &out) {
    for (int bit = 0; bit < 2; ++bit) {
        const Edge &e = dd.node(node).children[static_cast<std::size_t>(bit)];
        const std::size_t p = (path << 1U) | static_cast<std::size_t>(bit);
        if (e.is_zero()) {
            continue;
        }
        const Complex w = acc * e.weight;
        if (remaining == 1) {
            out[p] = w;
        } else {
            walk(dd, e.target, remaining - 1, w, p, out);
        }
    }
}

// Re(a . conj(b)) on raw doubles; the hot loop of every matcher.
double re_inner(const Complex *a, const Complex *b, std::size_t dim) noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        s += a[j].real() * b[j].real() + a[j].imag() * b[j].imag();
    }
    return s;
}

} // namespace

std::vector<Complex> block_vector(const DecisionDiagram &dd, NodeId node,
                                  int block_size) {
    if (block_size < 1) {
        throw Error(ErrorCode::InvalidArgument, "block size must be >= 1");
    }
    const int level = dd.node(node).level;
    if (level < block_size - 1) {
        throw Error(ErrorCode::LevelTooLow,
                    "node at level " + std::to_string(level) +
                        " cannot head a block of " + std::to_string(block_size));
    }
    std::vector<Complex> out(std::size_t{1} << block_size, Complex{0.0, 0.0});
    walk(dd, node, block_size, Complex{1.0, 0.0}, 0, out);
    return out;
}

BlockVectors block_vectors(const DecisionDiagram &dd, std::span<const NodeId> nodes,
                           int block_size) {
    BlockVectors out;
    out.dim = std::size_t{1} << block_size;
    out.ids.assign(nodes.begin(), nodes.end());
    out.data.reserve(out.dim * nodes.size());
    for (NodeId id : nodes) {
        const auto v = block_vector(dd, id, block_size);
        out.data.insert(out.data.end(), v.begin(), v.end());
    }
    return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    Complex s{0.0, 0.0};
    for (std::size_t j = 0; j < a.size(); ++j) {
        s += a[j] * std::conj(b[j]);
    }
    return s;
}

MatchResult match_exhaustive(std::span<const Complex> v,
                             const BlockVectors &candidates) {
    if (candidates.size() == 0) {
        throw Error(ErrorCode::NoCandidate, "empty candidate list");
    }
    if (v.size() != candidates.dim) {
        throw Error(ErrorCode::DimensionMismatch, "block vector length");
    }
    MatchResult best{0, re_inner(v.data(), candidates.data.data(), v.size())};
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double s =
            re_inner(v.data(), candidates.data.data() + i * candidates.dim, v.size());
        if (s > best.score ||
            (s == best.score && candidates.ids[i] < candidates.ids[best.index])) {
            best = {i, s};
        }
    }
    return best;
}

MatchResult match_among(std::span<const Complex> v, const BlockVectors &candidates,
                        std::span<const std::uint32_t> rows,
                        std::uint64_t &comparisons) {
    if (rows.empty()) {
        throw Error(ErrorCode::NoCandidate, "empty candidate list");
    }
    MatchResult best{rows[0], std::numeric_limits<double>::lowest()};
    for (const std::uint32_t r : rows) {
        const double s =
            re_inner(v.data(), candidates.data.data() + r * candidates.dim, v.size());
        if (s > best.score ||
            (s == best.score && candidates.ids[r] < candidates.ids[best.index])) {
            best = {r, s};
        }
    }
    comparisons += rows.size();
    return best;
}

} // namespace ddapprox
