#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nnkg/errors.hpp"

namespace nnkg {

/// Compressed sparse row adjacency over pixels. Weights are positive and
/// at most 1; column indices are strictly ascending within each row (which
/// also rules out duplicates), and there are no self loops.
struct SparseGraph {
    std::int64_t n = 0;
    std::vector<std::int64_t> row_ptr; // length n + 1
    std::vector<std::uint32_t> col_idx;
    std::vector<double> weights;

    std::int64_t nnz() const { return static_cast<std::int64_t>(col_idx.size()); }

    std::span<const std::uint32_t> row_cols(std::int64_t i) const {
        return {col_idx.data() + row_ptr[i], static_cast<std::size_t>(row_ptr[i + 1] - row_ptr[i])};
    }
    std::span<const double> row_weights(std::int64_t i) const {
        return {weights.data() + row_ptr[i], static_cast<std::size_t>(row_ptr[i + 1] - row_ptr[i])};
    }

    /// Weight of edge (i, j), or 0 when absent. Rows are sorted, so this is
    /// a binary search.
    double weight(std::int64_t i, std::uint32_t j) const {
        const auto cols = row_cols(i);
        const auto it = std::lower_bound(cols.begin(), cols.end(), j);
        if (it == cols.end() || *it != j) return 0.0;
        return weights[row_ptr[i] + (it - cols.begin())];
    }
};

inline void validate_graph(const SparseGraph& g) {
    if (g.n < 0) throw std::invalid_argument("graph: negative node count");
    if (g.row_ptr.size() != static_cast<std::size_t>(g.n) + 1)
        throw std::invalid_argument("graph: row_ptr length must be n + 1");
    if (g.row_ptr.front() != 0 || g.row_ptr.back() != g.nnz())
        throw std::invalid_argument("graph: row_ptr endpoints inconsistent with nnz");
    if (g.weights.size() != g.col_idx.size())
        throw std::invalid_argument("graph: weights/col_idx length mismatch");
    for (std::int64_t i = 0; i < g.n; ++i) {
        if (g.row_ptr[i + 1] < g.row_ptr[i])
            throw std::invalid_argument("graph: row_ptr must be non-decreasing");
        for (std::int64_t p = g.row_ptr[i]; p < g.row_ptr[i + 1]; ++p) {
            const std::uint32_t j = g.col_idx[p];
            if (j >= static_cast<std::uint64_t>(g.n))
                throw std::invalid_argument("graph: column index out of range");
            if (j == static_cast<std::uint64_t>(i))
                throw std::invalid_argument("graph: self loop");
            if (p > g.row_ptr[i] && g.col_idx[p - 1] >= j)
                throw std::invalid_argument("graph: columns must be strictly ascending per row");
            const double w = g.weights[p];
            if (!(w > 0.0) || w > 1.0)
                throw std::invalid_argument("graph: weights must lie in (0, 1]");
        }
    }
}

/// True when the stored support and weights are symmetric within rel_tol.
inline bool is_symmetric(const SparseGraph& g, double rel_tol = 1e-9) {
    for (std::int64_t i = 0; i < g.n; ++i) {
        const auto cols = g.row_cols(i);
        const auto ws = g.row_weights(i);
        for (std::size_t p = 0; p < cols.size(); ++p) {
            const double back = g.weight(cols[p], static_cast<std::uint32_t>(i));
            if (back == 0.0) return false;
            if (std::abs(back - ws[p]) > rel_tol * std::max(back, ws[p])) return false;
        }
    }
    return true;
}

inline SparseGraph transpose(const SparseGraph& g) {
    SparseGraph t;
    t.n = g.n;
    t.row_ptr.assign(static_cast<std::size_t>(g.n) + 1, 0);
    for (std::uint32_t j : g.col_idx) ++t.row_ptr[j + 1];
    for (std::int64_t i = 0; i < g.n; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
    t.col_idx.resize(g.col_idx.size());
    t.weights.resize(g.weights.size());
    std::vector<std::int64_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (std::int64_t i = 0; i < g.n; ++i) {
        for (std::int64_t p = g.row_ptr[i]; p < g.row_ptr[i + 1]; ++p) {
            const std::int64_t q = cursor[g.col_idx[p]]++;
            t.col_idx[q] = static_cast<std::uint32_t>(i);
            t.weights[q] = g.weights[p];
        }
    }
    // rows of the transpose come out sorted because input rows are scanned
    // in ascending i
    return t;
}

enum class SymmetrizeMode {
    max,     // w(i,j) = max of the two directed values; absent treated as present value
    average, // w(i,j) = mean of the two directed values; absent treated as 0
};

/// Union of (i,j) and (j,i) supports with weights merged per mode.
/// Idempotent: symmetrize(symmetrize(g)) == symmetrize(g).
inline SparseGraph symmetrize(const SparseGraph& g, SymmetrizeMode mode = SymmetrizeMode::max) {
    const SparseGraph t = transpose(g);
    SparseGraph out;
    out.n = g.n;
    out.row_ptr.assign(static_cast<std::size_t>(g.n) + 1, 0);
    out.col_idx.reserve(g.col_idx.size());
    out.weights.reserve(g.weights.size());
    for (std::int64_t i = 0; i < g.n; ++i) {
        std::int64_t a = g.row_ptr[i], a_end = g.row_ptr[i + 1];
        std::int64_t b = t.row_ptr[i], b_end = t.row_ptr[i + 1];
        while (a < a_end || b < b_end) {
            std::uint32_t col;
            double fwd = 0.0, bwd = 0.0;
            bool has_fwd = false, has_bwd = false;
            if (a < a_end && (b >= b_end || g.col_idx[a] <= t.col_idx[b])) {
                col = g.col_idx[a];
                fwd = g.weights[a];
                has_fwd = true;
                ++a;
            } else {
                col = t.col_idx[b];
            }
            if (b < b_end && t.col_idx[b] == col) {
                bwd = t.weights[b];
                has_bwd = true;
                ++b;
            }
            double w;
            if (mode == SymmetrizeMode::max) {
                w = has_fwd && has_bwd ? std::max(fwd, bwd) : (has_fwd ? fwd : bwd);
            } else {
                w = 0.5 * (fwd + bwd);
            }
            out.col_idx.push_back(col);
            out.weights.push_back(w);
        }
        out.row_ptr[i + 1] = static_cast<std::int64_t>(out.col_idx.size());
    }
    return out;
}

struct GraphStats {
    std::int64_t node_count = 0;
    std::int64_t stored_entries = 0;   // directed entries in the CSR
    std::int64_t undirected_edges = 0; // unordered pairs present in either direction
    double mean_degree = 0.0;          // stored_entries / node_count
    double weight_sum = 0.0;           // over stored entries
    std::vector<std::int64_t> degree_histogram; // index = out-degree
};

inline GraphStats graph_stats(const SparseGraph& g) {
    GraphStats s;
    s.node_count = g.n;
    s.stored_entries = g.nnz();
    s.mean_degree = g.n > 0 ? static_cast<double>(g.nnz()) / static_cast<double>(g.n) : 0.0;
    std::int64_t max_deg = 0;
    for (std::int64_t i = 0; i < g.n; ++i)
        max_deg = std::max(max_deg, g.row_ptr[i + 1] - g.row_ptr[i]);
    s.degree_histogram.assign(static_cast<std::size_t>(max_deg) + 1, 0);
    for (std::int64_t i = 0; i < g.n; ++i)
        ++s.degree_histogram[static_cast<std::size_t>(g.row_ptr[i + 1] - g.row_ptr[i])];
    for (double w : g.weights) s.weight_sum += w;
    // count unordered pairs: each (i, j) with j > i contributes one; a pair
    // stored only as (j, i) with j > i is caught from the j side
    for (std::int64_t i = 0; i < g.n; ++i) {
        for (std::uint32_t j : g.row_cols(i)) {
            if (j > static_cast<std::uint64_t>(i))
                ++s.undirected_edges;
            else if (g.weight(j, static_cast<std::uint32_t>(i)) == 0.0)
                ++s.undirected_edges; // (i,j) stored below diagonal only
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Binary graph file: magic "NNKG", version u32, n u64, nnz u64, then
// row_ptr as u64[n+1], col_idx as u32[nnz], weights as f32[nnz]; all fields
// little-endian.
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kGraphFormatVersion = 1;

namespace detail {

template <typename T>
void put_le(std::string& buf, T value) {
    for (std::size_t b = 0; b < sizeof(T); ++b)
        buf.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * b)) & 0xff));
}

template <typename T>
T get_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return static_cast<T>(v);
}

inline std::uint32_t float_bits_le(float f) {
    std::uint32_t u;
    std::memcpy(&u, &f, sizeof u);
    return u;
}

inline float float_from_bits(std::uint32_t u) {
    float f;
    std::memcpy(&f, &u, sizeof f);
    return f;
}

} // namespace detail

inline void save_graph(const std::filesystem::path& path, const SparseGraph& g) {
    std::string buf;
    buf.reserve(24 + g.row_ptr.size() * 8 + g.col_idx.size() * 8);
    buf.append("NNKG");
    detail::put_le<std::uint32_t>(buf, kGraphFormatVersion);
    detail::put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(g.n));
    detail::put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(g.nnz()));
    for (std::int64_t v : g.row_ptr) detail::put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(v));
    for (std::uint32_t v : g.col_idx) detail::put_le<std::uint32_t>(buf, v);
    for (double w : g.weights) {
        // keep the on-disk weight positive even if f32 would flush to zero
        float f = static_cast<float>(w);
        if (f <= 0.0f) f = std::numeric_limits<float>::min();
        detail::put_le<std::uint32_t>(buf, detail::float_bits_le(f));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("failed writing graph to '" + path.string() + "'");
}

inline SparseGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 24 || std::memcmp(buf.data(), "NNKG", 4) != 0)
        throw IoError("'" + path.string() + "' is not an NNKG graph file");
    const auto version = detail::get_le<std::uint32_t>(buf.data() + 4);
    if (version != kGraphFormatVersion)
        throw IoError("unsupported NNKG version " + std::to_string(version));
    const auto n = detail::get_le<std::uint64_t>(buf.data() + 8);
    const auto nnz = detail::get_le<std::uint64_t>(buf.data() + 16);
    const std::size_t expect = 24 + (n + 1) * 8 + nnz * 4 + nnz * 4;
    if (buf.size() != expect) throw IoError("NNKG payload size mismatch in '" + path.string() + "'");

    SparseGraph g;
    g.n = static_cast<std::int64_t>(n);
    g.row_ptr.resize(n + 1);
    g.col_idx.resize(nnz);
    g.weights.resize(nnz);
    const unsigned char* p = buf.data() + 24;
    for (std::size_t i = 0; i <= n; ++i, p += 8)
        g.row_ptr[i] = static_cast<std::int64_t>(detail::get_le<std::uint64_t>(p));
    for (std::size_t i = 0; i < nnz; ++i, p += 4) g.col_idx[i] = detail::get_le<std::uint32_t>(p);
    for (std::size_t i = 0; i < nnz; ++i, p += 4)
        g.weights[i] = detail::float_from_bits(detail::get_le<std::uint32_t>(p));
    validate_graph(g);
    return g;
}

} // namespace nnkg
