#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace nnkg {

/// Relative pixel position inside a window; (0,0) is the center and is
/// never a window member.
struct Offset {
    int dx = 0; // column delta
    int dy = 0; // row delta

    int norm2() const { return dx * dx + dy * dy; }
    bool operator==(const Offset&) const = default;
};

/// Image-independent window geometry, computed once per window size:
/// neighbor offsets sorted by distance from the center, the table of
/// threshold factors delta[j][k] = (x_k - x_j)^T (x_j - x_i) with the
/// center i at the origin, and per-offset lists of the k whose delta is
/// non-negative (the only pairs the pruning loop ever tests).
class WindowPlan {
public:
    WindowPlan() = default;

    int window_size() const { return window_size_; }
    int radius() const { return (window_size_ - 1) / 2; }

    /// Number of window members, w^2 - 1.
    std::int32_t size() const { return static_cast<std::int32_t>(offsets_.size()); }

    const std::vector<Offset>& offsets() const { return offsets_; }
    const Offset& offset(std::int32_t j) const { return offsets_[static_cast<std::size_t>(j)]; }

    double delta(std::int32_t j, std::int32_t k) const {
        return delta_[static_cast<std::size_t>(j) * offsets_.size() + k];
    }
    const double* delta_row(std::int32_t j) const {
        return delta_.data() + static_cast<std::size_t>(j) * offsets_.size();
    }

    /// Prune candidates of offset j: every k != j with delta(j,k) >= 0.
    /// The trivial self pair (delta(j,j) == 0) is excluded; a confirmed
    /// neighbor must not prune itself.
    const std::vector<std::int32_t>& same_direction(std::int32_t j) const {
        return same_direction_[static_cast<std::size_t>(j)];
    }

    /// Offset indices reordered row-major (by (dy, dx)), so that emitting
    /// neighbors in this order yields ascending flat pixel indices.
    const std::vector<std::int32_t>& row_major_order() const { return row_major_order_; }

    friend WindowPlan precompute_window(int w);

private:
    int window_size_ = 0;
    std::vector<Offset> offsets_;
    std::vector<double> delta_;
    std::vector<std::vector<std::int32_t>> same_direction_;
    std::vector<std::int32_t> row_major_order_;
};

/// Builds the WindowPlan for an odd window size w in [3, 63]. Pure:
/// repeated calls produce identical tables. Sort order is by squared
/// distance with lexicographic (dy, dx) tie-breaking, so the result is
/// platform independent.
inline WindowPlan precompute_window(int w) {
    if (w < 3 || w > 63 || w % 2 == 0)
        throw std::invalid_argument("window size must be odd and within [3, 63]");

    WindowPlan plan;
    plan.window_size_ = w;
    const int r = (w - 1) / 2;
    plan.offsets_.reserve(static_cast<std::size_t>(w) * w - 1);
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            if (dx != 0 || dy != 0) plan.offsets_.push_back({dx, dy});
    std::sort(plan.offsets_.begin(), plan.offsets_.end(), [](const Offset& a, const Offset& b) {
        return std::tuple(a.norm2(), a.dy, a.dx) < std::tuple(b.norm2(), b.dy, b.dx);
    });

    const std::size_t m = plan.offsets_.size();
    plan.delta_.assign(m * m, 0.0);
    plan.same_direction_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const Offset oj = plan.offsets_[j];
        for (std::size_t k = 0; k < m; ++k) {
            const Offset ok = plan.offsets_[k];
            const double d = static_cast<double>((ok.dx - oj.dx) * oj.dx + (ok.dy - oj.dy) * oj.dy);
            plan.delta_[j * m + k] = d;
            if (k != j && d >= 0.0)
                plan.same_direction_[j].push_back(static_cast<std::int32_t>(k));
        }
    }

    plan.row_major_order_.resize(m);
    for (std::size_t j = 0; j < m; ++j) plan.row_major_order_[j] = static_cast<std::int32_t>(j);
    std::sort(plan.row_major_order_.begin(), plan.row_major_order_.end(),
              [&](std::int32_t a, std::int32_t b) {
                  const Offset& oa = plan.offsets_[static_cast<std::size_t>(a)];
                  const Offset& ob = plan.offsets_[static_cast<std::size_t>(b)];
                  return std::tuple(oa.dy, oa.dx) < std::tuple(ob.dy, ob.dx);
              });
    return plan;
}

/// One in-bounds window neighbor of a concrete pixel.
struct NeighborRef {
    std::int32_t offset_index = 0; // index into plan.offsets()
    std::int64_t pixel = 0;        // flat row*width + col
};

/// Window neighbors of (row, col) that fall inside an height x width image,
/// in plan (distance-sorted) order. Pixels near the border simply get fewer
/// neighbors; no padding is invented.
inline std::vector<NeighborRef> valid_neighbors(const WindowPlan& plan, int row, int col,
                                                int height, int width) {
    if (row < 0 || row >= height || col < 0 || col >= width)
        throw std::invalid_argument("pixel outside image");
    std::vector<NeighborRef> out;
    out.reserve(static_cast<std::size_t>(plan.size()));
    for (std::int32_t j = 0; j < plan.size(); ++j) {
        const Offset& o = plan.offset(j);
        const int rr = row + o.dy;
        const int cc = col + o.dx;
        if (rr >= 0 && rr < height && cc >= 0 && cc < width)
            out.push_back({j, static_cast<std::int64_t>(rr) * width + cc});
    }
    return out;
}

} // namespace nnkg
