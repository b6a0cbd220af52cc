#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "nnkg/image.hpp"
#include "nnkg/parallel.hpp"
#include "nnkg/sparse_graph.hpp"
#include "nnkg/window.hpp"

namespace nnkg {

/// Bilateral kernel parameters: sigma_d in pixels, sigma_f in intensity
/// units (interpreted on the native scale of the input, [0,255] for 8-bit).
struct KernelParams {
    double sigma_d = 0.0;
    double sigma_f = 0.0;

    double mu() const { return (sigma_f / sigma_d) * (sigma_f / sigma_d); }
};

inline void validate_params(const KernelParams& p) {
    if (!(p.sigma_d > 0.0) || !std::isfinite(p.sigma_d))
        throw std::invalid_argument("sigma_d must be finite and > 0");
    if (!(p.sigma_f > 0.0) || !std::isfinite(p.sigma_f))
        throw std::invalid_argument("sigma_f must be finite and > 0");
}

using Position = std::array<double, 2>;

namespace detail {

inline double sqdist(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int c = 0; c < d; ++c) {
        const double t = a[c] - b[c];
        s += t * t;
    }
    return s;
}

/// Product-of-exponentials bilateral weight from precomputed squared
/// distances, clamped away from zero so weights stay in (0, 1].
inline double bilateral_from_sq(const KernelParams& p, double dist2, double fdist2) {
    const double w = std::exp(-dist2 / (2.0 * p.sigma_d * p.sigma_d)) *
                     std::exp(-fdist2 / (2.0 * p.sigma_f * p.sigma_f));
    return w > 0.0 ? w : std::numeric_limits<double>::min();
}

} // namespace detail

/// Edge weight between two pixels: spatial Gaussian times intensity
/// Gaussian. Symmetric in its arguments and always in (0, 1].
inline double bilateral_weight(const KernelParams& p, const Position& xi, const Position& xj,
                               std::span<const double> fi, std::span<const double> fj) {
    if (fi.size() != fj.size()) throw std::invalid_argument("intensity vectors differ in dimension");
    const double ddx = xi[0] - xj[0];
    const double ddy = xi[1] - xj[1];
    return detail::bilateral_from_sq(p, ddx * ddx + ddy * ddy,
                                     detail::sqdist(fi.data(), fj.data(), static_cast<int>(fi.size())));
}

/// Spatial factor exp(-|x_j - x_i|^2 / (2 sigma_d^2)) per plan offset;
/// image independent, so computed once.
inline std::vector<double> spatial_weights(const WindowPlan& plan, const KernelParams& p) {
    std::vector<double> out(static_cast<std::size_t>(plan.size()));
    for (std::int32_t j = 0; j < plan.size(); ++j)
        out[static_cast<std::size_t>(j)] =
            std::exp(-plan.offset(j).norm2() / (2.0 * p.sigma_d * p.sigma_d));
    return out;
}

namespace detail {

inline void check_window_fits(const Image& img, const WindowPlan& plan) {
    if (plan.window_size() > std::min(img.height, img.width))
        throw std::invalid_argument("window larger than image");
}

/// Shared row-assembly driver: calls emit_row(i, cols, ws) for every pixel in
/// deterministic per-pixel storage, then concatenates in pixel order.
template <typename RowFn>
SparseGraph assemble_rows(const Image& img, int threads, RowFn&& emit_row) {
    const std::int64_t n = img.pixel_count();
    std::vector<std::vector<std::uint32_t>> cols(static_cast<std::size_t>(img.height));
    std::vector<std::vector<double>> ws(static_cast<std::size_t>(img.height));
    std::vector<std::vector<std::int64_t>> ends(static_cast<std::size_t>(img.height));
    parallel_for_items(img.height, threads, [&](std::int64_t r) {
        auto& c = cols[static_cast<std::size_t>(r)];
        auto& w = ws[static_cast<std::size_t>(r)];
        auto& e = ends[static_cast<std::size_t>(r)];
        e.reserve(static_cast<std::size_t>(img.width));
        for (int col = 0; col < img.width; ++col) {
            emit_row(static_cast<int>(r), col, c, w);
            e.push_back(static_cast<std::int64_t>(c.size()));
        }
    });
    SparseGraph g;
    g.n = n;
    g.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    std::int64_t total = 0;
    for (int r = 0; r < img.height; ++r) {
        for (int col = 0; col < img.width; ++col) {
            const std::int64_t e = ends[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            g.row_ptr[static_cast<std::size_t>(r) * img.width + col + 1] = total + e;
        }
        total += ends[static_cast<std::size_t>(r)].back();
    }
    g.col_idx.resize(static_cast<std::size_t>(total));
    g.weights.resize(static_cast<std::size_t>(total));
    std::int64_t at = 0;
    for (int r = 0; r < img.height; ++r) {
        std::copy(cols[static_cast<std::size_t>(r)].begin(), cols[static_cast<std::size_t>(r)].end(),
                  g.col_idx.begin() + at);
        std::copy(ws[static_cast<std::size_t>(r)].begin(), ws[static_cast<std::size_t>(r)].end(),
                  g.weights.begin() + at);
        at += static_cast<std::int64_t>(cols[static_cast<std::size_t>(r)].size());
    }
    return g;
}

} // namespace detail

/// Dense window graph: every pixel connected to all of its in-bounds window
/// neighbors with bilateral weights. Symmetric by construction, no self
/// loops.
inline SparseGraph build_bf_graph(const Image& img, const WindowPlan& plan, const KernelParams& p,
                                  int threads = 0) {
    detail::check_window_fits(img, plan);
    validate_params(p);
    const std::vector<double> spatial = spatial_weights(plan, p);
    const auto& order = plan.row_major_order(); // ascending flat index -> sorted CSR rows
    const double inv2sf2 = 1.0 / (2.0 * p.sigma_f * p.sigma_f);
    const int d = img.channels;
    return detail::assemble_rows(img, threads, [&](int r, int c, auto& cols, auto& ws) {
        const double* fi = img.pixel(static_cast<std::int64_t>(r) * img.width + c);
        for (std::int32_t j : order) {
            const Offset& o = plan.offset(j);
            const int rr = r + o.dy;
            const int cc = c + o.dx;
            if (rr < 0 || rr >= img.height || cc < 0 || cc >= img.width) continue;
            const std::int64_t pj = static_cast<std::int64_t>(rr) * img.width + cc;
            const double f2 = detail::sqdist(fi, img.pixel(pj), d);
            double w = spatial[static_cast<std::size_t>(j)] * std::exp(-f2 * inv2sf2);
            if (!(w > 0.0)) w = std::numeric_limits<double>::min();
            cols.push_back(static_cast<std::uint32_t>(pj));
            ws.push_back(w);
        }
    });
}

/// Classical normalized bilateral filter: out_i = sum_j K_ij f_j / sum_j K_ij
/// over the window, optionally including the center with K_ii = 1.
inline Image bf_filter(const Image& img, const WindowPlan& plan, const KernelParams& p,
                       bool include_self = true, int threads = 0) {
    detail::check_window_fits(img, plan);
    validate_params(p);
    const std::vector<double> spatial = spatial_weights(plan, p);
    const double inv2sf2 = 1.0 / (2.0 * p.sigma_f * p.sigma_f);
    const int d = img.channels;
    Image out = Image::zeros(img.height, img.width, d);
    parallel_for_blocks(0, img.height, threads, [&](std::int64_t r0, std::int64_t r1) {
        std::vector<double> sum(static_cast<std::size_t>(d));
        for (std::int64_t r = r0; r < r1; ++r) {
            for (int c = 0; c < img.width; ++c) {
                const std::int64_t pi = r * img.width + c;
                const double* fi = img.pixel(pi);
                double wsum = 0.0;
                std::fill(sum.begin(), sum.end(), 0.0);
                if (include_self) {
                    wsum = 1.0;
                    for (int ch = 0; ch < d; ++ch) sum[static_cast<std::size_t>(ch)] = fi[ch];
                }
                for (std::int32_t j = 0; j < plan.size(); ++j) {
                    const Offset& o = plan.offset(j);
                    const std::int64_t rr = r + o.dy;
                    const int cc = c + o.dx;
                    if (rr < 0 || rr >= img.height || cc < 0 || cc >= img.width) continue;
                    const double* fj = img.pixel(rr * img.width + cc);
                    const double w = spatial[static_cast<std::size_t>(j)] *
                                     std::exp(-detail::sqdist(fi, fj, d) * inv2sf2);
                    wsum += w;
                    for (int ch = 0; ch < d; ++ch) sum[static_cast<std::size_t>(ch)] += w * fj[ch];
                }
                for (int ch = 0; ch < d; ++ch)
                    out.data[out.index(static_cast<int>(r), c, ch)] =
                        sum[static_cast<std::size_t>(ch)] / wsum;
            }
        }
    });
    return out;
}

} // namespace nnkg
