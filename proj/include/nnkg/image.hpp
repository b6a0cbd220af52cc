#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nnkg {

/// 2-D lattice of d-dimensional real intensity vectors, row-major and
/// channel-interleaved. Grayscale (channels == 1) is the common case.
struct Image {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<double> data;

    static Image zeros(int height, int width, int channels = 1) {
        Image img;
        img.height = height;
        img.width = width;
        img.channels = channels;
        img.data.assign(static_cast<std::size_t>(height) * width * channels, 0.0);
        return img;
    }

    std::int64_t pixel_count() const { return static_cast<std::int64_t>(height) * width; }

    std::size_t index(int row, int col, int channel = 0) const {
        return (static_cast<std::size_t>(row) * width + col) * channels + channel;
    }

    double& at(int row, int col, int channel = 0) { return data[index(row, col, channel)]; }
    double at(int row, int col, int channel = 0) const { return data[index(row, col, channel)]; }

    /// Pointer to the intensity vector of a pixel given by flat index.
    const double* pixel(std::int64_t flat) const {
        return data.data() + static_cast<std::size_t>(flat) * channels;
    }

    bool same_shape(const Image& other) const {
        return height == other.height && width == other.width && channels == other.channels;
    }
};

inline void validate_image(const Image& img) {
    if (img.height <= 0 || img.width <= 0 || img.channels < 1)
        throw std::invalid_argument("image dimensions must be positive");
    if (img.data.size() != static_cast<std::size_t>(img.height) * img.width * img.channels)
        throw std::invalid_argument("image data length does not match dimensions");
    for (double v : img.data)
        if (!std::isfinite(v)) throw std::invalid_argument("image contains non-finite values");
}

/// Min/max over all samples.
inline std::pair<double, double> intensity_range(const Image& img) {
    double lo = img.data.empty() ? 0.0 : img.data[0];
    double hi = lo;
    for (double v : img.data) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    return {lo, hi};
}

} // namespace nnkg
