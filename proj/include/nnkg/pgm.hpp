#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "nnkg/errors.hpp"
#include "nnkg/image.hpp"

namespace nnkg {

/// Grayscale image plus the maxval declared by its file (255 or 65535).
struct PgmImage {
    Image image;
    int maxval = 255;
};

namespace detail {

inline int pgm_next_token(std::istream& in, std::string& tok) {
    tok.clear();
    int c;
    for (;;) {
        c = in.get();
        if (c == EOF) return EOF;
        if (c == '#') { // comment runs to end of line
            while (c != EOF && c != '\n') c = in.get();
            continue;
        }
        if (!std::isspace(c)) break;
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return static_cast<int>(tok.size());
}

inline long pgm_int_token(std::istream& in, const char* what) {
    std::string tok;
    if (pgm_next_token(in, tok) <= 0) throw IoError(std::string("PGM: missing ") + what);
    try {
        return std::stol(tok);
    } catch (const std::exception&) {
        throw IoError(std::string("PGM: bad ") + what + " '" + tok + "'");
    }
}

} // namespace detail

/// Reads a binary (P5) PGM. 16-bit samples are big-endian per the format.
inline PgmImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    std::string magic;
    if (detail::pgm_next_token(in, magic) <= 0 || magic != "P5")
        throw IoError("'" + path.string() + "' is not a binary PGM (P5)");
    const long width = detail::pgm_int_token(in, "width");
    const long height = detail::pgm_int_token(in, "height");
    const long maxval = detail::pgm_int_token(in, "maxval");
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
        throw IoError("PGM header out of range in '" + path.string() + "'");
    in.get(); // single whitespace byte before raster

    PgmImage out;
    out.maxval = static_cast<int>(maxval);
    out.image = Image::zeros(static_cast<int>(height), static_cast<int>(width));
    const std::size_t n = out.image.data.size();
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(n * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw IoError("truncated PGM raster in '" + path.string() + "'");
    for (std::size_t i = 0; i < n; ++i) {
        if (bytes == 1)
            out.image.data[i] = raw[i];
        else
            out.image.data[i] = raw[2 * i] * 256.0 + raw[2 * i + 1];
    }
    return out;
}

/// Writes a binary (P5) PGM, rounding and clamping samples to [0, maxval].
inline void write_pgm(const std::filesystem::path& path, const Image& img, int maxval = 255) {
    if (img.channels != 1) throw std::invalid_argument("PGM output requires a single channel");
    if (maxval <= 0 || maxval > 65535) throw std::invalid_argument("PGM maxval must be in [1, 65535]");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(img.data.size() * bytes);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        double v = std::round(img.data[i]);
        v = std::clamp(v, 0.0, static_cast<double>(maxval));
        const auto q = static_cast<unsigned int>(v);
        if (bytes == 1) {
            raw[i] = static_cast<unsigned char>(q);
        } else {
            raw[2 * i] = static_cast<unsigned char>(q >> 8);
            raw[2 * i + 1] = static_cast<unsigned char>(q & 0xff);
        }
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError("failed writing PGM raster to '" + path.string() + "'");
}

} // namespace nnkg
