#pragma once

#include <stdexcept>
#include <string>

namespace nnkg {

/// Failure to read or write a file, or malformed on-disk data.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical domain failure: non-PSD kernel system, degenerate dictionary,
/// zero-energy signal, and the like.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nnkg
