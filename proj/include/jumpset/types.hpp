#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace jumpset {

inline constexpr int kMaxDim = 3;

/// Point or displacement in R^n, n <= 3. Components past the active
/// dimension are kept at zero so dot products need no dimension argument.
using Vec = std::array<double, kMaxDim>;

struct Ball {
    Vec center{};
    double radius = 0.0;
};

inline double dot(const Vec& a, const Vec& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec operator-(const Vec& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1], s * a[2]}; }

enum class Errc {
    InvalidArgument,
    OutOfDomain,
    RadiusTooSmall,
    LatticeMismatch,
    AllUndefined,
    FormatError,
    DimensionUnsupported,
    EmptyInput,
    EmptyRegion,
    NonFiniteValues,
    Insufficient,
    DegenerateHalf,
    NoQuietBall,
    DegenerateCone,
    InvalidSpec,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Malformed GF1 input; `offset` is the byte position in the offending file.
class FormatError : public Error {
public:
    FormatError(std::size_t offset, const std::string& what)
        : Error(Errc::FormatError, what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace jumpset
