// model.hpp: shared value types and physical configuration
//
// Natural units throughout: hbar = c = 1. Lengths are usually quoted in
// units of 1/sigma, so the example configurations use sigma = 1.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kgbohm {

using complex = std::complex<double>;

// ---------------------------------------------------------------- errors

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid physics parameters, grid or run configuration.
struct ConfigError : Error {
    using Error::Error;
};

/// Evaluation at (or numerically indistinguishable from) a zero of psi.
struct NodeError : Error {
    using Error::Error;
};

/// Non-finite field values encountered during evaluation or integration.
struct NumericError : Error {
    using Error::Error;
};

// ------------------------------------------------------------- constants

inline constexpr double hbar = 1.0;
inline constexpr double c_light = 1.0;

/// Below this k0/sigma the closed forms (optics approximation) are flagged.
inline constexpr double optics_ratio_threshold = 5.0;

// ------------------------------------------------------------ PhysConfig

/// Parameters of the two-packet Gaussian superposition.
///
/// `alpha` is the weight of the right-moving packet, `1 - alpha` that of the
/// left-moving one. `optics_warning` is set by validate() when k0/sigma is
/// too small for the closed forms to be trusted.
struct PhysConfig {
    double k0 = 10.0;
    double sigma = 1.0;
    double alpha = 0.83;
    bool optics_warning = false;

    [[nodiscard]] double optics_ratio() const { return k0 / sigma; }

    /// Peak modulus of a single normalized packet, (2/pi)^{1/4} sqrt(sigma).
    [[nodiscard]] double peak_amplitude() const
    {
        return std::pow(2.0 / std::numbers::pi, 0.25) * std::sqrt(sigma);
    }

    /// Peak single-packet intensity sqrt(2/pi) sigma; the unit for rho and j.
    [[nodiscard]] double peak_density() const
    {
        return std::sqrt(2.0 / std::numbers::pi) * sigma;
    }

    /// Scale of the effective mass density, (sqrt(2/pi) sigma)^2.
    [[nodiscard]] double mass_density_scale() const
    {
        const double p = peak_density();
        return p * p;
    }

    friend bool operator==(const PhysConfig&, const PhysConfig&) = default;
};

[[nodiscard]] inline PhysConfig validate(PhysConfig config)
{
    if (!std::isfinite(config.k0) || !std::isfinite(config.sigma) || !std::isfinite(config.alpha))
        throw ConfigError("physics parameters must be finite");
    if (config.k0 <= 0.0)
        throw ConfigError("k0 must be positive");
    if (config.sigma <= 0.0)
        throw ConfigError("sigma must be positive");
    if (config.alpha < 0.0 || config.alpha > 1.0)
        throw ConfigError("alpha out of range [0, 1]");
    config.optics_warning = config.optics_ratio() < optics_ratio_threshold;
    return config;
}

// -------------------------------------------------------- spacetime types

struct SpacetimePoint {
    double t = 0.0;
    double x = 0.0;

    friend bool operator==(const SpacetimePoint&, const SpacetimePoint&) = default;
};

/// Rectangular sampling window; nodes include both end points.
struct GridSpec {
    double t_min = -3.0;
    double t_max = 3.0;
    double x_min = -4.0;
    double x_max = 4.0;
    int nt = 256;
    int nx = 256;

    [[nodiscard]] double t_at(int i) const { return t_min + (t_max - t_min) * i / (nt - 1); }
    [[nodiscard]] double x_at(int i) const { return x_min + (x_max - x_min) * i / (nx - 1); }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(nt) * nx; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline void validate(const GridSpec& grid)
{
    if (!std::isfinite(grid.t_min) || !std::isfinite(grid.t_max) || !std::isfinite(grid.x_min)
        || !std::isfinite(grid.x_max))
        throw ConfigError("grid bounds must be finite");
    if (!(grid.t_min < grid.t_max))
        throw ConfigError("grid requires t_min < t_max");
    if (!(grid.x_min < grid.x_max))
        throw ConfigError("grid requires x_min < x_max");
    if (grid.nt < 2 || grid.nx < 2)
        throw ConfigError("grid requires at least two samples per axis");
}

/// Complex amplitude with its polar parts R = |psi| and S = arg psi.
struct ComplexAmplitude {
    double re = 0.0;
    double im = 0.0;

    ComplexAmplitude() = default;
    ComplexAmplitude(double re_, double im_) : re(re_), im(im_) {}
    explicit ComplexAmplitude(complex z) : re(z.real()), im(z.imag()) {}

    [[nodiscard]] complex value() const { return {re, im}; }
    [[nodiscard]] double amplitude() const { return std::hypot(re, im); }
    [[nodiscard]] double phase() const { return std::atan2(im, re); }
    [[nodiscard]] double norm_sq() const { return re * re + im * im; }
};

enum class Mode { exact, printed };

inline const char* to_string(Mode m) { return m == Mode::exact ? "exact" : "printed"; }

inline Mode parse_mode(const std::string& s)
{
    if (s == "exact")
        return Mode::exact;
    if (s == "printed")
        return Mode::printed;
    throw ConfigError("unknown mode '" + s + "' (expected exact|printed)");
}

enum class CausalClass { timelike, lightlike, spacelike };

inline char class_letter(CausalClass c)
{
    switch (c) {
    case CausalClass::timelike: return 'T';
    case CausalClass::lightlike: return 'L';
    case CausalClass::spacelike: return 'S';
    }
    return '?';
}

} // namespace kgbohm
