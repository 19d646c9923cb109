// wavepacket.hpp: momentum amplitude and closed-form position-space jet
//
// psi(t,x) = (2/pi)^{1/4} sqrt(sigma) [ sqrt(alpha) e^{i k0 u} e^{-sigma^2 u^2}
//                                     + sqrt(1-alpha) e^{-i k0 w} e^{-sigma^2 w^2} ]
// with u = x - t, w = x + t. The prefactor follows from <x|k> = e^{ikx}/sqrt(2 pi).
// The overlap of the two Gaussians in momentum space is dropped from the
// normalization; its relative size is exp(-k0^2 / 2 sigma^2).

#pragma once

#include "model.hpp"

#include <cmath>
#include <numbers>

namespace kgbohm {

/// Value of psi with its exact first derivatives.
///
/// `incoherent` is |psi_R| + |psi_L|, the modulus psi would have without
/// interference. Node tests compare against it rather than a global peak, so
/// isolated single-packet tails are never mistaken for zeros of psi.
struct PsiJet {
    complex psi;
    complex d_t;
    complex d_x;
    double incoherent = 0.0;

    [[nodiscard]] double norm_sq() const { return std::norm(psi); }

    /// Multiply psi and its derivatives by a constant.
    [[nodiscard]] PsiJet scaled(double factor) const
    {
        return {psi * factor, d_t * factor, d_x * factor, incoherent * std::abs(factor)};
    }
};

/// Normalization N = (2 pi sigma^2)^{-1/4} of the momentum amplitude.
[[nodiscard]] inline double momentum_normalization(const PhysConfig& config)
{
    return std::pow(2.0 * std::numbers::pi * config.sigma * config.sigma, -0.25);
}

[[nodiscard]] inline double momentum_amplitude(const PhysConfig& config, double k)
{
    const double four_s2 = 4.0 * config.sigma * config.sigma;
    const double dr = k - config.k0;
    const double dl = k + config.k0;
    return momentum_normalization(config)
        * (std::sqrt(config.alpha) * std::exp(-dr * dr / four_s2)
           + std::sqrt(1.0 - config.alpha) * std::exp(-dl * dl / four_s2));
}

[[nodiscard]] inline PsiJet psi_closed(const PhysConfig& config, SpacetimePoint p)
{
    const double amp = config.peak_amplitude();
    const double s2 = config.sigma * config.sigma;
    const double k0 = config.k0;
    const double u = p.x - p.t;
    const double w = p.x + p.t;

    const double mod_r = amp * std::sqrt(config.alpha) * std::exp(-s2 * u * u);
    const double mod_l = amp * std::sqrt(1.0 - config.alpha) * std::exp(-s2 * w * w);
    const complex right = std::polar(mod_r, k0 * u);
    const complex left = std::polar(mod_l, -k0 * w);

    // Logarithmic derivatives of each packet. The x-derivative factor of the
    // right mover is the exact negation of its t-derivative factor; for the
    // left mover the two coincide. This keeps j = +-rho bit-exact when one
    // of the weights vanishes.
    const complex dt_right{2.0 * s2 * u, -k0};
    const complex dx_right = -dt_right;
    const complex dt_left{-2.0 * s2 * w, -k0};
    const complex dx_left = dt_left;

    PsiJet jet;
    jet.psi = right + left;
    jet.d_t = dt_right * right + dt_left * left;
    jet.d_x = dx_right * right + dx_left * left;
    jet.incoherent = mod_r + mod_l;
    return jet;
}

} // namespace kgbohm
