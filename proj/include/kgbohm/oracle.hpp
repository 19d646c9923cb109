// oracle.hpp: independent numerical ground truth
//
// psi and its energy/momentum moments are synthesized directly from the
// momentum amplitude with the exact dispersion E(k) = |k|; nothing here
// touches the closed-form jet. Finite-difference operators and convergence
// order estimation complete the toolbox.

#pragma once

#include "fields.hpp"
#include "model.hpp"
#include "quadrature.hpp"
#include "wavepacket.hpp"
#include "weakvalues.hpp"

#include <cmath>
#include <numbers>

namespace kgbohm {

struct ConvergenceReport {
    double h_coarse = 0.0;
    double h_fine = 0.0;
    double err_coarse = 0.0;
    double err_fine = 0.0;
    double estimated_order = 0.0;
};

namespace detail {

template <std::size_t N, class Weights>
QuadratureResult<N> spectral_moments(const PhysConfig& config, SpacetimePoint p,
                                     const QuadratureSpec& spec, Weights weights)
{
    validate(spec);
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double k_max = config.k0 + spec.k_window * config.sigma;
    auto integrand = [&](double k) {
        const double phase = k * p.x - std::abs(k) * p.t;
        const complex base = std::polar(inv_sqrt_2pi * momentum_amplitude(config, k), phase);
        const std::array<double, N> w = weights(k);
        ComplexVec<N> out;
        for (std::size_t n = 0; n < N; ++n)
            out[n] = base * w[n];
        return out;
    };
    return integrate_adaptive<N>(integrand, {-k_max, 0.0, k_max}, spec.abs_tol,
                                 spec.max_subdivisions);
}

} // namespace detail

/// psi(t,x) = (2 pi)^{-1/2} \int dk f(k) e^{i(kx - |k| t)}.
[[nodiscard]] inline ComplexAmplitude psi_quadrature(const PhysConfig& config, SpacetimePoint p,
                                                     const QuadratureSpec& spec = {})
{
    const auto r = detail::spectral_moments<1>(config, p, spec,
                                               [](double) { return std::array<double, 1>{1.0}; });
    return ComplexAmplitude(r.value[0]);
}

/// Weak values as ratios of the E(k)- and k-weighted integrals to psi itself.
[[nodiscard]] inline WeakValuePair weak_values_spectral(const PhysConfig& config,
                                                        SpacetimePoint p,
                                                        const QuadratureSpec& spec = {})
{
    const auto r = detail::spectral_moments<3>(config, p, spec, [](double k) {
        return std::array<double, 3>{1.0, hbar * std::abs(k), hbar * k};
    });
    if (std::abs(r.value[0]) <= 1e-12)
        throw NodeError("spectral weak values undefined: |psi| below 1e-12");
    return {r.value[1] / r.value[0], r.value[2] / r.value[0]};
}

/// Second-order central estimate of the d'Alembertian d_t^2 R - d_x^2 R.
template <class Sampler>
[[nodiscard]] double fd_dalembertian(Sampler&& sample, SpacetimePoint p, double h)
{
    if (!(h > 0.0))
        throw ConfigError("finite-difference step must be positive");
    const double r0 = sample(p);
    const double rtt = sample(SpacetimePoint{p.t + h, p.x}) - 2.0 * r0
        + sample(SpacetimePoint{p.t - h, p.x});
    const double rxx = sample(SpacetimePoint{p.t, p.x + h}) - 2.0 * r0
        + sample(SpacetimePoint{p.t, p.x - h});
    return (rtt - rxx) / (h * h);
}

/// Effective mass squared of the amplitude field R, from the 5-point stencil.
///
/// For a solution of the massless wave equation the Hamilton-Jacobi part
/// gives (d_t S)^2 - (d_x S)^2 = (d_t^2 R - d_x^2 R) / R, so this equals
/// (Re H_w)^2 - (Re p_w)^2 (hbar = c = 1). R = cos(sigma x) yields +sigma^2.
template <class Sampler>
[[nodiscard]] double fd_effective_mass_sq(Sampler&& sample, SpacetimePoint p, double h,
                                          double r_floor = 0.0)
{
    const double r0 = sample(p);
    if (!(r0 > r_floor) || r0 == 0.0)
        throw NodeError("amplitude too small for -box R / R");
    return fd_dalembertian(sample, p, h) / r0;
}

/// Central-difference d_t rho + d_x j.
[[nodiscard]] inline double continuity_residual(const PhysConfig& config, SpacetimePoint p,
                                                double h, Mode mode = Mode::exact)
{
    if (!(h > 0.0))
        throw ConfigError("finite-difference step must be positive");
    const double drho = current(config, {p.t + h, p.x}, mode).rho
        - current(config, {p.t - h, p.x}, mode).rho;
    const double dj = current(config, {p.t, p.x + h}, mode).j
        - current(config, {p.t, p.x - h}, mode).j;
    return (drho + dj) / (2.0 * h);
}

/// Evaluate |residual| at h and h/2 and estimate the convergence order.
template <class Residual>
[[nodiscard]] ConvergenceReport convergence_check(Residual&& residual_fn, double h)
{
    if (!(h > 0.0))
        throw ConfigError("convergence step must be positive");
    ConvergenceReport rep;
    rep.h_coarse = h;
    rep.h_fine = 0.5 * h;
    rep.err_coarse = std::abs(residual_fn(rep.h_coarse));
    rep.err_fine = std::abs(residual_fn(rep.h_fine));
    rep.estimated_order = std::log2(rep.err_coarse / rep.err_fine);
    return rep;
}

} // namespace kgbohm
