// fields.hpp: conserved current, Bohmian velocity and effective mass density
//
// Two evaluation modes:
//   exact    currents built from the psi jet,
//              rho = Im(psi d_t psi*) / k0,   j = Im(psi* d_x psi) / k0,
//            normalized so a pure right mover has rho = j = beta_R^2;
//   printed  the closed optics-approximation formulas with the S0, T0
//            factors exactly as published.
// Signature (+,-); mbar^2 = rho^2 - j^2 (c = 1) is Lorentz invariant.

#pragma once

#include "model.hpp"
#include "wavepacket.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace kgbohm {

/// Tolerances used to classify samples and detect nodes.
///
/// `eps_light` is relative to the mass density scale (sqrt(2/pi) sigma)^2.
/// `rho_min` and `meff_reliability` are relative to the local incoherent
/// intensity (|psi_R| + |psi_L|)^2 and its square respectively.
struct FieldThresholds {
    double eps_light = 1e-12;
    double rho_min = 1e-14;
    double meff_reliability = 1e-12;
};

struct Envelopes {
    double beta_R_sq = 0.0;
    double beta_L_sq = 0.0;
};

struct InterferenceFactors {
    double s0 = 0.0;
    double t0 = 0.0;
};

struct CurrentSample {
    double rho = 0.0;
    double j = 0.0;
    Mode mode = Mode::exact;
};

struct MassSample {
    double mbar_sq = 0.0;
    double meff_sq = 0.0;
    double m_local_sq_physical = 0.0;
    CausalClass causal_class = CausalClass::lightlike;
    bool meff_reliable = true;
};

[[nodiscard]] inline Envelopes envelopes(const PhysConfig& config, SpacetimePoint p)
{
    const double s2 = config.sigma * config.sigma;
    const double u = p.t - p.x;
    const double w = p.t + p.x;
    const double peak = config.peak_density();
    return {config.alpha * peak * std::exp(-2.0 * u * u * s2),
            (1.0 - config.alpha) * peak * std::exp(-2.0 * w * w * s2)};
}

[[nodiscard]] inline InterferenceFactors interference_factors(const PhysConfig& config, double x)
{
    const double s2 = config.sigma * config.sigma;
    const double arg = 2.0 * config.k0 * x;
    const double sn = std::sin(arg);
    return {2.0 * s2 / config.k0 * sn, std::cos(arg) - 2.0 * s2 * x / config.k0 * sn};
}

namespace detail {

// Im(psi * conj(d)) written out so that negating d negates the result exactly.
inline double im_psi_conj(complex psi, complex d)
{
    return psi.imag() * d.real() - psi.real() * d.imag();
}

inline CurrentSample exact_current(const PhysConfig& config, const PsiJet& jet)
{
    const double rho = im_psi_conj(jet.psi, jet.d_t) / config.k0;
    // Im(psi* d_x) = -Im(psi conj(d_x))
    const double j = -im_psi_conj(jet.psi, jet.d_x) / config.k0;
    return {rho, j, Mode::exact};
}

inline CurrentSample printed_current(const PhysConfig& config, SpacetimePoint p)
{
    const auto [br2, bl2] = envelopes(config, p);
    const auto [s0, t0] = interference_factors(config, p.x);
    const double cross = 2.0 * std::sqrt(br2 * bl2);
    return {br2 + bl2 + cross * t0, br2 - bl2 + cross * s0, Mode::printed};
}

inline double printed_mbar_sq(const PhysConfig& config, SpacetimePoint p)
{
    const auto [br2, bl2] = envelopes(config, p);
    const auto [s0, t0] = interference_factors(config, p.x);
    const double br = std::sqrt(br2);
    const double bl = std::sqrt(bl2);
    const double arg = 2.0 * config.k0 * p.x;
    const double cs = std::cos(arg);
    const double sn = std::sin(arg);
    const double g = 2.0 * config.sigma * config.sigma / config.k0;
    return 4.0 * br2 * bl2 * (1.0 + t0 * t0 - s0 * s0)
        + 4.0 * bl2 * bl * br * (cs + g * (p.t - p.x) * sn)
        + 4.0 * br2 * br * bl * (cs - g * (p.t + p.x) * sn);
}

inline bool is_current_node(const CurrentSample& cs, const PsiJet& jet, const FieldThresholds& th)
{
    const double local = jet.incoherent * jet.incoherent;
    return !(local > 0.0) || std::abs(cs.rho) < th.rho_min * local;
}

} // namespace detail

[[nodiscard]] inline CausalClass classify(const PhysConfig& config, double mbar_sq,
                                          const FieldThresholds& th = {})
{
    const double tol = th.eps_light * config.mass_density_scale();
    if (mbar_sq > tol)
        return CausalClass::timelike;
    if (mbar_sq < -tol)
        return CausalClass::spacelike;
    return CausalClass::lightlike;
}

[[nodiscard]] inline CurrentSample current(const PhysConfig& config, SpacetimePoint p,
                                           Mode mode = Mode::exact)
{
    if (mode == Mode::printed)
        return detail::printed_current(config, p);
    return detail::exact_current(config, psi_closed(config, p));
}

/// Effective mass density and derived quantities at p.
[[nodiscard]] inline MassSample mbar_sq(const PhysConfig& config, SpacetimePoint p,
                                        Mode mode = Mode::exact, const FieldThresholds& th = {})
{
    const PsiJet jet = psi_closed(config, p);
    MassSample out;
    if (mode == Mode::exact) {
        const auto cs = detail::exact_current(config, jet);
        out.mbar_sq = (cs.rho - cs.j) * (cs.rho + cs.j);
    } else {
        out.mbar_sq = detail::printed_mbar_sq(config, p);
    }
    const double psi4 = jet.norm_sq() * jet.norm_sq();
    const double local4 = std::pow(jet.incoherent, 4);
    out.meff_reliable = local4 > 0.0 && psi4 >= th.meff_reliability * local4;
    out.meff_sq = psi4 > 0.0 ? out.mbar_sq / psi4 : std::numeric_limits<double>::quiet_NaN();
    out.m_local_sq_physical = (hbar * config.k0) * (hbar * config.k0) * out.meff_sq;
    out.causal_class = classify(config, out.mbar_sq, th);
    return out;
}

/// Coordinate velocity c^2 j / rho, in units of c.
[[nodiscard]] inline double velocity(const PhysConfig& config, SpacetimePoint p,
                                     Mode mode = Mode::exact, const FieldThresholds& th = {})
{
    const PsiJet jet = psi_closed(config, p);
    const CurrentSample cs = mode == Mode::exact ? detail::exact_current(config, jet)
                                                 : detail::printed_current(config, p);
    if (detail::is_current_node(cs, jet, th))
        throw NodeError("velocity undefined: density vanishes at (t=" + std::to_string(p.t)
                        + ", x=" + std::to_string(p.x) + ")");
    return c_light * c_light * cs.j / cs.rho;
}

/// Every local quantity at one spacetime point, as serialized by the CLI.
struct FieldSample {
    SpacetimePoint point;
    complex psi;
    double rho = 0.0;
    double j = 0.0;
    double v = 0.0; // NaN at nodes
    MassSample mass;
    bool node = false;

    /// One-letter class: T, L, S, or N for nodes and unreliable samples.
    [[nodiscard]] char class_code() const
    {
        if (node || !mass.meff_reliable)
            return 'N';
        return class_letter(mass.causal_class);
    }
};

[[nodiscard]] inline FieldSample evaluate_field(const PhysConfig& config, SpacetimePoint p,
                                                Mode mode = Mode::exact,
                                                const FieldThresholds& th = {})
{
    const PsiJet jet = psi_closed(config, p);
    const CurrentSample cs = mode == Mode::exact ? detail::exact_current(config, jet)
                                                 : detail::printed_current(config, p);
    FieldSample out;
    out.point = p;
    out.psi = jet.psi;
    out.rho = cs.rho;
    out.j = cs.j;
    out.node = detail::is_current_node(cs, jet, th);
    out.v = out.node ? std::numeric_limits<double>::quiet_NaN() : cs.j / cs.rho;
    out.mass = mbar_sq(config, p, mode, th);
    return out;
}

} // namespace kgbohm
