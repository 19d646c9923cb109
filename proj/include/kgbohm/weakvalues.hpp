// weakvalues.hpp: energy and momentum weak values at position postselection
//
// H_w = i hbar d_t psi / psi and p_w = -i hbar d_x psi / psi, so that a
// positive-frequency plane wave e^{i(kx - Et)} yields H_w = E, p_w = k.
// Only the real parts enter the local four-frequency and the local mass.

#pragma once

#include "model.hpp"
#include "wavepacket.hpp"

#include <cmath>
#include <string>

namespace kgbohm {

struct WeakValuePair {
    complex H_w;
    complex p_w;
};

struct FourFrequency {
    double k_t = 0.0;
    double k_x = 0.0;
};

/// Relative size of |psi| (against |psi_R| + |psi_L|) below which psi is a node.
inline constexpr double weak_value_node_threshold = 1e-14;

[[nodiscard]] inline WeakValuePair weak_values(const PsiJet& jet)
{
    if (!(jet.incoherent > 0.0) || std::abs(jet.psi) < weak_value_node_threshold * jet.incoherent)
        throw NodeError("weak values undefined at a node of psi");
    const complex i_hbar{0.0, hbar};
    return {i_hbar * jet.d_t / jet.psi, -i_hbar * jet.d_x / jet.psi};
}

[[nodiscard]] inline WeakValuePair weak_values(const PhysConfig& config, SpacetimePoint p)
{
    return weak_values(psi_closed(config, p));
}

[[nodiscard]] inline FourFrequency local_four_frequency(const WeakValuePair& wv)
{
    return {wv.H_w.real() / hbar, wv.p_w.real() / hbar};
}

[[nodiscard]] inline FourFrequency local_four_frequency(const PhysConfig& config, SpacetimePoint p)
{
    return local_four_frequency(weak_values(config, p));
}

/// Signed m^2 c^4 = (Re H_w)^2 - c^2 (Re p_w)^2; negative on tachyonic segments.
[[nodiscard]] inline double local_mass_sq(const WeakValuePair& wv)
{
    const double e = wv.H_w.real();
    const double p = c_light * wv.p_w.real();
    return (e - p) * (e + p);
}

[[nodiscard]] inline double local_mass_sq(const PhysConfig& config, SpacetimePoint p)
{
    return local_mass_sq(weak_values(config, p));
}

} // namespace kgbohm
