// relativity.hpp: Lorentz boosts of points, velocities, currents and worldlines

#pragma once

#include "dynamics.hpp"
#include "fields.hpp"
#include "model.hpp"
#include "wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace kgbohm {

/// Frame moving with velocity theta (units of c) relative to the lab.
class BoostFrame {
public:
    BoostFrame() = default;

    explicit BoostFrame(double theta) : theta_(theta)
    {
        if (!std::isfinite(theta) || std::abs(theta) >= 1.0)
            throw ConfigError("boost velocity must satisfy |theta| < 1");
        gamma_ = 1.0 / std::sqrt((1.0 - theta) * (1.0 + theta));
    }

    [[nodiscard]] double theta() const { return theta_; }
    [[nodiscard]] double gamma() const { return gamma_; }
    [[nodiscard]] BoostFrame inverse() const { return BoostFrame(-theta_); }

    /// Frame reached by boosting this frame by `other` (velocity addition).
    [[nodiscard]] BoostFrame then(const BoostFrame& other) const
    {
        return BoostFrame((theta_ + other.theta_) / (1.0 + theta_ * other.theta_));
    }

private:
    double theta_ = 0.0;
    double gamma_ = 1.0;
};

/// (t', x') = gamma (t - theta x, x - theta t).
[[nodiscard]] inline SpacetimePoint boost_point(const BoostFrame& f, SpacetimePoint p)
{
    return {f.gamma() * (p.t - f.theta() * p.x), f.gamma() * (p.x - f.theta() * p.t)};
}

/// Relativistic velocity addition v' = (v - theta) / (1 - v theta / c^2).
///
/// A vanishing denominator yields +-infinity (vertical tangent in the
/// boosted diagram); an infinite input maps to its limit -c^2/theta.
[[nodiscard]] inline double boost_velocity(const BoostFrame& f, double v)
{
    const double th = f.theta();
    if (std::isinf(v))
        return th == 0.0 ? v : -c_light * c_light / th;
    const double num = v - th;
    const double den = 1.0 - v * th / (c_light * c_light);
    if (den == 0.0)
        return std::copysign(std::numeric_limits<double>::infinity(), num);
    return num / den;
}

[[nodiscard]] inline CurrentSample boost_current(const BoostFrame& f, const CurrentSample& cs)
{
    if (cs.mode != Mode::exact)
        throw ConfigError("printed-mode currents are tied to the lab frame and cannot be boosted");
    return {f.gamma() * (cs.rho - f.theta() * cs.j), f.gamma() * (cs.j - f.theta() * cs.rho),
            Mode::exact};
}

/// Exact current of the scalar field psi'(t', x') = psi(t, x), differentiated
/// in primed coordinates. Independent of boost_current().
[[nodiscard]] inline CurrentSample current_in_frame(const PhysConfig& config, const BoostFrame& f,
                                                    SpacetimePoint primed)
{
    const SpacetimePoint lab = boost_point(f.inverse(), primed);
    PsiJet jet = psi_closed(config, lab);
    // t = gamma (t' + theta x'), x = gamma (x' + theta t')
    const complex d_tp = f.gamma() * (jet.d_t + f.theta() * jet.d_x);
    const complex d_xp = f.gamma() * (f.theta() * jet.d_t + jet.d_x);
    jet.d_t = d_tp;
    jet.d_x = d_xp;
    return detail::exact_current(config, jet);
}

[[nodiscard]] inline Trajectory boost_trajectory(const BoostFrame& f, const Trajectory& traj)
{
    Trajectory out;
    out.termination = traj.termination;
    out.samples.reserve(traj.samples.size());
    for (const auto& smp : traj.samples) {
        TrajectorySample b = smp;
        const SpacetimePoint p = boost_point(f, {smp.t, smp.x});
        b.t = p.t;
        b.x = p.x;
        b.v = boost_velocity(f, smp.v);
        b.rho = f.gamma() * (smp.rho - f.theta() * smp.j);
        b.j = f.gamma() * (smp.j - f.theta() * smp.rho);
        b.dt_ds = f.gamma() * (smp.dt_ds - f.theta() * smp.dx_ds);
        b.dx_ds = f.gamma() * (smp.dx_ds - f.theta() * smp.dt_ds);
        out.samples.push_back(b);
    }
    return out;
}

/// Maximal run of samples whose boosted tangent points into the past.
struct RetroInterval {
    double s_start = 0.0;
    double s_end = 0.0;
    std::size_t first = 0; // sample indices, inclusive
    std::size_t last = 0;
    double min_rho_prime = 0.0;
    double max_rho_prime = 0.0;
    double max_mbar_sq = 0.0;
    double min_rho_lab = 0.0;
    double max_rho_lab = 0.0;
};

[[nodiscard]] inline std::vector<RetroInterval> detect_retropropagation(const BoostFrame& f,
                                                                        const Trajectory& boosted)
{
    std::vector<RetroInterval> out;
    std::optional<RetroInterval> cur;
    const auto& s = boosted.samples;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& smp = s[i];
        // lab density recovered through the inverse boost
        const double rho_lab = f.gamma() * (smp.rho + f.theta() * smp.j);
        if (smp.dt_ds < 0.0) {
            if (!cur) {
                cur = RetroInterval{smp.s, smp.s, i, i, smp.rho, smp.rho, smp.mbar_sq, rho_lab,
                                    rho_lab};
            }
            cur->s_end = smp.s;
            cur->last = i;
            cur->min_rho_prime = std::min(cur->min_rho_prime, smp.rho);
            cur->max_rho_prime = std::max(cur->max_rho_prime, smp.rho);
            cur->max_mbar_sq = std::max(cur->max_mbar_sq, smp.mbar_sq);
            cur->min_rho_lab = std::min(cur->min_rho_lab, rho_lab);
            cur->max_rho_lab = std::max(cur->max_rho_lab, rho_lab);
        } else if (cur) {
            out.push_back(*cur);
            cur.reset();
        }
    }
    if (cur)
        out.push_back(*cur);
    return out;
}

/// Re-integrate a worldline directly in the boosted frame for `s_length`
/// of primed affine parameter, starting from a primed point.
[[nodiscard]] inline Trajectory integrate_in_frame(const PhysConfig& config, const BoostFrame& f,
                                                   SpacetimePoint start, double s_length,
                                                   double ds, const FieldThresholds& th = {})
{
    if (!(ds > 0.0) || !(s_length > 0.0))
        throw ConfigError("primed-frame integration needs positive step and length");
    auto direction = [&](SpacetimePoint q) -> std::optional<detail::Direction> {
        const CurrentSample cs = current_in_frame(config, f, q);
        const PsiJet jet = psi_closed(config, boost_point(f.inverse(), q));
        const double norm = std::hypot(cs.rho, cs.j);
        const double local = jet.incoherent * jet.incoherent;
        if (!(local > 0.0) || norm < th.rho_min * local)
            return std::nullopt;
        return detail::Direction{cs.rho / norm, cs.j / norm};
    };
    auto record = [&](double s, SpacetimePoint q) {
        const CurrentSample cs = current_in_frame(config, f, q);
        TrajectorySample smp;
        smp.s = s;
        smp.t = q.t;
        smp.x = q.x;
        smp.rho = cs.rho;
        smp.j = cs.j;
        smp.v = cs.rho != 0.0 ? cs.j / cs.rho
                              : std::copysign(std::numeric_limits<double>::infinity(), cs.j);
        smp.mbar_sq = (cs.rho - cs.j) * (cs.rho + cs.j);
        smp.causal_class = classify(config, smp.mbar_sq, th);
        const double norm = std::hypot(cs.rho, cs.j);
        if (norm > 0.0) {
            smp.dt_ds = cs.rho / norm;
            smp.dx_ds = cs.j / norm;
        }
        return smp;
    };

    Trajectory traj;
    SpacetimePoint p = start;
    double s = 0.0;
    traj.samples.push_back(record(s, p));
    const long steps = static_cast<long>(std::ceil(s_length / ds));
    for (long n = 0; n < steps; ++n) {
        const auto k1 = direction(p);
        const auto k2 = k1 ? direction({p.t + 0.5 * ds * k1->dt, p.x + 0.5 * ds * k1->dx})
                           : std::nullopt;
        const auto k3 = k2 ? direction({p.t + 0.5 * ds * k2->dt, p.x + 0.5 * ds * k2->dx})
                           : std::nullopt;
        const auto k4 = k3 ? direction({p.t + ds * k3->dt, p.x + ds * k3->dx}) : std::nullopt;
        if (!k4) {
            traj.termination = Termination::node_stall;
            return traj;
        }
        p.t += ds / 6.0 * (k1->dt + 2.0 * (k2->dt + k3->dt) + k4->dt);
        p.x += ds / 6.0 * (k1->dx + 2.0 * (k2->dx + k3->dx) + k4->dx);
        s += ds;
        traj.samples.push_back(record(s, p));
    }
    traj.termination = Termination::completed;
    return traj;
}

/// Largest Euclidean distance (lab coordinates) from the lab images of the
/// primed samples to the lab polyline.
[[nodiscard]] inline double max_deviation_from(const Trajectory& lab, const BoostFrame& f,
                                               const Trajectory& primed)
{
    double worst = 0.0;
    const BoostFrame back = f.inverse();
    for (const auto& smp : primed.samples) {
        const SpacetimePoint q = boost_point(back, {smp.t, smp.x});
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < lab.samples.size(); ++i) {
            const double at = lab.samples[i].t, ax = lab.samples[i].x;
            const double bt = lab.samples[i + 1].t, bx = lab.samples[i + 1].x;
            const double dt = bt - at, dx = bx - ax;
            const double len2 = dt * dt + dx * dx;
            double u = len2 > 0.0 ? ((q.t - at) * dt + (q.x - ax) * dx) / len2 : 0.0;
            u = std::clamp(u, 0.0, 1.0);
            best = std::min(best, std::hypot(q.t - (at + u * dt), q.x - (ax + u * dx)));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace kgbohm
