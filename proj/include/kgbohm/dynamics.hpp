// dynamics.hpp: Bohmian trajectories through the conserved current
//
// The guidance law dx^mu/ds ∝ j^mu is integrated with the unit-speed
// reparameterization (dt/ds, dx/ds) = (rho, j) / sqrt(rho^2 + j^2), which stays
// regular where rho -> 0 and the coordinate velocity j/rho diverges.

#pragma once

#include "fields.hpp"
#include "model.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kgbohm {

enum class Termination { completed, left_window, node_stall };

inline const char* to_string(Termination t)
{
    switch (t) {
    case Termination::completed: return "completed";
    case Termination::left_window: return "left_window";
    case Termination::node_stall: return "node_stall";
    }
    return "?";
}

struct TrajectorySample {
    double s = 0.0;
    double t = 0.0;
    double x = 0.0;
    double v = 0.0; // +-inf where rho == 0
    double mbar_sq = 0.0;
    CausalClass causal_class = CausalClass::lightlike;
    double rho = 0.0;
    double j = 0.0;
    double dt_ds = 0.0;
    double dx_ds = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    Termination termination = Termination::completed;
};

/// Affine step control. The step is the largest coordinate advance per
/// step: min(max_advance / sigma, (t1 - t0) / min_steps).
struct StepControl {
    double max_advance = 0.01;
    int min_steps = 100;
    double x_min = -std::numeric_limits<double>::infinity();
    double x_max = std::numeric_limits<double>::infinity();
    long max_total_steps = 10'000'000;
};

namespace detail {

struct Direction {
    double dt = 0.0;
    double dx = 0.0;
};

inline std::optional<Direction> guidance_direction(const PhysConfig& config, SpacetimePoint p,
                                                   Mode mode, const FieldThresholds& th)
{
    const PsiJet jet = psi_closed(config, p);
    const CurrentSample cs = mode == Mode::exact ? exact_current(config, jet)
                                                 : printed_current(config, p);
    if (!std::isfinite(cs.rho) || !std::isfinite(cs.j))
        throw NumericError("non-finite current at (t=" + std::to_string(p.t)
                           + ", x=" + std::to_string(p.x) + ")");
    const double norm = std::hypot(cs.rho, cs.j);
    const double local = jet.incoherent * jet.incoherent;
    if (!(local > 0.0) || norm < th.rho_min * local)
        return std::nullopt;
    return Direction{cs.rho / norm, cs.j / norm};
}

inline TrajectorySample make_sample(const PhysConfig& config, double s, SpacetimePoint p,
                                    Mode mode, const FieldThresholds& th)
{
    const CurrentSample cs = current(config, p, mode);
    TrajectorySample out;
    out.s = s;
    out.t = p.t;
    out.x = p.x;
    out.rho = cs.rho;
    out.j = cs.j;
    out.v = cs.rho != 0.0 ? cs.j / cs.rho
                          : std::copysign(std::numeric_limits<double>::infinity(), cs.j);
    out.mbar_sq = mode == Mode::exact ? (cs.rho - cs.j) * (cs.rho + cs.j)
                                      : mbar_sq(config, p, mode, th).mbar_sq;
    out.causal_class = classify(config, out.mbar_sq, th);
    const double norm = std::hypot(cs.rho, cs.j);
    if (norm > 0.0) {
        out.dt_ds = cs.rho / norm;
        out.dx_ds = cs.j / norm;
    }
    return out;
}

} // namespace detail

[[nodiscard]] inline double affine_step(const PhysConfig& config, double t0, double t1,
                                        const StepControl& ctrl)
{
    return std::min(ctrl.max_advance / config.sigma, (t1 - t0) / ctrl.min_steps);
}

/// Quantiles (i - 1/2)/n of rho(t0, .) over [x_min, x_max].
///
/// The CDF is tabulated on 4096 points with the trapezoid rule. Negative
/// density dips smaller than 1e-6 of the peak density are clamped to zero;
/// anything larger aborts, since the packets already overlap at t0.
[[nodiscard]] inline std::vector<double> initial_positions(const PhysConfig& config, int n,
                                                           double t0, double x_min, double x_max,
                                                           Mode mode = Mode::exact)
{
    if (n < 0)
        throw ConfigError("trajectory count must be non-negative");
    if (!(x_min < x_max))
        throw ConfigError("initial-position window requires x_min < x_max");
    if (n == 0)
        return {};

    constexpr int grid_points = 4096;
    const double dx = (x_max - x_min) / (grid_points - 1);
    const double negative_floor = -1e-6 * config.peak_density();

    std::vector<double> xs(grid_points);
    std::vector<double> density(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        xs[i] = x_min + dx * i;
        const double rho = current(config, {t0, xs[i]}, mode).rho;
        if (rho < negative_floor)
            throw ConfigError("density is negative on the start slice (rho = "
                              + std::to_string(rho) + " at x = " + std::to_string(xs[i])
                              + "); start earlier, before the packets overlap");
        density[i] = std::max(rho, 0.0);
    }

    std::vector<double> cdf(grid_points, 0.0);
    for (int i = 1; i < grid_points; ++i)
        cdf[i] = cdf[i - 1] + 0.5 * (density[i] + density[i - 1]) * dx;
    const double total = cdf.back();
    if (!(total > 0.0))
        throw ConfigError("density vanishes on the start slice");

    std::vector<double> out;
    out.reserve(n);
    for (int i = 1; i <= n; ++i) {
        const double target = (i - 0.5) / n * total;
        const auto it = std::lower_bound(cdf.begin() + 1, cdf.end(), target);
        const auto k = static_cast<std::size_t>(it - cdf.begin());
        const double c0 = cdf[k - 1];
        const double c1 = cdf[k];
        const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.5;
        out.push_back(xs[k - 1] + frac * dx);
    }
    return out;
}

namespace detail {

/// One classic RK4 step of length h along the unit-speed guidance field;
/// nullopt if any stage lands on a node.
inline std::optional<SpacetimePoint> rk4_step(const PhysConfig& config, SpacetimePoint p, double h,
                                              Mode mode, const FieldThresholds& th)
{
    auto stage = [&](SpacetimePoint q) { return guidance_direction(config, q, mode, th); };
    const auto k1 = stage(p);
    if (!k1)
        return std::nullopt;
    const auto k2 = stage({p.t + 0.5 * h * k1->dt, p.x + 0.5 * h * k1->dx});
    if (!k2)
        return std::nullopt;
    const auto k3 = stage({p.t + 0.5 * h * k2->dt, p.x + 0.5 * h * k2->dx});
    if (!k3)
        return std::nullopt;
    const auto k4 = stage({p.t + h * k3->dt, p.x + h * k3->dx});
    if (!k4)
        return std::nullopt;
    return SpacetimePoint{p.t + h / 6.0 * (k1->dt + 2.0 * (k2->dt + k3->dt) + k4->dt),
                          p.x + h / 6.0 * (k1->dx + 2.0 * (k2->dx + k3->dx) + k4->dx)};
}

/// Shortest partial step in (0, h] on which `coord` of the RK4 result
/// reaches `target`, given that the full step crosses it.
template <class Coord>
double partial_step(const PhysConfig& config, SpacetimePoint p, double h, Mode mode,
                    const FieldThresholds& th, Coord coord, double target)
{
    const double start = coord(p) - target;
    auto g = [&](double step) {
        const auto q = rk4_step(config, p, step, mode, th);
        if (!q)
            throw NodeError("node inside the final partial step");
        return coord(*q) - target;
    };
    const double end = g(h);
    if (start == 0.0)
        return 0.0;
    if (end == 0.0)
        return h;
    std::uintmax_t iters = 100;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        g, 0.0, h, start, end, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Classic RK4 in the affine parameter from (t0, x0) to t = t1.
///
/// The last step is shortened so that the final sample lies exactly on
/// t = t1, or on the window edge when the worldline leaves [x_min, x_max].
[[nodiscard]] inline Trajectory integrate(const PhysConfig& config, double x0, double t0,
                                          double t1, const StepControl& ctrl = {},
                                          Mode mode = Mode::exact, const FieldThresholds& th = {})
{
    if (!std::isfinite(x0) || !std::isfinite(t0) || !std::isfinite(t1))
        throw ConfigError("integration endpoints must be finite");
    if (!(t0 < t1))
        throw ConfigError("integration requires t0 < t1");
    const double ds = affine_step(config, t0, t1, ctrl);

    Trajectory traj;
    SpacetimePoint p{t0, x0};
    if (!detail::guidance_direction(config, p, mode, th))
        throw NodeError("trajectory starts at a node");
    double s = 0.0;
    traj.samples.push_back(detail::make_sample(config, s, p, mode, th));
    if (p.x < ctrl.x_min || p.x > ctrl.x_max) {
        traj.termination = Termination::left_window;
        return traj;
    }

    const auto t_of = [](SpacetimePoint q) { return q.t; };
    const auto x_of = [](SpacetimePoint q) { return q.x; };
    for (long step = 0;; ++step) {
        if (step >= ctrl.max_total_steps)
            throw NumericError("trajectory exceeded the step budget");
        const auto q = detail::rk4_step(config, p, ds, mode, th);
        if (!q) {
            traj.termination = Termination::node_stall;
            break;
        }
        if (!std::isfinite(q->t) || !std::isfinite(q->x))
            throw NumericError("trajectory left the finite domain");

        const bool past_end = q->t >= t1;
        const bool outside = q->x < ctrl.x_min || q->x > ctrl.x_max;
        if (!past_end && !outside) {
            p = *q;
            s += ds;
            traj.samples.push_back(detail::make_sample(config, s, p, mode, th));
            continue;
        }

        // Land exactly on whichever boundary the step reaches first.
        try {
            double h = ds;
            Termination why = Termination::completed;
            if (past_end)
                h = detail::partial_step(config, p, ds, mode, th, t_of, t1);
            if (outside) {
                const double edge = q->x < ctrl.x_min ? ctrl.x_min : ctrl.x_max;
                const double h_edge = detail::partial_step(config, p, ds, mode, th, x_of, edge);
                if (!past_end || h_edge < h) {
                    h = h_edge;
                    why = Termination::left_window;
                }
            }
            SpacetimePoint end = *detail::rk4_step(config, p, h, mode, th);
            if (why == Termination::completed)
                end.t = t1;
            else
                end.x = q->x < ctrl.x_min ? ctrl.x_min : ctrl.x_max;
            if (h > 0.0)
                traj.samples.push_back(detail::make_sample(config, s + h, end, mode, th));
            traj.termination = why;
        } catch (const NodeError&) {
            traj.termination = Termination::node_stall;
        }
        break;
    }
    return traj;
}

/// RK4 on dx/dt = j / rho with a fixed time step, ending exactly at t1.
///
/// Diagnostic companion of integrate(); only meaningful where rho stays
/// well away from zero along the path.
[[nodiscard]] inline double integrate_coordinate_time(const PhysConfig& config, double x0,
                                                      double t0, double t1, int steps,
                                                      Mode mode = Mode::exact,
                                                      const FieldThresholds& th = {})
{
    if (steps < 1)
        throw ConfigError("coordinate-time integration needs at least one step");
    const double dt = (t1 - t0) / steps;
    double x = x0;
    for (int i = 0; i < steps; ++i) {
        const double t = t0 + dt * i;
        const double k1 = velocity(config, {t, x}, mode, th);
        const double k2 = velocity(config, {t + 0.5 * dt, x + 0.5 * dt * k1}, mode, th);
        const double k3 = velocity(config, {t + 0.5 * dt, x + 0.5 * dt * k2}, mode, th);
        const double k4 = velocity(config, {t + dt, x + dt * k3}, mode, th);
        x += dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
    }
    return x;
}

/// Position at lab time t by linear interpolation at the first passage.
[[nodiscard]] inline std::optional<double> position_at(const Trajectory& traj, double t)
{
    const auto& s = traj.samples;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double ta = s[i].t;
        const double tb = s[i + 1].t;
        if ((ta <= t && t <= tb) || (tb <= t && t <= ta)) {
            if (ta == tb)
                return s[i].x;
            const double f = (t - ta) / (tb - ta);
            return s[i].x + f * (s[i + 1].x - s[i].x);
        }
    }
    if (!s.empty() && s.front().t == t)
        return s.front().x;
    return std::nullopt;
}

struct SegmentSummary {
    int n_timelike = 0;
    int n_lightlike = 0;
    int n_spacelike = 0;
    std::vector<std::pair<double, double>> spacelike_runs; // (s_start, s_end)
};

[[nodiscard]] inline SegmentSummary classify_segments(const Trajectory& traj)
{
    if (traj.samples.empty())
        throw ConfigError("cannot classify an empty trajectory");
    SegmentSummary out;
    std::optional<double> run_start;
    double last_s = 0.0;
    for (const auto& smp : traj.samples) {
        switch (smp.causal_class) {
        case CausalClass::timelike: ++out.n_timelike; break;
        case CausalClass::lightlike: ++out.n_lightlike; break;
        case CausalClass::spacelike: ++out.n_spacelike; break;
        }
        if (smp.causal_class == CausalClass::spacelike) {
            if (!run_start)
                run_start = smp.s;
        } else if (run_start) {
            out.spacelike_runs.emplace_back(*run_start, last_s);
            run_start.reset();
        }
        last_s = smp.s;
    }
    if (run_start)
        out.spacelike_runs.emplace_back(*run_start, last_s);
    return out;
}

/// Integrate one trajectory per initial position.
[[nodiscard]] inline std::vector<Trajectory>
integrate_ensemble(const PhysConfig& config, const std::vector<double>& x0s, double t0, double t1,
                   const StepControl& ctrl = {}, Mode mode = Mode::exact,
                   const FieldThresholds& th = {})
{
    std::vector<Trajectory> out;
    out.reserve(x0s.size());
    for (double x0 : x0s)
        out.push_back(integrate(config, x0, t0, t1, ctrl, mode, th));
    return out;
}

} // namespace kgbohm
