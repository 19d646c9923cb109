// acceptance.hpp: end-to-end verification suite
//
// Each criterion compares the main pipeline against an independent route
// (momentum-space quadrature, finite differences, algebraic identities) or
// checks a reproduction property of the spacetime diagrams. Results carry
// their measured residuals so the report is self-explanatory.

#pragma once

#include "commands.hpp"
#include "dynamics.hpp"
#include "fields.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "relativity.hpp"
#include "wavepacket.hpp"
#include "weakvalues.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace kgbohm {

enum class Level { quick, full };

inline Level parse_level(const std::string& s)
{
    if (s == "quick")
        return Level::quick;
    if (s == "full")
        return Level::full;
    throw ConfigError("unknown validation level '" + s + "' (expected quick|full)");
}

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    nlohmann::json metrics = nlohmann::json::object();
    double seconds = 0.0;
};

struct AcceptanceReport {
    Level level = Level::full;
    RunConfig config;
    std::vector<CriterionResult> criteria;
    std::vector<CriterionResult> diagnostics; // reported, never gating

    [[nodiscard]] bool all_passed() const
    {
        return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
    }
};

namespace acceptance {

inline constexpr std::uint64_t seed = 0x5eed'2023'0b0bULL;
inline constexpr double boost_theta = 0.4;
inline constexpr double fd_step = 1e-3;        // in units of 1/sigma
inline constexpr double order_target = 2.0;
inline constexpr double order_tolerance = 0.5;

struct Sizes {
    int psi_grid;        // criterion 1, per axis
    int theorem_points;  // criterion 2
    int continuity_points;
    int lorentz_grid;
    int limit_grid;
    int sign_points;
    int sweep_grid;
    int n_traj;
    int determinism_grid;
};

inline Sizes sizes_for(Level level)
{
    if (level == Level::full)
        return {41, 50, 50, 101, 101, 10000, 256, 100, 256};
    return {21, 20, 20, 51, 51, 2500, 64, 100, 64};
}

inline double elapsed(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline bool order_ok(double order)
{
    return std::abs(order - order_target) <= order_tolerance;
}

inline double median(std::vector<double> v)
{
    if (v.empty())
        return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Points drawn uniformly from the central interference square |t|, |x| <= 1/sigma.
inline SpacetimePoint interference_point(const PhysConfig& c, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0 / c.sigma, 1.0 / c.sigma);
    const double t = u(rng);
    const double x = u(rng);
    return {t, x};
}

// ------------------------------------------------------------ criterion 1

inline CriterionResult closed_form_vs_quadrature(const PhysConfig& c, const Sizes& sz)
{
    const auto start = std::chrono::steady_clock::now();
    const QuadratureSpec spec{1e-10, 12.0, 60};
    const double half = 3.0 / c.sigma;
    double max_diff = 0.0;
    double max_psi = 0.0;
    for (int i = 0; i < sz.psi_grid; ++i) {
        for (int k = 0; k < sz.psi_grid; ++k) {
            const SpacetimePoint p{-half + 2.0 * half * i / (sz.psi_grid - 1),
                                   -half + 2.0 * half * k / (sz.psi_grid - 1)};
            const complex closed = psi_closed(c, p).psi;
            const complex quad = psi_quadrature(c, p, spec).value();
            max_diff = std::max(max_diff, std::abs(closed - quad));
            max_psi = std::max(max_psi, std::abs(closed));
        }
    }
    CriterionResult r{1, "closed-form psi matches momentum-space quadrature"};
    r.seconds = elapsed(start);
    const double rel = max_diff / max_psi;
    r.passed = rel < 1e-8 && r.seconds < 30.0;
    r.metrics = {{"grid", sz.psi_grid},         {"max_abs_diff", max_diff}, {"max_psi", max_psi},
                 {"relative_diff", rel},        {"tolerance", 1e-8},        {"quadrature_tol", 1e-10},
                 {"runtime_limit_s", 30.0}};
    return r;
}

// ------------------------------------------------------------ criterion 2

inline CriterionResult mass_theorem(const PhysConfig& c, const Sizes& sz, CriterionResult* diag)
{
    const auto start = std::chrono::steady_clock::now();
    const QuadratureSpec tight{1e-13, 12.0, 400};
    const double h = fd_step / c.sigma;

    double peak4 = 0.0;
    for (int i = 0; i <= 200; ++i)
        for (int k = 0; k <= 200; ++k) {
            const SpacetimePoint p{(-3.0 + 6.0 * i / 200) / c.sigma, (-3.0 + 6.0 * k / 200) / c.sigma};
            peak4 = std::max(peak4, std::pow(psi_closed(c, p).norm_sq(), 2));
        }

    std::mt19937_64 rng(seed + 2);
    auto amplitude = [&](SpacetimePoint q) { return psi_quadrature(c, q, tight).amplitude(); };

    int accepted = 0, rel_failures = 0, order_failures = 0;
    double worst_rel = 0.0, worst_energy_rel = 0.0, worst_richardson_rel = 0.0;
    std::vector<double> orders;
    nlohmann::json failures = nlohmann::json::array();
    while (accepted < sz.theorem_points) {
        const SpacetimePoint p = interference_point(c, rng);
        if (std::pow(psi_closed(c, p).norm_sq(), 2) <= 1e-3 * peak4)
            continue;
        ++accepted;
        const WeakValuePair wv = weak_values_spectral(c, p, tight);
        const double spectral = local_mass_sq(wv);
        const double fd = fd_effective_mass_sq(amplitude, p, h);
        const double fd_half = fd_effective_mass_sq(amplitude, p, 0.5 * h);
        const double rel = std::abs(fd - spectral) / std::abs(spectral);
        const auto rep = convergence_check(
            [&](double step) { return step == h ? fd - spectral : fd_half - spectral; }, h);
        orders.push_back(rep.estimated_order);

        const double energy_scale = std::pow(wv.H_w.real(), 2) + std::pow(wv.p_w.real(), 2);
        const double richardson = (4.0 * fd_half - fd) / 3.0;
        worst_rel = std::max(worst_rel, rel);
        worst_energy_rel = std::max(worst_energy_rel, std::abs(fd - spectral) / energy_scale);
        worst_richardson_rel =
            std::max(worst_richardson_rel, std::abs(richardson - spectral) / std::abs(spectral));
        if (rel >= 1e-4) {
            ++rel_failures;
            failures.push_back({{"t", p.t}, {"x", p.x}, {"spectral", spectral}, {"fd", fd},
                                {"relative_error", rel}});
        }
        if (!order_ok(rep.estimated_order))
            ++order_failures;
    }

    CriterionResult r{2, "local mass (spectral weak values) equals -box R / R (finite differences)"};
    r.seconds = elapsed(start);
    r.passed = rel_failures == 0 && order_failures == 0;
    r.metrics = {{"points", accepted},
                 {"h", h},
                 {"relative_tolerance", 1e-4},
                 {"max_relative_error", worst_rel},
                 {"relative_failures", rel_failures},
                 {"failing_points", failures},
                 {"order_median", median(orders)},
                 {"order_min", *std::min_element(orders.begin(), orders.end())},
                 {"order_max", *std::max_element(orders.begin(), orders.end())},
                 {"order_failures", order_failures},
                 {"order_window", {order_target - order_tolerance, order_target + order_tolerance}}};
    if (diag) {
        diag->id = 2;
        diag->name = "mass theorem: error normalized by (Re H_w)^2 + (Re p_w)^2 and Richardson-"
                     "extrapolated stencil (informational)";
        diag->passed = true;
        diag->metrics = {{"max_error_over_energy_scale", worst_energy_rel},
                         {"max_richardson_relative_error", worst_richardson_rel}};
    }
    return r;
}

// ------------------------------------------------------------ criterion 3

inline CriterionResult continuity(const PhysConfig& c, const Sizes& sz)
{
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(seed + 3);
    const double h = fd_step / c.sigma;
    std::vector<double> orders;
    int failures = 0;
    double worst_fine = 0.0;
    while (static_cast<int>(orders.size()) < sz.continuity_points) {
        const SpacetimePoint p = interference_point(c, rng);
        const PsiJet jet = psi_closed(c, p);
        if (std::abs(jet.psi) < 1e-3 * jet.incoherent)
            continue;
        const auto rep = convergence_check(
            [&](double step) { return continuity_residual(c, p, step, Mode::exact); }, h);
        orders.push_back(rep.estimated_order);
        worst_fine = std::max(worst_fine, rep.err_fine);
        failures += !order_ok(rep.estimated_order);
    }
    CriterionResult r{3, "continuity residual converges at second order (exact mode)"};
    r.seconds = elapsed(start);
    r.passed = failures == 0;
    r.metrics = {{"points", orders.size()},
                 {"h", h},
                 {"order_median", median(orders)},
                 {"order_min", *std::min_element(orders.begin(), orders.end())},
                 {"order_max", *std::max_element(orders.begin(), orders.end())},
                 {"order_failures", failures},
                 {"max_residual_at_h_over_2", worst_fine}};
    return r;
}

// ------------------------------------------------------------ criterion 4

inline CriterionResult lorentz_invariance(const PhysConfig& c, const GridSpec& window,
                                          const Sizes& sz)
{
    const auto start = std::chrono::steady_clock::now();
    const BoostFrame frame(boost_theta);
    const double scale = c.mass_density_scale();
    GridSpec g = window;
    g.nt = g.nx = sz.lorentz_grid;
    double worst_mass = 0.0, worst_ratio = 0.0;
    int ratio_points = 0;
    for (int it = 0; it < g.nt; ++it) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const SpacetimePoint p{g.t_at(it), g.x_at(ix)};
            const FieldSample fs = evaluate_field(c, p, Mode::exact);
            const CurrentSample b = boost_current(frame, {fs.rho, fs.j, Mode::exact});
            const double lab = (fs.rho - fs.j) * (fs.rho + fs.j);
            const double primed = (b.rho - b.j) * (b.rho + b.j);
            worst_mass = std::max(worst_mass, std::abs(primed - lab));
            if (!fs.node && std::abs(b.rho) > 1e-10) {
                ++ratio_points;
                worst_ratio = std::max(worst_ratio,
                                       std::abs(boost_velocity(frame, fs.v) - b.j / b.rho));
            }
        }
    }
    CriterionResult r{4, "mbar^2 is boost invariant and velocity addition matches boosted currents"};
    r.seconds = elapsed(start);
    r.passed = worst_mass < 1e-12 * scale && worst_ratio < 1e-12;
    r.metrics = {{"theta", boost_theta},        {"grid", sz.lorentz_grid},
                 {"max_mbar_sq_change", worst_mass}, {"mbar_sq_tolerance", 1e-12 * scale},
                 {"max_velocity_mismatch", worst_ratio}, {"velocity_tolerance", 1e-12},
                 {"velocity_points", ratio_points}};
    return r;
}

// ------------------------------------------------------------ criterion 5

inline CriterionResult limits(const PhysConfig& c, const GridSpec& window, const Sizes& sz)
{
    const auto start = std::chrono::steady_clock::now();
    const double scale = c.mass_density_scale();
    GridSpec g = window;
    g.nt = g.nx = sz.limit_grid;

    double worst_pure = 0.0;
    for (double a : {0.0, 1.0}) {
        PhysConfig pure = c;
        pure.alpha = a;
        pure = validate(pure);
        for (Mode m : {Mode::exact, Mode::printed})
            for (int it = 0; it < g.nt; ++it)
                for (int ix = 0; ix < g.nx; ++ix)
                    worst_pure = std::max(
                        worst_pure, std::abs(mbar_sq(pure, {g.t_at(it), g.x_at(ix)}, m).mbar_sq));
    }

    // Far field: a wide square, keeping points outside both light cones.
    const int n = 2 * sz.limit_grid;
    const double half = 10.0 / c.sigma;
    double worst_far = 0.0;
    int far_points = 0;
    for (int it = 0; it < n; ++it) {
        for (int ix = 0; ix < n; ++ix) {
            const SpacetimePoint p{-half + 2.0 * half * it / (n - 1), -half + 2.0 * half * ix / (n - 1)};
            if (std::min(std::abs(p.t - p.x), std::abs(p.t + p.x)) * c.sigma <= 6.0)
                continue;
            ++far_points;
            for (Mode m : {Mode::exact, Mode::printed})
                worst_far = std::max(worst_far, std::abs(mbar_sq(c, p, m).mbar_sq));
        }
    }
    CriterionResult r{5, "effective mass density vanishes for pure packets and far from overlap"};
    r.seconds = elapsed(start);
    r.passed = worst_pure < 1e-14 * scale && worst_far < 1e-12 * scale && far_points > 0;
    r.metrics = {{"max_abs_mbar_sq_pure", worst_pure}, {"pure_tolerance", 1e-14 * scale},
                 {"max_abs_mbar_sq_far", worst_far},   {"far_tolerance", 1e-12 * scale},
                 {"far_points", far_points}};
    return r;
}

// ------------------------------------------------------------ criterion 6

inline CriterionResult causal_sign(const PhysConfig& c, const GridSpec& window, const Sizes& sz,
                                   const FieldThresholds& th)
{
    const auto start = std::chrono::steady_clock::now();
    const double tol = th.eps_light * c.mass_density_scale();
    auto sgn = [](double v, double eps) { return v > eps ? 1 : (v < -eps ? -1 : 0); };

    // Smallest square grid that can hold the requested number of points.
    int n = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(sz.sign_points))));
    GridSpec g = window;
    int checked = 0, mismatches = 0, timelike = 0, spacelike = 0;
    for (;; ++n) {
        g.nt = g.nx = n;
        checked = mismatches = timelike = spacelike = 0;
        for (int it = 0; it < g.nt && checked < sz.sign_points; ++it) {
            for (int ix = 0; ix < g.nx && checked < sz.sign_points; ++ix) {
                const FieldSample fs = evaluate_field(c, {g.t_at(it), g.x_at(ix)}, Mode::exact, th);
                if (fs.node)
                    continue;
                ++checked;
                const int s_mass = sgn(fs.mass.mbar_sq, tol);
                const int s_vel = sgn(1.0 - fs.v * fs.v, tol / (fs.rho * fs.rho));
                mismatches += s_mass != s_vel;
                timelike += s_mass > 0;
                spacelike += s_mass < 0;
            }
        }
        if (checked >= sz.sign_points)
            break;
    }
    CriterionResult r{6, "sign(mbar^2) = sign(1 - v^2) at non-node points"};
    r.seconds = elapsed(start);
    r.passed = mismatches == 0 && checked == sz.sign_points;
    r.metrics = {{"points", checked},      {"grid", n},          {"mismatches", mismatches},
                 {"timelike", timelike},   {"spacelike", spacelike}};
    return r;
}

// --------------------------------------------------------- criteria 7, 8

struct FigureOneData {
    std::vector<Trajectory> trajectories;
    double t0 = 0.0;
    double t1 = 0.0;
};

inline FigureOneData figure_one_trajectories(const PhysConfig& c, const GridSpec& window, int n)
{
    FigureOneData d;
    d.t0 = -2.0 / c.sigma;
    d.t1 = std::max(window.t_max, 2.0 / c.sigma);
    StepControl ctrl;
    ctrl.x_min = window.x_min;
    ctrl.x_max = window.x_max;
    const auto x0 = initial_positions(c, n, d.t0, window.x_min, window.x_max);
    d.trajectories = integrate_ensemble(c, x0, d.t0, d.t1, ctrl);
    return d;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b)
{
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

inline CriterionResult figure_one(const PhysConfig& c, const GridSpec& window, const Sizes& sz,
                                  FigureOneData& data, const FieldThresholds& th)
{
    const auto start = std::chrono::steady_clock::now();
    const double tol = th.eps_light * c.mass_density_scale();

    // (a) both signs of mbar^2 inside the overlap zone
    GridSpec g = window;
    g.nt = g.nx = sz.sweep_grid;
    int positive = 0, negative = 0;
    for (int it = 0; it < g.nt; ++it)
        for (int ix = 0; ix < g.nx; ++ix) {
            const SpacetimePoint p{g.t_at(it), g.x_at(ix)};
            if (std::max(std::abs(p.t - p.x), std::abs(p.t + p.x)) * c.sigma >= 2.0)
                continue;
            const double m = mbar_sq(c, p, Mode::exact, th).mbar_sq;
            positive += m > tol;
            negative += m < -tol;
        }
    const bool a_ok = positive > 0 && negative > 0;

    // (b) spacelike runs
    data = figure_one_trajectories(c, window, sz.n_traj);
    int with_spacelike = 0, stalls = 0;
    for (const auto& t : data.trajectories) {
        with_spacelike += !classify_segments(t).spacelike_runs.empty();
        stalls += t.termination == Termination::node_stall;
    }
    const bool b_ok = with_spacelike > 0;

    // (c) trajectory histogram against the density at t = +2/sigma
    constexpr int bins = 32;
    const double t_probe = 2.0 / c.sigma;
    const double width = (window.x_max - window.x_min) / bins;
    std::vector<double> hist(bins, 0.0), density(bins, 0.0);
    int placed = 0;
    for (const auto& t : data.trajectories) {
        if (const auto x = position_at(t, t_probe)) {
            const int b = static_cast<int>(std::floor((*x - window.x_min) / width));
            if (b >= 0 && b < bins) {
                hist[b] += 1.0;
                ++placed;
            }
        }
    }
    constexpr int sub = 64;
    for (int b = 0; b < bins; ++b)
        for (int m = 0; m < sub; ++m)
            density[b] += current(c, {t_probe, window.x_min + width * (b + (m + 0.5) / sub)}).rho
                * width / sub;
    const double corr = pearson(hist, density);
    const bool c_ok = corr > 0.9;

    // (d) ordering preserved at common lab times
    constexpr int probes = 401;
    int crossings = 0, comparisons = 0;
    for (int k = 0; k < probes; ++k) {
        const double t = data.t0 + (t_probe - data.t0) * k / (probes - 1);
        for (std::size_t i = 0; i + 1 < data.trajectories.size(); ++i) {
            const auto xa = position_at(data.trajectories[i], t);
            const auto xb = position_at(data.trajectories[i + 1], t);
            if (!xa || !xb)
                continue;
            ++comparisons;
            crossings += !(*xa < *xb);
        }
    }
    const bool d_ok = crossings == 0 && comparisons > 0;

    CriterionResult r{7, "spacetime diagram of interfering packets (lab frame)"};
    r.seconds = elapsed(start);
    r.passed = a_ok && b_ok && c_ok && d_ok && r.seconds < 60.0;
    r.metrics = {{"a_positive_samples", positive},
                 {"a_negative_samples", negative},
                 {"b_trajectories", data.trajectories.size()},
                 {"b_with_spacelike_run", with_spacelike},
                 {"node_stalls", stalls},
                 {"c_correlation", corr},
                 {"c_trajectories_binned", placed},
                 {"c_threshold", 0.9},
                 {"d_crossings", crossings},
                 {"d_comparisons", comparisons},
                 {"runtime_limit_s", 60.0}};
    return r;
}

inline CriterionResult figure_two(const PhysConfig& c, const FigureOneData& data)
{
    const auto start = std::chrono::steady_clock::now();
    const BoostFrame frame(boost_theta);
    const BoostFrame back = frame.inverse();
    std::size_t n_intervals = 0, samples_checked = 0, violations = 0;
    double worst_point = 0.0, worst_current = 0.0, worst_velocity = 0.0;
    for (const auto& lab : data.trajectories) {
        const Trajectory boosted = boost_trajectory(frame, lab);
        for (const auto& iv : detect_retropropagation(frame, boosted)) {
            ++n_intervals;
            for (std::size_t k = iv.first; k <= iv.last; ++k) {
                const auto& smp = boosted.samples[k];
                // independent re-evaluation: primed-frame field and lab mass density
                const double rho_prime = current_in_frame(c, frame, {smp.t, smp.x}).rho;
                const double m = mbar_sq(c, {lab.samples[k].t, lab.samples[k].x}).mbar_sq;
                ++samples_checked;
                violations += !(rho_prime < 0.0 && m < 0.0);
            }
        }
        const Trajectory restored = boost_trajectory(back, boosted);
        for (std::size_t k = 0; k < lab.samples.size(); ++k) {
            const auto& a = lab.samples[k];
            const auto& b = restored.samples[k];
            worst_point = std::max({worst_point, std::abs(a.t - b.t), std::abs(a.x - b.x)});
            worst_current = std::max({worst_current, std::abs(a.rho - b.rho), std::abs(a.j - b.j)});
            if (std::isfinite(a.v))
                worst_velocity =
                    std::max(worst_velocity, std::abs(a.v - b.v) / std::max(1.0, std::abs(a.v)));
        }
    }
    CriterionResult r{8, "boosted diagram: retropropagation and boost composition"};
    r.seconds = elapsed(start);
    r.passed = n_intervals > 0 && violations == 0 && worst_point < 1e-12 && worst_current < 1e-12
        && worst_velocity < 1e-12;
    r.metrics = {{"theta", boost_theta},
                 {"retro_intervals", n_intervals},
                 {"samples_in_intervals", samples_checked},
                 {"violations", violations},
                 {"composition_max_coordinate_error", worst_point},
                 {"composition_max_current_error", worst_current},
                 {"composition_max_velocity_rel_error", worst_velocity},
                 {"tolerance", 1e-12}};
    return r;
}

// ------------------------------------------------------------ criterion 9

inline CriterionResult determinism(const RunConfig& base, const Sizes& sz,
                                   const FieldThresholds& th)
{
    const auto start = std::chrono::steady_clock::now();
    RunConfig rc = base;
    rc.grid.nt = rc.grid.nx = sz.determinism_grid;
    rc.n_traj = sz.n_traj;
    rc.format = Format::csv;
    rc.mode = Mode::exact;

    auto run = [&] {
        FileSet files;
        for (auto& f : field_command(rc, th).files)
            files.push_back(std::move(f));
        for (auto& f : trajectories_command(rc, th).files)
            files.push_back(std::move(f));
        return files;
    };
    const FileSet first = run();
    const FileSet second = run();
    std::size_t bytes = 0;
    bool identical = first.size() == second.size();
    for (std::size_t i = 0; identical && i < first.size(); ++i) {
        identical = first[i] == second[i];
        bytes += first[i].second.size();
    }
    CriterionResult r{9, "field and trajectory outputs are byte-identical across runs"};
    r.seconds = elapsed(start);
    r.passed = identical;
    r.metrics = {{"files", first.size()}, {"bytes", bytes}, {"grid", sz.determinism_grid}};
    return r;
}

// ----------------------------------------------------------- criterion 10

inline CriterionResult printed_vs_exact(const PhysConfig& c, const GridSpec& window,
                                        const Sizes& sz, CriterionResult* diag)
{
    const auto start = std::chrono::steady_clock::now();
    GridSpec g = window;
    g.nt = g.nx = sz.sweep_grid;
    double d_rho = 0.0, d_mass = 0.0, d_j = 0.0, max_rho = 0.0, max_mass = 0.0, max_j = 0.0;
    for (int it = 0; it < g.nt; ++it)
        for (int ix = 0; ix < g.nx; ++ix) {
            const SpacetimePoint p{g.t_at(it), g.x_at(ix)};
            const auto ce = current(c, p, Mode::exact);
            const auto cp = current(c, p, Mode::printed);
            const double me = mbar_sq(c, p, Mode::exact).mbar_sq;
            const double mp = mbar_sq(c, p, Mode::printed).mbar_sq;
            d_rho = std::max(d_rho, std::abs(ce.rho - cp.rho));
            d_j = std::max(d_j, std::abs(ce.j - cp.j));
            d_mass = std::max(d_mass, std::abs(me - mp));
            max_rho = std::max(max_rho, std::abs(ce.rho));
            max_j = std::max(max_j, std::abs(ce.j));
            max_mass = std::max(max_mass, std::abs(me));
        }
    const double rel_rho = d_rho / max_rho;
    const double rel_mass = max_mass > 0.0 ? d_mass / max_mass : d_mass;
    CriterionResult r{10, "printed closed forms agree with the exact currents to optics accuracy"};
    r.seconds = elapsed(start);
    r.passed = rel_rho < 0.15 && rel_mass < 0.15;
    r.metrics = {{"rho_max_relative_discrepancy", rel_rho},
                 {"mbar_sq_max_relative_discrepancy", rel_mass},
                 {"j_max_relative_discrepancy", max_j > 0.0 ? d_j / max_j : d_j},
                 {"tolerance", 0.15},
                 {"normalization", "max over window of |printed - exact| / max over window of |exact|"}};

    if (diag) {
        // Printed continuity is expected to plateau rather than converge.
        std::mt19937_64 rng(seed + 10);
        const double h = fd_step / c.sigma;
        nlohmann::json pts = nlohmann::json::array();
        for (int i = 0; i < 5; ++i) {
            const SpacetimePoint p = interference_point(c, rng);
            const auto printed = convergence_check(
                [&](double s) { return continuity_residual(c, p, s, Mode::printed); }, h);
            const auto exact = convergence_check(
                [&](double s) { return continuity_residual(c, p, s, Mode::exact); }, h);
            pts.push_back({{"t", p.t},
                           {"x", p.x},
                           {"printed_residual_h", printed.err_coarse},
                           {"printed_residual_h_over_2", printed.err_fine},
                           {"printed_order", printed.estimated_order},
                           {"exact_residual_h_over_2", exact.err_fine}});
        }
        diag->id = 10;
        diag->name = "printed-mode continuity residual (diagnostic, not gating)";
        diag->passed = true;
        diag->metrics = {{"points", pts}};
    }
    return r;
}

} // namespace acceptance

/// Run every acceptance criterion for the physics of `rc`. The Fig. 1 window
/// is the configured grid window.
inline AcceptanceReport run_acceptance(const RunConfig& rc, Level level,
                                       const FieldThresholds& th = {},
                                       const std::function<void(const CriterionResult&)>& on_result
                                       = {})
{
    using namespace acceptance;
    AcceptanceReport rep;
    rep.level = level;
    rep.config = rc;
    const PhysConfig c = validate(rc.physics);
    const Sizes sz = sizes_for(level);
    auto add = [&](CriterionResult r) {
        if (on_result)
            on_result(r);
        rep.criteria.push_back(std::move(r));
    };

    add(closed_form_vs_quadrature(c, sz));
    CriterionResult theorem_diag;
    add(mass_theorem(c, sz, &theorem_diag));
    rep.diagnostics.push_back(theorem_diag);
    add(continuity(c, sz));
    add(lorentz_invariance(c, rc.grid, sz));
    add(limits(c, rc.grid, sz));
    add(causal_sign(c, rc.grid, sz, th));
    FigureOneData fig1;
    add(figure_one(c, rc.grid, sz, fig1, th));
    add(figure_two(c, fig1));
    add(determinism(rc, sz, th));
    CriterionResult printed_diag;
    add(printed_vs_exact(c, rc.grid, sz, &printed_diag));
    rep.diagnostics.push_back(printed_diag);
    return rep;
}

inline nlohmann::json to_json(const CriterionResult& r)
{
    return {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"seconds", r.seconds},
            {"metrics", r.metrics}};
}

inline nlohmann::json to_json(const AcceptanceReport& rep)
{
    nlohmann::json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["level"] = rep.level == Level::full ? "full" : "quick";
    j["config"] = to_json(rep.config);
    j["optics_ratio"] = rep.config.physics.optics_ratio();
    j["optics_warning"] = validate(rep.config.physics).optics_warning;
    j["all_passed"] = rep.all_passed();
    j["criteria"] = nlohmann::json::array();
    for (const auto& c : rep.criteria)
        j["criteria"].push_back(to_json(c));
    j["diagnostics"] = nlohmann::json::array();
    for (const auto& d : rep.diagnostics)
        j["diagnostics"].push_back(to_json(d));
    return j;
}

} // namespace kgbohm
