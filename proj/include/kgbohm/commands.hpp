// commands.hpp: the field / trajectories / boost / render pipelines
//
// Each command returns the files it produces as (name, bytes) pairs; the
// caller decides where and how they are written.

#pragma once

#include "dynamics.hpp"
#include "fields.hpp"
#include "io.hpp"
#include "relativity.hpp"
#include "render.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kgbohm {

using FileSet = std::vector<std::pair<std::string, std::string>>;

struct CommandOutput {
    FileSet files;
    std::string summary;
};

namespace detail {

/// Merge a command section into an existing meta.json when it describes the
/// same configuration; otherwise start afresh.
inline nlohmann::json merged_meta(const std::optional<nlohmann::json>& existing,
                                  const nlohmann::json& base, const std::string& section,
                                  const nlohmann::json& payload)
{
    nlohmann::json meta = base;
    if (existing && existing->contains("config") && (*existing)["config"] == base["config"]
        && existing->value("frame_theta", 0.0) == 0.0 && existing->contains("commands"))
        meta["commands"] = (*existing)["commands"];
    meta["commands"][section] = payload;
    meta.erase("command");
    return meta;
}

inline std::optional<nlohmann::json> try_read_meta(const std::filesystem::path& dir)
{
    const auto path = dir / "meta.json";
    if (!std::filesystem::exists(path))
        return std::nullopt;
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

} // namespace detail

inline CommandOutput field_command(const RunConfig& rc, const FieldThresholds& th = {},
                                   const std::optional<nlohmann::json>& existing_meta = std::nullopt)
{
    const auto rows = sweep_field(rc.physics, rc.grid, rc.mode, th);
    CommandOutput out;
    const bool csv = rc.format == Format::csv;
    out.files.emplace_back(csv ? "field.csv" : "field.json",
                           csv ? field_csv(rows) : field_json(rows));

    std::size_t nodes = 0;
    for (const auto& r : rows)
        nodes += r.cls == 'N';
    const nlohmann::json payload = {{"nt", rc.grid.nt},
                                    {"nx", rc.grid.nx},
                                    {"rows", rows.size()},
                                    {"order", "t_outer_x_inner"},
                                    {"file", csv ? "field.csv" : "field.json"}};
    const auto meta = detail::merged_meta(existing_meta, make_meta("field", rc, th, 0.0), "field",
                                          payload);
    out.files.emplace_back("meta.json", meta.dump(2) + "\n");
    out.summary = "field: " + std::to_string(rows.size()) + " samples, " + std::to_string(nodes)
        + " node/unreliable" + (rc.physics.optics_warning ? " (optics warning: k0/sigma < 5)" : "");
    return out;
}

inline CommandOutput trajectories_command(const RunConfig& rc, const FieldThresholds& th = {},
                                          const StepControl& base_ctrl = {},
                                          const std::optional<nlohmann::json>& existing_meta
                                          = std::nullopt)
{
    StepControl ctrl = base_ctrl;
    ctrl.x_min = rc.grid.x_min;
    ctrl.x_max = rc.grid.x_max;
    const double t1 = rc.grid.t_max;

    std::vector<Trajectory> trajs;
    if (rc.n_traj > 0) {
        if (!(rc.t0 < t1))
            throw ConfigError("trajectory start t0 must lie before the window end t_max");
        const auto x0 = initial_positions(rc.physics, rc.n_traj, rc.t0, rc.grid.x_min,
                                          rc.grid.x_max, rc.mode);
        trajs = integrate_ensemble(rc.physics, x0, rc.t0, t1, ctrl, rc.mode, th);
    }

    CommandOutput out;
    out.files.emplace_back("traj.csv", traj_csv(to_rows(trajs)));
    const auto meta = detail::merged_meta(existing_meta, make_meta("trajectories", rc, th, 0.0),
                                          "trajectories", integrator_meta(rc, ctrl));
    out.files.emplace_back("meta.json", meta.dump(2) + "\n");

    int stalls = 0, left = 0, spacelike = 0;
    for (const auto& t : trajs) {
        stalls += t.termination == Termination::node_stall;
        left += t.termination == Termination::left_window;
        spacelike += t.samples.empty() ? 0 : !classify_segments(t).spacelike_runs.empty();
    }
    out.summary = "trajectories: " + std::to_string(trajs.size()) + " integrated, "
        + std::to_string(stalls) + " node_stall, " + std::to_string(left) + " left_window, "
        + std::to_string(spacelike) + " with spacelike runs";
    return out;
}

/// Rebuild lab-frame trajectories from serialized rows (possibly primed
/// with respect to `file_frame`), recomputing exact currents and tangents.
inline std::vector<Trajectory> rebuild_lab_trajectories(const PhysConfig& config,
                                                        const BoostFrame& file_frame,
                                                        const std::vector<TrajRow>& rows,
                                                        const FieldThresholds& th = {})
{
    std::map<int, Trajectory> by_id;
    const BoostFrame back = file_frame.inverse();
    for (const auto& r : rows) {
        const SpacetimePoint lab = boost_point(back, {r.t, r.x});
        auto& traj = by_id[r.traj_id];
        traj.termination = r.termination;
        traj.samples.push_back(detail::make_sample(config, r.s, lab, Mode::exact, th));
    }
    std::vector<Trajectory> out;
    for (auto& [id, t] : by_id)
        out.push_back(std::move(t));
    return out;
}

struct BoostInputs {
    std::vector<FieldRow> field;
    std::vector<TrajRow> trajectories;
    nlohmann::json meta;
};

inline BoostInputs load_boost_inputs(const std::filesystem::path& dir)
{
    BoostInputs in;
    const auto meta_path = dir / "meta.json";
    if (!std::filesystem::exists(meta_path))
        throw MissingInputError("missing " + meta_path.string());
    try {
        in.meta = nlohmann::json::parse(read_file(meta_path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse " + meta_path.string() + ": " + e.what());
    }
    const bool boosted = in.meta.value("boosted", false);
    const auto field_path = dir / (boosted ? "field_boosted.csv" : "field.csv");
    const auto traj_path = dir / (boosted ? "traj_boosted.csv" : "traj.csv");
    if (!std::filesystem::exists(field_path))
        throw MissingInputError("missing " + field_path.string());
    if (!std::filesystem::exists(traj_path))
        throw MissingInputError("missing " + traj_path.string());
    in.field = parse_field_csv(read_file(field_path));
    in.trajectories = parse_traj_csv(read_file(traj_path));
    return in;
}

inline RunConfig config_from_meta(const nlohmann::json& meta)
{
    if (!meta.contains("config"))
        throw ConfigError("meta.json carries no configuration");
    return run_config_from_json(meta.at("config"));
}

/// Boost serialized lab (or already boosted) outputs by `theta`.
inline CommandOutput boost_command(const RunConfig& rc, double theta, const BoostInputs& in,
                                   const FieldThresholds& th = {}, bool reintegrate = false)
{
    if (!(std::abs(theta) < 0.95))
        throw ConfigError("boost velocity must satisfy |theta| < 0.95");
    if (rc.mode != Mode::exact)
        throw ConfigError("boosting requires exact-mode inputs");
    const BoostFrame step(theta);
    const BoostFrame file_frame(in.meta.value("frame_theta", 0.0));
    const BoostFrame total = file_frame.then(step);

    std::vector<FieldRow> field = in.field;
    for (auto& r : field) {
        const SpacetimePoint p = boost_point(step, {r.t, r.x});
        const CurrentSample cs = boost_current(step, {r.rho, r.j, Mode::exact});
        r.t = p.t;
        r.x = p.x;
        r.rho = cs.rho;
        r.j = cs.j;
        r.v = boost_velocity(step, r.v);
    }

    const auto lab = rebuild_lab_trajectories(rc.physics, file_frame, in.trajectories, th);
    std::vector<std::vector<RetroInterval>> intervals;
    std::vector<bool> retro_flags;
    for (const auto& t : lab) {
        const Trajectory b = boost_trajectory(total, t);
        intervals.push_back(detect_retropropagation(total, b));
        for (const auto& smp : b.samples)
            retro_flags.push_back(smp.dt_ds < 0.0);
    }

    std::vector<TrajRow> traj = in.trajectories;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        auto& r = traj[i];
        const SpacetimePoint p = boost_point(step, {r.t, r.x});
        r.t = p.t;
        r.x = p.x;
        r.v = boost_velocity(step, r.v);
        r.retro = retro_flags[i];
    }

    CommandOutput out;
    out.files.emplace_back("field_boosted.csv", field_csv(field, true));
    out.files.emplace_back("traj_boosted.csv", traj_csv(traj, true));
    out.files.emplace_back("retro_intervals.json", retro_json(total, intervals).dump(2) + "\n");

    nlohmann::json meta = in.meta;
    meta["command"] = "boost";
    meta["boosted"] = true;
    meta["theta_applied"] = theta;
    meta["input_frame_theta"] = file_frame.theta();
    meta["frame_theta"] = total.theta();

    if (reintegrate) {
        nlohmann::json checks = nlohmann::json::array();
        for (std::size_t id = 0; id < lab.size() && checks.size() < 5; ++id) {
            if (intervals[id].empty() || lab[id].samples.size() < 2)
                continue;
            const Trajectory b = boost_trajectory(total, lab[id]);
            double arc = 0.0;
            for (std::size_t k = 0; k + 1 < b.samples.size(); ++k)
                arc += std::hypot(b.samples[k + 1].t - b.samples[k].t,
                                  b.samples[k + 1].x - b.samples[k].x);
            const Trajectory primed = integrate_in_frame(
                rc.physics, total, {b.samples.front().t, b.samples.front().x}, 0.98 * arc,
                0.002 / rc.physics.sigma, th);
            checks.push_back({{"traj_id", id},
                              {"max_deviation", max_deviation_from(lab[id], total, primed)},
                              {"termination", to_string(primed.termination)}});
        }
        out.files.emplace_back("reintegration.json", checks.dump(2) + "\n");
    }
    out.files.emplace_back("meta.json", meta.dump(2) + "\n");

    std::size_t n_intervals = 0;
    for (const auto& v : intervals)
        n_intervals += v.size();
    out.summary = "boost: theta=" + format_double(theta) + ", frame theta="
        + format_double(total.theta()) + ", " + std::to_string(n_intervals)
        + " retropropagation intervals";
    return out;
}

inline RenderInput load_render_input(const std::filesystem::path& dir)
{
    const auto meta_path = dir / "meta.json";
    if (!std::filesystem::exists(meta_path))
        throw MissingInputError("missing " + meta_path.string());
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_file(meta_path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse " + meta_path.string() + ": " + e.what());
    }
    const bool boosted = meta.value("boosted", false);
    const auto field_path = dir / (boosted ? "field_boosted.csv" : "field.csv");
    const auto traj_path = dir / (boosted ? "traj_boosted.csv" : "traj.csv");
    if (!std::filesystem::exists(field_path))
        throw MissingInputError("missing " + field_path.string());
    if (!std::filesystem::exists(traj_path))
        throw MissingInputError("missing " + traj_path.string());

    RenderInput in;
    in.field = parse_field_csv(read_file(field_path));
    in.trajectories = parse_traj_csv(read_file(traj_path));
    in.primed = boosted;
    try {
        const auto& f = meta.at("commands").at("field");
        in.nt = f.at("nt").get<int>();
        in.nx = f.at("nx").get<int>();
    } catch (const nlohmann::json::exception&) {
        throw MissingInputError("meta.json lacks the field grid dimensions");
    }
    return in;
}

} // namespace kgbohm
