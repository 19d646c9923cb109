// io.hpp: run configuration and the on-disk formats of the command line tool
//
// Every writer returns the exact bytes it would put on disk, so the same
// functions back both the CLI and the determinism checks.

#pragma once

#include "dynamics.hpp"
#include "fields.hpp"
#include "model.hpp"
#include "relativity.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace kgbohm {

inline constexpr const char* tool_name = "kgbohm";
inline constexpr const char* tool_version = "1.0.0";

struct IoError : Error {
    using Error::Error;
};

struct MissingInputError : Error {
    using Error::Error;
};

enum class Format { csv, json };

struct RunConfig {
    PhysConfig physics;
    GridSpec grid;
    int n_traj = 100;
    double t0 = -2.0;
    std::optional<double> boost_theta;
    Mode mode = Mode::exact;
    std::string output_dir = "out";
    Format format = Format::csv;
    bool render = false;
};

// ------------------------------------------------------------ run config

inline void validate(const RunConfig& rc)
{
    (void)validate(rc.physics);
    validate(rc.grid);
    if (rc.n_traj < 0)
        throw ConfigError("n_traj must be non-negative");
    if (!std::isfinite(rc.t0))
        throw ConfigError("t0 must be finite");
    if (rc.boost_theta && !(std::abs(*rc.boost_theta) < 1.0))
        throw ConfigError("boost_theta must satisfy |theta| < 1");
}

inline nlohmann::json to_json(const RunConfig& rc)
{
    nlohmann::json j;
    j["k0"] = rc.physics.k0;
    j["sigma"] = rc.physics.sigma;
    j["alpha"] = rc.physics.alpha;
    j["t_min"] = rc.grid.t_min;
    j["t_max"] = rc.grid.t_max;
    j["x_min"] = rc.grid.x_min;
    j["x_max"] = rc.grid.x_max;
    j["nt"] = rc.grid.nt;
    j["nx"] = rc.grid.nx;
    j["n_traj"] = rc.n_traj;
    j["t0"] = rc.t0;
    j["boost_theta"] = rc.boost_theta ? nlohmann::json(*rc.boost_theta) : nlohmann::json(nullptr);
    j["mode"] = to_string(rc.mode);
    j["output_dir"] = rc.output_dir;
    j["format"] = rc.format == Format::csv ? "csv" : "json";
    j["render"] = rc.render;
    return j;
}

/// Parse a flat config object; absent keys keep their defaults, unknown keys
/// are rejected.
inline RunConfig run_config_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known = {
        "k0",     "sigma", "alpha",       "t_min", "t_max",      "x_min",  "x_max",  "nt",
        "nx",     "n_traj", "t0",         "boost_theta", "mode", "output_dir", "format", "render"};
    for (const auto& [key, _] : j.items())
        if (!known.contains(key))
            throw ConfigError("unknown config key '" + key + "'");

    RunConfig rc;
    try {
        auto num = [&](const char* key, double& dst) {
            if (j.contains(key))
                dst = j.at(key).get<double>();
        };
        auto integer = [&](const char* key, int& dst) {
            if (j.contains(key))
                dst = j.at(key).get<int>();
        };
        num("k0", rc.physics.k0);
        num("sigma", rc.physics.sigma);
        num("alpha", rc.physics.alpha);
        num("t_min", rc.grid.t_min);
        num("t_max", rc.grid.t_max);
        num("x_min", rc.grid.x_min);
        num("x_max", rc.grid.x_max);
        integer("nt", rc.grid.nt);
        integer("nx", rc.grid.nx);
        integer("n_traj", rc.n_traj);
        num("t0", rc.t0);
        if (j.contains("boost_theta") && !j.at("boost_theta").is_null())
            rc.boost_theta = j.at("boost_theta").get<double>();
        if (j.contains("mode"))
            rc.mode = parse_mode(j.at("mode").get<std::string>());
        if (j.contains("output_dir"))
            rc.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("format")) {
            const auto f = j.at("format").get<std::string>();
            if (f == "csv")
                rc.format = Format::csv;
            else if (f == "json")
                rc.format = Format::json;
            else
                throw ConfigError("unknown format '" + f + "' (expected csv|json)");
        }
        if (j.contains("render"))
            rc.render = j.at("render").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
    rc.physics = validate(rc.physics);
    validate(rc);
    return rc;
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw MissingInputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline RunConfig load_run_config(const std::filesystem::path& path)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const MissingInputError& e) {
        throw ConfigError(e.what());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return run_config_from_json(j);
}

// ---------------------------------------------------------------- numbers

/// 17 significant digits; round-trips every double.
inline std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s)
{
    if (s == "nan")
        return std::nan("");
    if (s == "inf")
        return INFINITY;
    if (s == "-inf")
        return -INFINITY;
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end)
        throw IoError("malformed number '" + s + "'");
    return v;
}

inline nlohmann::json json_number(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

// ------------------------------------------------------------------ field

inline constexpr const char* field_header = "t,x,psi_re,psi_im,rho,j,v,mbar_sq,meff_sq,class";
inline constexpr const char* field_boosted_header =
    "t_prime,x_prime,psi_re,psi_im,rho_prime,j_prime,v_prime,mbar_sq,meff_sq,class";

/// One serialized field row; coordinates and currents may be primed.
struct FieldRow {
    double t = 0.0;
    double x = 0.0;
    double psi_re = 0.0;
    double psi_im = 0.0;
    double rho = 0.0;
    double j = 0.0;
    double v = 0.0;
    double mbar_sq = 0.0;
    double meff_sq = 0.0;
    char cls = 'L';
};

inline FieldRow to_row(const FieldSample& s)
{
    return {s.point.t, s.point.x,     s.psi.real(),   s.psi.imag(), s.rho,
            s.j,       s.v,           s.mass.mbar_sq, s.mass.meff_sq, s.class_code()};
}

/// Row-major sweep (t outer, x inner) over the grid.
inline std::vector<FieldRow> sweep_field(const PhysConfig& config, const GridSpec& grid,
                                         Mode mode = Mode::exact, const FieldThresholds& th = {})
{
    validate(grid);
    std::vector<FieldRow> rows;
    rows.reserve(grid.size());
    for (int it = 0; it < grid.nt; ++it)
        for (int ix = 0; ix < grid.nx; ++ix)
            rows.push_back(to_row(evaluate_field(config, {grid.t_at(it), grid.x_at(ix)}, mode, th)));
    return rows;
}

inline std::string field_csv(const std::vector<FieldRow>& rows, bool primed = false)
{
    std::string out = primed ? field_boosted_header : field_header;
    out += '\n';
    for (const auto& r : rows) {
        for (double v : {r.t, r.x, r.psi_re, r.psi_im, r.rho, r.j, r.v, r.mbar_sq, r.meff_sq}) {
            out += format_double(v);
            out += ',';
        }
        out += r.cls;
        out += '\n';
    }
    return out;
}

inline std::string field_json(const std::vector<FieldRow>& rows, bool primed = false)
{
    nlohmann::json j;
    std::vector<std::string> cols;
    std::stringstream ss(primed ? field_boosted_header : field_header);
    for (std::string c; std::getline(ss, c, ',');)
        cols.push_back(c);
    j["columns"] = cols;
    nlohmann::json data = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row = nlohmann::json::array();
        for (double v : {r.t, r.x, r.psi_re, r.psi_im, r.rho, r.j, r.v, r.mbar_sq, r.meff_sq})
            row.push_back(json_number(v));
        row.push_back(std::string(1, r.cls));
        data.push_back(row);
    }
    j["rows"] = data;
    return j.dump() + "\n";
}

inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');)
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

inline std::vector<FieldRow> parse_field_csv(const std::string& text)
{
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || (line != field_header && line != field_boosted_header))
        throw IoError("unexpected field file header");
    std::vector<FieldRow> rows;
    while (std::getline(ss, line)) {
        if (line.empty())
            continue;
        const auto c = split_csv_line(line);
        if (c.size() != 10 || c[9].size() != 1)
            throw IoError("malformed field row: " + line);
        rows.push_back({parse_double(c[0]), parse_double(c[1]), parse_double(c[2]),
                        parse_double(c[3]), parse_double(c[4]), parse_double(c[5]),
                        parse_double(c[6]), parse_double(c[7]), parse_double(c[8]), c[9][0]});
    }
    return rows;
}

// ----------------------------------------------------------- trajectories

inline constexpr const char* traj_header = "traj_id,s,t,x,v,mbar_sq,class,termination";
inline constexpr const char* traj_boosted_header =
    "traj_id,s,t_prime,x_prime,v_prime,mbar_sq,class,termination,retro";

struct TrajRow {
    int traj_id = 0;
    double s = 0.0;
    double t = 0.0;
    double x = 0.0;
    double v = 0.0;
    double mbar_sq = 0.0;
    char cls = 'L';
    Termination termination = Termination::completed;
    bool retro = false;
};

inline Termination parse_termination(const std::string& s)
{
    if (s == "completed")
        return Termination::completed;
    if (s == "left_window")
        return Termination::left_window;
    if (s == "node_stall")
        return Termination::node_stall;
    throw IoError("unknown termination '" + s + "'");
}

inline std::vector<TrajRow> to_rows(const std::vector<Trajectory>& trajs)
{
    std::vector<TrajRow> rows;
    for (std::size_t id = 0; id < trajs.size(); ++id)
        for (const auto& smp : trajs[id].samples)
            rows.push_back({static_cast<int>(id), smp.s, smp.t, smp.x, smp.v, smp.mbar_sq,
                            class_letter(smp.causal_class), trajs[id].termination, false});
    return rows;
}

inline std::string traj_csv(const std::vector<TrajRow>& rows, bool boosted = false)
{
    std::string out = boosted ? traj_boosted_header : traj_header;
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.traj_id);
        for (double v : {r.s, r.t, r.x, r.v, r.mbar_sq}) {
            out += ',';
            out += format_double(v);
        }
        out += ',';
        out += r.cls;
        out += ',';
        out += to_string(r.termination);
        if (boosted)
            out += r.retro ? ",1" : ",0";
        out += '\n';
    }
    return out;
}

inline std::vector<TrajRow> parse_traj_csv(const std::string& text)
{
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || (line != traj_header && line != traj_boosted_header))
        throw IoError("unexpected trajectory file header");
    const bool boosted = line == traj_boosted_header;
    std::vector<TrajRow> rows;
    while (std::getline(ss, line)) {
        if (line.empty())
            continue;
        const auto c = split_csv_line(line);
        if (c.size() != (boosted ? 9u : 8u) || c[6].size() != 1)
            throw IoError("malformed trajectory row: " + line);
        TrajRow r;
        try {
            r.traj_id = std::stoi(c[0]);
        } catch (const std::exception&) {
            throw IoError("malformed trajectory id: " + c[0]);
        }
        r.s = parse_double(c[1]);
        r.t = parse_double(c[2]);
        r.x = parse_double(c[3]);
        r.v = parse_double(c[4]);
        r.mbar_sq = parse_double(c[5]);
        r.cls = c[6][0];
        r.termination = parse_termination(c[7]);
        r.retro = boosted && c[8] == "1";
        rows.push_back(r);
    }
    return rows;
}

// ------------------------------------------------------------------- meta

inline nlohmann::json make_meta(const std::string& command, const RunConfig& rc,
                                const FieldThresholds& th, double frame_theta)
{
    nlohmann::json m;
    m["tool"] = tool_name;
    m["version"] = tool_version;
    m["command"] = command;
    m["config"] = to_json(rc);
    m["thresholds"] = {{"eps_light", th.eps_light},
                       {"rho_min", th.rho_min},
                       {"meff_reliability", th.meff_reliability}};
    m["frame_theta"] = frame_theta;
    m["units"] = {{"hbar", hbar}, {"c", c_light}};
    return m;
}

/// Integrator defaults recorded so trajectory outputs are self-describing.
inline nlohmann::json integrator_meta(const RunConfig& rc, const StepControl& ctrl)
{
    const double t1 = rc.grid.t_max;
    return {{"method", "rk4_fixed_affine_step"},
            {"parameterization", "unit_speed_affine"},
            {"t0", rc.t0},
            {"t1", t1},
            {"affine_step", rc.t0 < t1 ? affine_step(rc.physics, rc.t0, t1, ctrl) : 0.0},
            {"max_advance_over_sigma", ctrl.max_advance},
            {"initial_conditions", "rho_quantiles_4096_trapezoid"},
            {"n_traj", rc.n_traj},
            {"window", {rc.grid.x_min, rc.grid.x_max}}};
}

// ------------------------------------------------------------ retro json

inline nlohmann::json retro_json(const BoostFrame& frame,
                                 const std::vector<std::vector<RetroInterval>>& per_traj)
{
    nlohmann::json j;
    j["theta"] = frame.theta();
    j["gamma"] = frame.gamma();
    nlohmann::json list = nlohmann::json::array();
    std::size_t total = 0;
    for (std::size_t id = 0; id < per_traj.size(); ++id) {
        for (const auto& iv : per_traj[id]) {
            list.push_back({{"traj_id", id},
                            {"s_start", iv.s_start},
                            {"s_end", iv.s_end},
                            {"n_samples", iv.last - iv.first + 1},
                            {"min_rho_prime", iv.min_rho_prime},
                            {"max_rho_prime", iv.max_rho_prime},
                            {"max_mbar_sq", iv.max_mbar_sq},
                            {"min_rho_lab", iv.min_rho_lab},
                            {"max_rho_lab", iv.max_rho_lab}});
            ++total;
        }
    }
    j["count"] = total;
    j["intervals"] = list;
    return j;
}

// ---------------------------------------------------------------- writing

/// Writes files through a temporary name; if commit() never runs, every
/// file already written is removed again.
class OutputTransaction {
public:
    explicit OutputTransaction(std::filesystem::path dir) : dir_(std::move(dir))
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
    }
    OutputTransaction(const OutputTransaction&) = delete;
    OutputTransaction& operator=(const OutputTransaction&) = delete;

    ~OutputTransaction()
    {
        if (committed_)
            return;
        std::error_code ec;
        for (const auto& p : written_)
            std::filesystem::remove(p, ec);
    }

    void write(const std::string& name, const std::string& bytes)
    {
        const auto path = dir_ / name;
        const auto tmp = dir_ / (name + ".partial");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw IoError("cannot write " + tmp.string());
            out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            if (!out)
                throw IoError("write failed for " + tmp.string());
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
        if (ec) {
            std::filesystem::remove(tmp, ec);
            throw IoError("cannot move " + tmp.string() + " into place");
        }
        written_.push_back(path);
    }

    void commit() { committed_ = true; }

    [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
    bool committed_ = false;
};

} // namespace kgbohm
