// kgbohm: command-line front end for the field, trajectory, boost,
// validation and rendering pipelines.

#include <kgbohm/kgbohm.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace kgbohm;

namespace {

enum Exit { ok = 0, validation_failed = 1, config_error = 2, io_error = 3, missing_input = 4 };

struct Options {
    std::string config;
    std::string out;
    std::string in;
    std::optional<std::string> mode;
    std::optional<std::string> format;
    std::optional<int> n;
    std::optional<double> t0;
    double theta = 0.0;
    bool reintegrate = false;
    std::string level = "full";
    double eps_light = FieldThresholds{}.eps_light;
    double rho_min = FieldThresholds{}.rho_min;
};

FieldThresholds thresholds(const Options& o)
{
    if (!(o.eps_light > 0.0) || !(o.rho_min > 0.0))
        throw ConfigError("--eps-light and --rho-min must be positive");
    FieldThresholds th;
    th.eps_light = o.eps_light;
    th.rho_min = o.rho_min;
    return th;
}

RunConfig load_config(const Options& o)
{
    RunConfig rc = load_run_config(o.config);
    if (o.mode)
        rc.mode = parse_mode(*o.mode);
    if (o.format) {
        if (*o.format == "csv")
            rc.format = Format::csv;
        else if (*o.format == "json")
            rc.format = Format::json;
        else
            throw ConfigError("unknown format '" + *o.format + "' (expected csv|json)");
    }
    if (o.n)
        rc.n_traj = *o.n;
    if (o.t0)
        rc.t0 = *o.t0;
    validate(rc);
    return rc;
}

fs::path out_dir(const Options& o, const RunConfig& rc)
{
    return o.out.empty() ? fs::path(rc.output_dir) : fs::path(o.out);
}

void write_all(const fs::path& dir, const FileSet& files)
{
    OutputTransaction tx(dir);
    for (const auto& [name, bytes] : files)
        tx.write(name, bytes);
    tx.commit();
}

int run_field(const Options& o)
{
    const RunConfig rc = load_config(o);
    const auto th = thresholds(o);
    const fs::path dir = out_dir(o, rc);
    const auto res = field_command(rc, th, detail::try_read_meta(dir));
    write_all(dir, res.files);
    std::cout << res.summary << "\n";
    return ok;
}

int run_trajectories(const Options& o)
{
    const RunConfig rc = load_config(o);
    const auto th = thresholds(o);
    const fs::path dir = out_dir(o, rc);
    const auto res = trajectories_command(rc, th, {}, detail::try_read_meta(dir));
    write_all(dir, res.files);
    std::cout << res.summary << "\n";
    return ok;
}

int run_boost(const Options& o)
{
    const RunConfig rc = load_config(o);
    const auto th = thresholds(o);
    if (!(std::abs(o.theta) < 0.95))
        throw ConfigError("boost velocity must satisfy |theta| < 0.95");
    const BoostInputs in = load_boost_inputs(o.in);
    const RunConfig stored = config_from_meta(in.meta);
    if (stored.physics.k0 != rc.physics.k0 || stored.physics.sigma != rc.physics.sigma
        || stored.physics.alpha != rc.physics.alpha)
        throw ConfigError("physics parameters in --config differ from those recorded in "
                          + (fs::path(o.in) / "meta.json").string());
    if (stored.mode != Mode::exact)
        throw ConfigError("boosting requires exact-mode inputs");
    const auto res = boost_command(stored, o.theta, in, th, o.reintegrate);
    write_all(out_dir(o, rc), res.files);
    std::cout << res.summary << "\n";
    return ok;
}

int run_validate(const Options& o)
{
    const RunConfig rc = load_config(o);
    const auto th = thresholds(o);
    const Level level = parse_level(o.level);
    if (validate(rc.physics).optics_warning)
        std::cout << "warning: k0/sigma = " << rc.physics.optics_ratio()
                  << " is below the optics regime; printed-mode comparisons are indicative only\n";
    const auto report = run_acceptance(rc, level, th, [](const CriterionResult& r) {
        std::printf("[%s] criterion %2d: %s (%.2f s)\n", r.passed ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.seconds);
        std::fflush(stdout);
    });
    const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
    write_all(dir, {{"validation_report.json", to_json(report).dump(2) + "\n"}});
    std::cout << (report.all_passed() ? "all criteria passed" : "some criteria failed") << "\n";
    return report.all_passed() ? ok : validation_failed;
}

int run_render(const Options& o)
{
    const fs::path target(o.out);
    const std::string ext = target.extension().string();
    if (ext != ".ppm" && ext != ".svg")
        throw ConfigError("render output must end in .ppm or .svg");
    const RenderInput in = load_render_input(o.in);
    const std::string bytes = ext == ".ppm" ? render_ppm(in) : render_svg(in);
    const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
    write_all(dir, {{target.filename().string(), bytes}});
    std::cout << "render: wrote " << target.string() << "\n";
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bohmian photon trajectories for interfering Klein-Gordon wavepackets"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    Options o;
    app.add_option("--eps-light", o.eps_light, "lightlike band, relative to the mass-density scale");
    app.add_option("--rho-min", o.rho_min, "node threshold, relative to the local intensity");

    auto* field = app.add_subcommand("field", "sample psi, currents and mass density on a grid");
    field->add_option("--config", o.config, "run configuration (JSON)")->required();
    field->add_option("--mode", o.mode, "exact|printed");
    field->add_option("--format", o.format, "csv|json");
    field->add_option("--out", o.out, "output directory");

    auto* traj = app.add_subcommand("trajectories", "integrate guidance trajectories");
    traj->add_option("--config", o.config, "run configuration (JSON)")->required();
    traj->add_option("--n", o.n, "number of trajectories");
    traj->add_option("--t0", o.t0, "start time");
    traj->add_option("--out", o.out, "output directory");

    auto* boost = app.add_subcommand("boost", "transform outputs into a boosted frame");
    boost->add_option("--config", o.config, "run configuration (JSON)")->required();
    boost->add_option("--theta", o.theta, "frame velocity in units of c")->required();
    boost->add_option("--in", o.in, "directory with lab-frame outputs")->required();
    boost->add_option("--out", o.out, "output directory");
    boost->add_flag("--reintegrate", o.reintegrate,
                    "also integrate in the boosted frame and report the deviation");

    auto* val = app.add_subcommand("validate", "run the acceptance suite");
    val->add_option("--config", o.config, "run configuration (JSON)")->required();
    val->add_option("--level", o.level, "quick|full");
    val->add_option("--out", o.out, "directory for validation_report.json (default: .)");

    auto* render = app.add_subcommand("render", "draw the spacetime diagram");
    render->add_option("--in", o.in, "directory with field and trajectory files")->required();
    render->add_option("--out", o.out, "output image (.ppm or .svg)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }

    try {
        if (*field)
            return run_field(o);
        if (*traj)
            return run_trajectories(o);
        if (*boost)
            return run_boost(o);
        if (*val)
            return run_validate(o);
        return run_render(o);
    } catch (const MissingInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return missing_input;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return config_error;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return io_error;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return io_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return io_error;
    }
}
