#include <kgbohm/commands.hpp>
#include <kgbohm/io.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

using namespace kgbohm;
namespace fs = std::filesystem;

namespace {

RunConfig small_config()
{
    RunConfig rc;
    rc.grid.nt = 17;
    rc.grid.nx = 21;
    rc.n_traj = 8;
    return rc;
}

const std::string& file(const FileSet& files, const std::string& name)
{
    for (const auto& [n, bytes] : files)
        if (n == name)
            return bytes;
    throw std::runtime_error("no file " + name);
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("kgbohm_test_" + name);
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST(Numbers, SeventeenDigitRoundTrip)
{
    for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 1.7976931348623157e308})
        EXPECT_EQ(parse_double(format_double(v)), v);
    EXPECT_TRUE(std::isnan(parse_double(format_double(std::nan("")))));
    EXPECT_EQ(parse_double(format_double(-std::numeric_limits<double>::infinity())),
              -std::numeric_limits<double>::infinity());
    EXPECT_THROW((void)parse_double("1.5x"), IoError);
    EXPECT_THROW((void)parse_double(""), IoError);
}

TEST(RunConfigJson, DefaultsAndRoundTrip)
{
    const RunConfig rc = run_config_from_json(nlohmann::json::object());
    EXPECT_EQ(rc.physics.k0, 10.0);
    EXPECT_EQ(rc.grid.nt, 256);
    EXPECT_FALSE(rc.boost_theta.has_value());
    RunConfig custom = rc;
    custom.physics.alpha = 0.25;
    custom.boost_theta = 0.4;
    custom.mode = Mode::printed;
    custom.format = Format::json;
    const RunConfig back = run_config_from_json(to_json(custom));
    EXPECT_EQ(to_json(back), to_json(custom));
}

TEST(RunConfigJson, RejectsUnknownKeysAndBadValues)
{
    EXPECT_THROW((void)run_config_from_json({{"k_0", 10.0}}), ConfigError);
    EXPECT_THROW((void)run_config_from_json({{"alpha", 1.5}}), ConfigError);
    EXPECT_THROW((void)run_config_from_json({{"alpha", "high"}}), ConfigError);
    EXPECT_THROW((void)run_config_from_json({{"format", "xml"}}), ConfigError);
    EXPECT_THROW((void)run_config_from_json({{"n_traj", -1}}), ConfigError);
    EXPECT_THROW((void)run_config_from_json({{"boost_theta", 1.0}}), ConfigError);
    EXPECT_THROW((void)run_config_from_json(nlohmann::json::array()), ConfigError);
}

TEST(RunConfigJson, LowOpticsRatioIsRecorded)
{
    const RunConfig rc = run_config_from_json({{"k0", 3.0}});
    EXPECT_TRUE(rc.physics.optics_warning);
}

TEST(FieldFiles, CsvRoundTripAndLayout)
{
    const RunConfig rc = small_config();
    const auto rows = sweep_field(rc.physics, rc.grid);
    ASSERT_EQ(rows.size(), rc.grid.size());
    EXPECT_EQ(rows[1].t, rc.grid.t_at(0));
    EXPECT_EQ(rows[1].x, rc.grid.x_at(1));
    EXPECT_EQ(rows[rc.grid.nx].t, rc.grid.t_at(1));
    const std::string csv = field_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), field_header);
    const auto parsed = parse_field_csv(csv);
    ASSERT_EQ(parsed.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(parsed[i].rho, rows[i].rho);
        EXPECT_EQ(parsed[i].mbar_sq, rows[i].mbar_sq);
        EXPECT_EQ(parsed[i].cls, rows[i].cls);
    }
    EXPECT_EQ(field_csv(parsed), csv);
}

TEST(FieldFiles, JsonHasColumnsAndRows)
{
    const RunConfig rc = small_config();
    const auto j = nlohmann::json::parse(field_json(sweep_field(rc.physics, rc.grid)));
    EXPECT_EQ(j["columns"].size(), 10u);
    EXPECT_EQ(j["rows"].size(), rc.grid.size());
}

TEST(FieldFiles, MalformedInputIsRejected)
{
    EXPECT_THROW((void)parse_field_csv("a,b\n"), IoError);
    EXPECT_THROW((void)parse_field_csv(std::string(field_header) + "\n1,2,3\n"), IoError);
}

TEST(FieldCommand, ReferenceGridSizeAndMeta)
{
    RunConfig rc;
    const auto out = field_command(rc);
    const std::string& csv = file(out.files, "field.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 65537);
    const auto meta = nlohmann::json::parse(file(out.files, "meta.json"));
    EXPECT_EQ(meta["commands"]["field"]["nt"], 256);
    EXPECT_EQ(meta["version"], tool_version);
    EXPECT_EQ(run_config_from_json(meta["config"]).physics, validate(rc.physics));
}

TEST(FieldCommand, SinglePacketIsLightlikeEverywhere)
{
    RunConfig rc = small_config();
    rc.physics.alpha = 1.0;
    for (const auto& r : parse_field_csv(file(field_command(rc).files, "field.csv"))) {
        EXPECT_EQ(r.cls, 'L');
        EXPECT_EQ(r.mbar_sq, 0.0);
        EXPECT_EQ(r.v, 1.0);
    }
}

TEST(FieldCommand, Deterministic)
{
    const RunConfig rc = small_config();
    EXPECT_EQ(field_command(rc).files, field_command(rc).files);
    EXPECT_EQ(trajectories_command(rc).files, trajectories_command(rc).files);
}

TEST(TrajectoriesCommand, BalancedSingleTrajectoryIsStationary)
{
    RunConfig rc = small_config();
    rc.physics.alpha = 0.5;
    rc.n_traj = 1;
    const auto rows = parse_traj_csv(file(trajectories_command(rc).files, "traj.csv"));
    ASSERT_FALSE(rows.empty());
    // The axis is unstable once the packets separate, so the 1e-12 offset of
    // the numerical median grows slowly towards the end of the window.
    for (const auto& r : rows) {
        EXPECT_EQ(r.traj_id, 0);
        EXPECT_NEAR(r.x, 0.0, 1e-6);
    }
}

TEST(TrajectoriesCommand, ZeroTrajectoriesGivesHeaderOnly)
{
    RunConfig rc = small_config();
    rc.n_traj = 0;
    EXPECT_EQ(file(trajectories_command(rc).files, "traj.csv"), std::string(traj_header) + "\n");
}

TEST(TrajectoriesCommand, IdsFollowInitialOrder)
{
    const RunConfig rc = small_config();
    const auto rows = parse_traj_csv(file(trajectories_command(rc).files, "traj.csv"));
    int last_id = -1;
    double last_x0 = -1e300;
    for (const auto& r : rows) {
        if (r.traj_id != last_id) {
            EXPECT_EQ(r.traj_id, last_id + 1);
            EXPECT_GT(r.x, last_x0);
            EXPECT_EQ(r.s, 0.0);
            EXPECT_EQ(r.t, rc.t0);
            last_id = r.traj_id;
            last_x0 = r.x;
        }
    }
    EXPECT_EQ(last_id, rc.n_traj - 1);
}

TEST(MetaMerging, FieldAndTrajectoriesShareOneMeta)
{
    const RunConfig rc = small_config();
    const auto f = field_command(rc);
    const auto meta1 = nlohmann::json::parse(file(f.files, "meta.json"));
    const auto t = trajectories_command(rc, {}, {}, meta1);
    const auto meta2 = nlohmann::json::parse(file(t.files, "meta.json"));
    EXPECT_TRUE(meta2["commands"].contains("field"));
    EXPECT_TRUE(meta2["commands"].contains("trajectories"));

    RunConfig other = rc;
    other.physics.alpha = 0.3;
    const auto fresh = nlohmann::json::parse(
        file(trajectories_command(other, {}, {}, meta1).files, "meta.json"));
    EXPECT_FALSE(fresh["commands"].contains("field"));
}

namespace {
BoostInputs lab_inputs(const RunConfig& rc)
{
    const auto f = field_command(rc);
    const auto meta = nlohmann::json::parse(file(f.files, "meta.json"));
    const auto t = trajectories_command(rc, {}, {}, meta);
    BoostInputs in;
    in.field = parse_field_csv(file(f.files, "field.csv"));
    in.trajectories = parse_traj_csv(file(t.files, "traj.csv"));
    in.meta = nlohmann::json::parse(file(t.files, "meta.json"));
    return in;
}

BoostInputs reload(const FileSet& files)
{
    BoostInputs in;
    in.field = parse_field_csv(file(files, "field_boosted.csv"));
    in.trajectories = parse_traj_csv(file(files, "traj_boosted.csv"));
    in.meta = nlohmann::json::parse(file(files, "meta.json"));
    return in;
}
} // namespace

TEST(BoostCommand, IdentityBoostKeepsValues)
{
    const RunConfig rc = small_config();
    const BoostInputs in = lab_inputs(rc);
    const auto out = boost_command(rc, 0.0, in);
    const std::string boosted = file(out.files, "field_boosted.csv");
    const std::string lab = field_csv(in.field);
    EXPECT_EQ(boosted.substr(boosted.find('\n')), lab.substr(lab.find('\n')));
    const auto traj = parse_traj_csv(file(out.files, "traj_boosted.csv"));
    ASSERT_EQ(traj.size(), in.trajectories.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        EXPECT_EQ(traj[i].t, in.trajectories[i].t);
        EXPECT_EQ(traj[i].x, in.trajectories[i].x);
        EXPECT_FALSE(traj[i].retro);
    }
    EXPECT_EQ(nlohmann::json::parse(file(out.files, "retro_intervals.json"))["count"], 0);
}

TEST(BoostCommand, FigureTwoHasRetropropagation)
{
    RunConfig rc = small_config();
    rc.n_traj = 30;
    const auto out = boost_command(rc, 0.4, lab_inputs(rc));
    const auto retro = nlohmann::json::parse(file(out.files, "retro_intervals.json"));
    EXPECT_GT(retro["count"].get<int>(), 0);
    for (const auto& iv : retro["intervals"]) {
        EXPECT_LT(iv["max_rho_prime"].get<double>(), 0.0);
        EXPECT_LT(iv["max_mbar_sq"].get<double>(), 0.0);
    }
    int flagged = 0;
    for (const auto& r : parse_traj_csv(file(out.files, "traj_boosted.csv")))
        flagged += r.retro;
    EXPECT_GT(flagged, 0);
    const auto meta = nlohmann::json::parse(file(out.files, "meta.json"));
    EXPECT_TRUE(meta["boosted"].get<bool>());
    EXPECT_DOUBLE_EQ(meta["frame_theta"].get<double>(), 0.4);
}

TEST(BoostCommand, ForwardThenBackwardRestoresOriginals)
{
    const RunConfig rc = small_config();
    const BoostInputs in = lab_inputs(rc);
    const auto there = boost_command(rc, 0.4, in);
    const auto back = boost_command(rc, -0.4, reload(there.files));
    const auto field = parse_field_csv(file(back.files, "field_boosted.csv"));
    ASSERT_EQ(field.size(), in.field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        EXPECT_NEAR(field[i].t, in.field[i].t, 1e-12);
        EXPECT_NEAR(field[i].x, in.field[i].x, 1e-12);
        EXPECT_NEAR(field[i].rho, in.field[i].rho, 1e-12);
        EXPECT_NEAR(field[i].j, in.field[i].j, 1e-12);
        EXPECT_NEAR(field[i].v, in.field[i].v, 1e-12 * std::max(1.0, std::abs(in.field[i].v)));
    }
    const auto traj = parse_traj_csv(file(back.files, "traj_boosted.csv"));
    ASSERT_EQ(traj.size(), in.trajectories.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        EXPECT_NEAR(traj[i].t, in.trajectories[i].t, 1e-12);
        EXPECT_NEAR(traj[i].x, in.trajectories[i].x, 1e-12);
        EXPECT_FALSE(traj[i].retro);
    }
    EXPECT_NEAR(nlohmann::json::parse(file(back.files, "meta.json"))["frame_theta"].get<double>(),
                0.0, 1e-16);
}

TEST(BoostCommand, RejectsFastFramesAndPrintedInputs)
{
    RunConfig rc = small_config();
    const BoostInputs in = lab_inputs(rc);
    EXPECT_THROW((void)boost_command(rc, 0.95, in), ConfigError);
    rc.mode = Mode::printed;
    EXPECT_THROW((void)boost_command(rc, 0.4, in), ConfigError);
}

TEST(BoostCommand, ReintegrationDiagnostic)
{
    RunConfig rc = small_config();
    rc.n_traj = 30;
    const auto out = boost_command(rc, 0.4, lab_inputs(rc), {}, true);
    const auto checks = nlohmann::json::parse(file(out.files, "reintegration.json"));
    EXPECT_FALSE(checks.empty());
    EXPECT_LE(checks.size(), 5u);
}

TEST(OutputTransaction, CommitKeepsFilesAndAbortRemovesThem)
{
    const fs::path dir = scratch_dir("tx");
    {
        OutputTransaction tx(dir);
        tx.write("a.txt", "alpha");
        tx.commit();
    }
    EXPECT_EQ(read_file(dir / "a.txt"), "alpha");
    {
        OutputTransaction tx(dir);
        tx.write("b.txt", "beta");
    }
    EXPECT_FALSE(fs::exists(dir / "b.txt"));
    EXPECT_FALSE(fs::exists(dir / "b.txt.partial"));
    fs::remove_all(dir);
}

TEST(LoadInputs, MissingFilesAreReported)
{
    const fs::path dir = scratch_dir("missing");
    fs::create_directories(dir);
    EXPECT_THROW((void)load_boost_inputs(dir), MissingInputError);
    EXPECT_THROW((void)load_render_input(dir), MissingInputError);
    fs::remove_all(dir);
}
