// Copyright 2026 The trapsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "trapsim/runner.hpp"

using namespace trapsim;
namespace fs = std::filesystem;

namespace {

// Small, fast configuration: 40 uK in a capped box, delta pulses.
const char* kSmall = R"(
[trap]
depth_uK = 300
omega_perp_kHz = 72
omega_par_kHz = 9.6
temperature_uK = 15
vmax = [3, 3, 12]

[scattering]
dv_max = 2
check_convergence = false

[protocol]
gap_stop_us = 1000
gap_step_us = 250

[output]
prefix = "t"
json = false
)";

fs::path scratch()
{
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    auto p = fs::temp_directory_path() / "trapsim_tests" / (std::string(info->test_suite_name()) + "_" + info->name());
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_file(const fs::path& p, const std::string& text)
{
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_sim(const std::string& args)
{
    const std::string cmd = std::string(TRAPSIM_SIM_EXE) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Config, DefaultsAndUnits)
{
    const auto cfg = parse_config("");
    EXPECT_TRUE(cfg.depth_assumed);
    EXPECT_NEAR(cfg.trap.depth, 300e-6 * 1.380649e-23, 1e-40);
    EXPECT_EQ(cfg.noise.rin_psd, 1e-13);
    EXPECT_EQ(cfg.trap.occupancy_eps.value_or(0.0), 1e-3);
    EXPECT_FALSE(cfg.trap.vmax.has_value());
    EXPECT_TRUE(cfg.protocol.delta_pulses);
    EXPECT_EQ(cfg.protocol.carrier, CarrierMode::thermal_mean);
    EXPECT_NEAR(cfg.protocol.ramsey_areas[0], 1.5 * pi, 1e-15);

    const auto c2 = parse_config(kSmall);
    EXPECT_FALSE(c2.depth_assumed);
    EXPECT_NEAR(*c2.trap.omega_perp, two_pi * 72e3, 1e-9);
    EXPECT_NEAR(c2.trap.temperature, 15e-6, 1e-20);
    EXPECT_EQ(*c2.trap.vmax, (Mode{3, 3, 12}));
    EXPECT_NEAR(c2.protocol.gap_step, 250e-6, 1e-18);
    EXPECT_EQ(c2.protocol.gaps().size(), 5u);
}

TEST(Config, UnknownKeysAndBlocksAreRejected)
{
    try {
        parse_config("[trap]\ndepth_uk = 300\n");
        FAIL();
    }
    catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("depth_uk"), std::string::npos);
    }
    EXPECT_THROW(parse_config("[traps]\n"), ConfigError);
    EXPECT_THROW(parse_config("[protocol]\nevents = [{type = \"pulse\", area = 1}]\n"), ConfigError);
    EXPECT_THROW(parse_config("[trap]\ndepth_uK = \"deep\"\n"), ConfigError);
    EXPECT_THROW(parse_config("[trap]\nvmax = [1, 2]\n"), ConfigError);
    EXPECT_THROW(parse_config("[trap]\nomega_perp_kHz = 72\n"), ConfigError);
    EXPECT_THROW(parse_config("[protocol]\npulse_shape = \"gauss\"\n"), ConfigError);
    EXPECT_THROW(parse_config("[scattering]\nn_phi = 30\n"), ConfigError);
    EXPECT_THROW(parse_config("this is not toml"), ConfigError);
}

TEST(Config, SerializationRoundTrips)
{
    auto cfg = parse_config(kSmall);
    cfg.protocol.events.push_back({true, pi, 0.5 * pi, 0.0, 0.0});
    cfg.protocol.events.push_back({false, 0.0, 0.0, 1e-3, 50e-6});
    cfg.trap.eta = AxisArray{0.1, 0.2, 0.3};
    cfg.sweep.values = {1, 15, 40};
    const auto text = serialize_config(cfg);
    const auto back = parse_config(text);
    EXPECT_EQ(serialize_config(back), text);
    EXPECT_EQ(config_hash(back), config_hash(cfg));
    ASSERT_EQ(back.protocol.events.size(), 2u);
    EXPECT_FALSE(back.protocol.events[1].is_pulse);
    EXPECT_EQ(back.sweep.values, (std::vector<double>{1, 15, 40}));
}

TEST(Config, HashTracksContent)
{
    const auto a = parse_config(kSmall);
    auto b = a;
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    b.trap.temperature = 16e-6;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Config, EmbeddedConfigReparses)
{
    const auto cfg = parse_config(kSmall);
    TimeSeries ts;
    ts.push(0.0, {1, 0}, {0, 0});
    std::ostringstream os;
    write_run_csv(os, ts, cfg);
    std::istringstream is(os.str());
    const auto back = parse_config(embedded_config(is));
    EXPECT_EQ(serialize_config(back), serialize_config(cfg));
}

TEST(Config, OutputDirectoryPrecedence)
{
    const auto cfg = parse_config("[output]\ndir = \"from_config\"\n");
    ::unsetenv("SIM_OUT_DIR");
    EXPECT_EQ(resolve_out_dir(cfg, ""), fs::path("from_config"));
    ::setenv("SIM_OUT_DIR", "from_env", 1);
    EXPECT_EQ(resolve_out_dir(cfg, ""), fs::path("from_env"));
    EXPECT_EQ(resolve_out_dir(cfg, "from_flag"), fs::path("from_flag"));
    ::unsetenv("SIM_OUT_DIR");
}

TEST(Runner, SweepVariantScalesDepth)
{
    const auto cfg = parse_config(kSmall);
    const auto v = sweep_variant(cfg, "depth", 1200);
    EXPECT_NEAR(*v.trap.omega_perp / *cfg.trap.omega_perp, 2.0, 1e-12);
    EXPECT_FALSE(v.depth_assumed);
    EXPECT_NEAR(sweep_variant(cfg, "temperature", 40).trap.temperature, 40e-6, 1e-20);
    EXPECT_EQ(sweep_variant(cfg, "carrier", 0.5).protocol.carrier, CarrierMode::offset);
    EXPECT_THROW(sweep_variant(cfg, "waist", 1.0), ConfigError);
    EXPECT_THROW(sweep_variant(cfg, "depth", -1.0), ConfigError);
}

TEST(Runner, ConstantsReport)
{
    auto cfg = parse_config(kSmall);
    const auto r = compute_constants(cfg);
    EXPECT_GE(r.gamma0, 1e-14);
    EXPECT_LE(r.gamma0, 1e-12);
    EXPECT_LE(r.identity_rel_err, 1e-12);
    EXPECT_GT(r.ground.scattering, 0.0);
    EXPECT_GT(r.ground.fluctuation, 0.0);
    cfg.trap.s_diff = 0.0;
    EXPECT_EQ(compute_constants(cfg).dw0, 0.0);

    const auto dir = scratch();
    std::ostringstream out;
    cmd_constants(cfg, out, dir);
    EXPECT_NE(out.str().find("Gamma0"), std::string::npos);
    const auto j = nlohmann::json::parse(slurp(dir / "t_constants.json"));
    EXPECT_EQ(j["delta_omega_0"]["value"].get<double>(), 0.0);
    EXPECT_EQ(j["config_hash"].get<std::string>(), config_hash(cfg));
}

TEST(Runner, RamseyRunWritesCsvWithMetadata)
{
    auto cfg = parse_config(kSmall);
    cfg.output.plot = true;
    cfg.output.json = true;
    const auto dir = scratch();
    const auto r = cmd_run(cfg, "ramsey", dir);
    EXPECT_EQ(r.series.size(), 5u);
    const auto text = slurp(r.csv);
    EXPECT_NE(text.find("# config_hash=" + config_hash(cfg)), std::string::npos);
    EXPECT_NE(text.find("time_s,P_a,P_b,coh_aggregate,coh_total\n"), std::string::npos);
    EXPECT_NE(text.find("# pulse_shape=delta"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "t_ramsey.svg"));
    EXPECT_TRUE(fs::exists(dir / "t_ramsey.json"));
}

TEST(Runner, ProtocolsRun)
{
    auto cfg = parse_config(kSmall);
    cfg.protocol.rabi_duration = 200e-6;
    cfg.protocol.events = {{true, 0.5 * pi, 0.0, 0.0, 0.0}, {false, 0.0, 0.0, 300e-6, 100e-6},
                           {true, 0.5 * pi, 0.0, 0.0, 0.0}};
    const auto p = prepare(cfg);
    const auto rabi = simulate(*p, "rabi");
    EXPECT_EQ(rabi.size(), 21u);
    const auto echo = simulate(*p, "echo");
    for (double pa : echo.p_a)
        EXPECT_GT(pa, 0.99);
    const auto custom = simulate(*p, "custom");
    EXPECT_GE(custom.size(), 4u);
    EXPECT_THROW(simulate(*p, "bogus"), ConfigError);
}

TEST(Runner, SingleValueSweepMatchesRun)
{
    const auto cfg = parse_config(kSmall);
    const auto dir = scratch();
    const auto run = cmd_run(cfg, "ramsey", dir / "run");
    const auto rows = cmd_sweep(cfg, "temperature", {15.0}, dir / "sweep");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(slurp(rows[0].csv), slurp(run.csv));
    EXPECT_DOUBLE_EQ(rows[0].halftime, run.halftime);
    EXPECT_TRUE(fs::exists(dir / "sweep" / "t_sweep_temperature.csv"));
}

TEST(Cli, ExitCodes)
{
    const auto dir = scratch();
    const auto good = write_file(dir / "good.toml", kSmall);
    EXPECT_EQ(run_sim("constants --config " + good.string() + " --out " + dir.string()), 0);
    EXPECT_EQ(run_sim("ramsey --config " + good.string() + " --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "t_ramsey.csv"));

    const auto bad = write_file(dir / "bad.toml", "[trap]\nbogus = 1\n");
    EXPECT_EQ(run_sim("ramsey --config " + bad.string()), 2);
    EXPECT_EQ(run_sim("ramsey --config " + (dir / "missing.toml").string()), 2);
    EXPECT_EQ(run_sim("ramsey"), 2);
    EXPECT_EQ(run_sim("frobnicate --config " + good.string()), 2);

    const auto big = write_file(dir / "big.toml",
                                "[trap]\ntemperature_uK = 40\noccupancy_eps = 1e-6\nmax_modes = 1000\n"
                                "omega_perp_kHz = 72\nomega_par_kHz = 9.6\n");
    EXPECT_EQ(run_sim("ramsey --config " + big.string() + " --out " + dir.string()), 3);

    const auto coarse = write_file(dir / "coarse.toml",
                                   "[trap]\nvmax = [4, 4, 4]\neta = [1.5, 1.5, 1.5]\n"
                                   "omega_perp_kHz = 72\nomega_par_kHz = 9.6\n"
                                   "[scattering]\nn_theta = 2\nn_phi = 4\ndv_max = 1\n");
    EXPECT_EQ(run_sim("ramsey --config " + coarse.string() + " --out " + dir.string()), 4);
}

TEST(Cli, EnvironmentSelectsOutputDirectory)
{
    const auto dir = scratch();
    const auto good = write_file(dir / "good.toml", kSmall);
    const std::string cmd = "SIM_OUT_DIR=" + (dir / "env").string() + " " + TRAPSIM_SIM_EXE +
                            " echo --config " + good.string() + " > /dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_TRUE(fs::exists(dir / "env" / "t_echo.csv"));
}

TEST(Cli, IdenticalRunsAreByteIdentical)
{
    const auto dir = scratch();
    const auto good = write_file(dir / "good.toml", kSmall);
    ASSERT_EQ(run_sim("ramsey --config " + good.string() + " --out " + (dir / "a").string()), 0);
    ASSERT_EQ(run_sim("ramsey --config " + good.string() + " --out " + (dir / "b").string()), 0);
    const auto a = slurp(dir / "a" / "t_ramsey.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir / "b" / "t_ramsey.csv"));
}

TEST(Cli, SweepWritesSummary)
{
    const auto dir = scratch();
    const auto good = write_file(dir / "good.toml", kSmall);
    ASSERT_EQ(run_sim("sweep --config " + good.string() + " --axis temperature --values 1,15 --out " +
                      dir.string()),
              0);
    const auto summary = slurp(dir / "t_sweep_temperature.csv");
    EXPECT_NE(summary.find("value,halftime_s"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "t_ramsey_temperature_0.csv"));
    EXPECT_TRUE(fs::exists(dir / "t_ramsey_temperature_1.csv"));
    EXPECT_EQ(run_sim("sweep --config " + good.string() + " --axis waist --values 1"), 2);
}

TEST(Config, ShippedSamplesParse)
{
    int count = 0;
    for (const auto& e : fs::directory_iterator(TRAPSIM_CONFIG_DIR)) {
        if (e.path().extension() != ".toml")
            continue;
        ++count;
        const auto cfg = load_config(e.path().string());
        EXPECT_FALSE(cfg.depth_assumed) << e.path();
        EXPECT_EQ(serialize_config(parse_config(serialize_config(cfg))), serialize_config(cfg)) << e.path();
    }
    EXPECT_GE(count, 5);
}
