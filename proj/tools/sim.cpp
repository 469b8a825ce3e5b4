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


// sim: command-line front end.
//
//   sim constants|rabi|ramsey|echo|custom|sweep --config <path> [--out <dir>] [--plot]
//
// Exit codes: 0 ok, 2 invalid config, 3 truncation infeasible,
// 4 numerical non-convergence, 1 anything else.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trapsim/runner.hpp"

namespace {

int report(const char* category, const std::exception& e, int code)
{
    std::cerr << "error[" << category << "]: " << e.what() << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hyperfine clock-qubit simulator for an optical dipole trap"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool plot = false;
    std::string axis;
    std::vector<double> values;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "TOML config file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides SIM_OUT_DIR and the config)");
        sub->add_flag("--plot", plot, "also write an SVG line plot");
    };

    auto* constants = app.add_subcommand("constants", "print derived constants and rates");
    add_common(constants);
    std::vector<std::pair<std::string, CLI::App*>> runs;
    for (const char* kind : {"rabi", "ramsey", "echo", "custom"}) {
        auto* sub = app.add_subcommand(kind, std::string("run the ") + kind + " protocol");
        add_common(sub);
        runs.emplace_back(kind, sub);
    }
    auto* sweep = app.add_subcommand("sweep", "run one protocol over a parameter list");
    add_common(sweep);
    sweep->add_option("--axis", axis, "depth | temperature | carrier")
        ->check(CLI::IsMember({"depth", "temperature", "carrier"}));
    sweep->add_option("--values", values, "uK for depth/temperature, kHz for carrier")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        auto cfg = trapsim::load_config(config_path);
        if (plot)
            cfg.output.plot = true;
        const auto dir = trapsim::resolve_out_dir(cfg, out_dir);

        if (constants->parsed()) {
            trapsim::cmd_constants(cfg, std::cout, dir);
            return 0;
        }
        for (const auto& [kind, sub] : runs) {
            if (!sub->parsed())
                continue;
            const auto r = trapsim::cmd_run(cfg, kind, dir);
            std::cout << "wrote " << r.csv.string() << " (" << r.series.size() << " rows)";
            if (kind != "rabi")
                std::cout << ", halftime " << r.halftime << " s";
            std::cout << '\n';
            return 0;
        }
        if (sweep->parsed()) {
            const std::string a = axis.empty() ? cfg.sweep.axis : axis;
            const auto& v = values.empty() ? cfg.sweep.values : values;
            const auto rows = trapsim::cmd_sweep(cfg, a, v, dir, &std::cout);
            std::cout << "value,halftime_s,final_P_a,gamma000_fl,gamma000_sc\n";
            for (const auto& r : rows)
                std::cout << r.value << ',' << r.halftime << ',' << r.final_pa << ','
                          << r.gamma000_fl << ',' << r.gamma000_sc << '\n';
            return 0;
        }
    }
    catch (const trapsim::ConfigError& e) {
        return report("config", e, 2);
    }
    catch (const trapsim::TruncationError& e) {
        return report("truncation", e, 3);
    }
    catch (const trapsim::ConvergenceError& e) {
        return report("convergence", e, 4);
    }
    catch (const std::exception& e) {
        return report("internal", e, 1);
    }
    return 1;
}
