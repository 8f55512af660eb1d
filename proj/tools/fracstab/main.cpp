/*
* Copyright (C) 2026 fracstab contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace fracstab::cli;

namespace {

// Prints the command output and mirrors it to a file when one was asked for.
int emit(const std::string& text, const std::string& path)
{
    std::cout << text;
    if (!path.empty()) {
        std::ofstream f(path, std::ios::binary);
        f << text;
        if (!f) {
            std::cerr << "error: cannot write " << path << '\n';
            return exit_config_error;
        }
    }
    return exit_pass;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fractional-order epidemic stability experiments"};
    app.set_version_flag("--version", std::string("fracstab ") + fs_version());
    app.require_subcommand(1);

    std::string config;
    std::string out;

    auto* r0 = app.add_subcommand("r0", "Reproduction number and equilibria as JSON");
    r0->add_option("--config", config, "experiment config (JSON)")->required();

    auto* sim = app.add_subcommand("simulate", "Solve every order, write CSV and SVG");
    sim->add_option("--config", config, "experiment config (JSON)")->required();
    sim->add_option("--out", out, "output directory")->required();

    LemmaOptions lemma;
    std::string coordinate, signal_csv;
    double xbar = 0.0, order = 0.0, tolerance = 0.0;
    auto* vl = app.add_subcommand("verify-lemma", "Check the Psi inequality on a trajectory coordinate or signal");
    vl->add_option("--config", config, "experiment config (JSON)")->required();
    auto* o_coord = vl->add_option("--coordinate", coordinate, "state label of the trajectory coordinate");
    auto* o_csv = vl->add_option("--signal-csv", signal_csv, "two-column t,x file on a uniform grid");
    o_coord->excludes(o_csv);
    vl->add_option("--g", lemma.g, "g function: s, s2, log1p, s/(1+s)")->capture_default_str();
    auto* o_xbar = vl->add_option("--xbar", xbar, "anchor (default: equilibrium coordinate)");
    auto* o_order = vl->add_option("--order", order, "fractional order (default: first config order)");
    auto* o_tol = vl->add_option("--tolerance", tolerance, "violation tolerance (default: 10 h^(2-order) max|x|)");
    vl->add_option("--out", out, "also write the certificate JSON here");

    auto* rep = app.add_subcommand("report", "Stability verdict per order as JSON");
    rep->add_option("--config", config, "experiment config (JSON)")->required();
    rep->add_option("--out", out, "also write the report JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config_error;
    }

    try {
        const ExperimentConfig cfg = load_config(config);
        std::ostringstream buf;
        int rc = exit_pass;
        if (r0->parsed()) {
            rc = cmd_r0(cfg, buf);
        } else if (sim->parsed()) {
            return cmd_simulate(cfg, out, std::cout);
        } else if (vl->parsed()) {
            if (*o_coord)
                lemma.coordinate = coordinate;
            if (*o_csv)
                lemma.signal_csv = signal_csv;
            if (*o_xbar)
                lemma.xbar = xbar;
            if (*o_order)
                lemma.order = order;
            if (*o_tol)
                lemma.tolerance = tolerance;
            rc = cmd_verify_lemma(cfg, lemma, buf);
        } else {
            rc = cmd_report(cfg, buf);
        }
        const int wrc = emit(buf.str(), out);
        return rc != exit_pass ? rc : wrc;
    } catch (const CommandError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_certificate_failed;
    }
}
