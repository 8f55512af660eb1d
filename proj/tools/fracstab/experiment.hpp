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
#pragma once

// Experiment layer of the fracstab command line tool. Talks to the library
// exclusively through the C interface in fracstab.h.

#include "fracstab/fracstab.h"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracstab::cli {

enum ExitCode : int {
    exit_pass = 0,
    exit_certificate_failed = 1,
    exit_config_error = 2,
    exit_divergence = 3,
    exit_domain_error = 4,
};

/// Error carrying the process exit code it maps to.
class CommandError : public std::runtime_error {
public:
    CommandError(int exit_code, const std::string& what) : std::runtime_error(what), code_(exit_code) {}
    int exit_code() const noexcept { return code_; }

private:
    int code_;
};

/// Throws CommandError mapped from a non-OK status (divergence -> 3, domain
/// errors -> 4, parse/contract -> 2, anything else -> 1).
void check(fs_status status, const std::string& context);

// RAII owners for the C handles.
struct ModelDeleter {
    void operator()(fs_model* m) const noexcept { fs_model_free(m); }
};
struct TrajectoryDeleter {
    void operator()(fs_trajectory* t) const noexcept { fs_trajectory_free(t); }
};
struct FunctionalDeleter {
    void operator()(fs_functional* f) const noexcept { fs_functional_free(f); }
};
using ModelPtr = std::unique_ptr<fs_model, ModelDeleter>;
using TrajectoryPtr = std::unique_ptr<fs_trajectory, TrajectoryDeleter>;
using FunctionalPtr = std::unique_ptr<fs_functional, FunctionalDeleter>;

struct OutputPaths {
    std::string csv_prefix = "trajectory";
    std::string svg = "trajectories.svg";
    std::string report = "report.json";
};

struct ExperimentConfig {
    std::string model;  // "sica" or "teiv"
    fs_sica_params sica{};
    fs_teiv_params teiv{};
    std::vector<double> orders;
    std::vector<double> initial_state;
    double t_end = 0.0;
    std::size_t steps = 0;
    std::vector<std::string> functionals;  // "v0", "v1", "teiv_at_anchor"
    OutputPaths outputs;
};

/// Parses and validates a config document. Unknown fields are errors.
/// Diagnostics name the offending field or the line of a syntax error.
/// Throws CommandError with exit_config_error.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
std::string serialize_config(const ExperimentConfig& cfg);

ModelPtr make_model(const ExperimentConfig& cfg);
std::vector<std::string> state_labels(const ExperimentConfig& cfg);

/// Equilibrium the theory predicts for the configured parameters and the
/// functional certifying it.
struct Prediction {
    std::string regime;  // "disease-free"/"endemic" or "infection-free"/"chronic"
    std::vector<double> equilibrium;
    std::string functional;  // "v0", "v1" or "teiv_at_anchor"
    double ball;             // relative radius used for the convergence check
    double r0;
};
Prediction predict(const ExperimentConfig& cfg);

FunctionalPtr make_functional(const ExperimentConfig& cfg, const std::string& name);

/// One solved order with the requested functional series.
struct OrderRun {
    double order;
    TrajectoryPtr traj;
    std::vector<std::string> functional_labels;
    std::vector<std::vector<double>> functional_values;
    std::vector<std::vector<double>> functional_caputo;
};

/// Solves every order concurrently (one worker per order); results come
/// back in config order.
std::vector<OrderRun> run_orders(const ExperimentConfig& cfg, const std::vector<std::string>& functionals);

/// ||x - target||_2 / ||target||_2
double relative_distance(const std::vector<double>& x, const std::vector<double>& target);

// CSV: header t,<states>,<functionals>,<dcaputo_functionals>; %.17g; LF.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
std::string format_double(double v);
void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);
CsvTable trajectory_table(const OrderRun& run, const std::vector<std::string>& state_labels);

/// One panel per state variable, one polyline per order.
std::string render_svg(const std::vector<OrderRun>& runs, const std::vector<std::string>& state_labels,
                       const std::string& title);

struct LemmaOptions {
    std::optional<std::string> coordinate;   // trajectory coordinate label
    std::optional<std::string> signal_csv;   // two-column t,x file instead of a trajectory
    std::string g = "s";
    std::optional<double> xbar;              // unset: equilibrium coordinate
    std::optional<double> order;             // unset: first config order
    std::optional<double> tolerance;
};

int cmd_r0(const ExperimentConfig& cfg, std::ostream& out);
int cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out);
int cmd_verify_lemma(const ExperimentConfig& cfg, const LemmaOptions& opts, std::ostream& out);
int cmd_report(const ExperimentConfig& cfg, std::ostream& out);

} // namespace fracstab::cli
