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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>

namespace fracstab::cli {

using ojson = nlohmann::ordered_json;

ModelPtr make_model(const ExperimentConfig& cfg)
{
    fs_model* m = nullptr;
    check(cfg.model == "sica" ? fs_model_sica(&cfg.sica, &m) : fs_model_teiv(&cfg.teiv, &m), "build model");
    return ModelPtr(m);
}

std::vector<std::string> state_labels(const ExperimentConfig& cfg)
{
    const auto m = make_model(cfg);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < fs_model_dimension(m.get()); ++i)
        labels.emplace_back(fs_model_state_label(m.get(), i));
    return labels;
}

Prediction predict(const ExperimentConfig& cfg)
{
    Prediction p;
    p.equilibrium.assign(4, 0.0);
    if (cfg.model == "sica") {
        check(fs_sica_r0(&cfg.sica, &p.r0), "R0");
        if (p.r0 <= 1.0) {
            p.regime = "disease-free";
            p.functional = "v0";
            p.ball = 0.01;
            check(fs_sica_disease_free(&cfg.sica, p.equilibrium.data()), "disease-free equilibrium");
        } else {
            p.regime = "endemic";
            p.functional = "v1";
            p.ball = 0.02;
            check(fs_sica_endemic(&cfg.sica, p.equilibrium.data()), "endemic equilibrium");
        }
        return p;
    }
    check(fs_teiv_r0(&cfg.teiv, &p.r0), "R0");
    double eq[8];
    size_t count = 0;
    check(fs_teiv_equilibria(&cfg.teiv, eq, &count), "equilibria");
    p.functional = "teiv_at_anchor";
    p.ball = 0.02;
    if (count > 1) {
        p.regime = "chronic";
        p.equilibrium.assign(eq + 4, eq + 8);
    } else {
        p.regime = "infection-free";
        p.equilibrium.assign(eq, eq + 4);
    }
    return p;
}

FunctionalPtr make_functional(const ExperimentConfig& cfg, const std::string& name)
{
    fs_functional* f = nullptr;
    if (name == "v0")
        check(fs_functional_sica_v0(&cfg.sica, &f), "functional v0");
    else if (name == "v1")
        check(fs_functional_sica_v1(&cfg.sica, &f), "functional v1");
    else if (name == "teiv_at_anchor")
        check(fs_functional_teiv(&cfg.teiv, predict(cfg).equilibrium.data(), &f), "functional teiv_at_anchor");
    else
        throw CommandError(exit_config_error, "unknown functional '" + name + "'");
    return FunctionalPtr(f);
}

namespace {

OrderRun solve_one(const fs_model* model, const ExperimentConfig& cfg, double order,
                   const std::vector<std::pair<std::string, fs_functional*>>& functionals)
{
    OrderRun run{order, nullptr, {}, {}, {}};
    const double h = cfg.t_end / static_cast<double>(cfg.steps);
    fs_trajectory* t = nullptr;
    check(fs_solve(model, FS_METHOD_ABM, order, cfg.initial_state.data(), 0.0, h, cfg.steps, 0, &t),
          "solve at order " + format_double(order));
    run.traj.reset(t);
    for (const auto& [label, f] : functionals) {
        std::vector<double> v(cfg.steps + 1), d(cfg.steps + 1);
        check(fs_functional_values(f, t, v.data()), "functional " + label);
        check(fs_functional_caputo(f, t, d.data()), "Caputo derivative of " + label);
        run.functional_labels.push_back(label);
        run.functional_values.push_back(std::move(v));
        run.functional_caputo.push_back(std::move(d));
    }
    return run;
}

} // namespace

std::vector<OrderRun> run_orders(const ExperimentConfig& cfg, const std::vector<std::string>& functionals)
{
    const auto model = make_model(cfg);
    std::vector<FunctionalPtr> owned;
    std::vector<std::pair<std::string, fs_functional*>> fs;
    for (const auto& name : functionals) {
        owned.push_back(make_functional(cfg, name));
        fs.emplace_back(fs_functional_label(owned.back().get()), owned.back().get());
    }

    // Model and functionals are only read by the workers.
    std::vector<std::future<OrderRun>> jobs;
    for (double order : cfg.orders)
        jobs.push_back(std::async(std::launch::async, solve_one, model.get(), std::cref(cfg), order, std::cref(fs)));

    std::vector<OrderRun> runs;
    std::exception_ptr first_error;
    for (auto& j : jobs) {
        try {
            runs.push_back(j.get());
        } catch (...) {
            if (!first_error)
                first_error = std::current_exception();
        }
    }
    if (first_error)
        std::rethrow_exception(first_error);
    return runs;
}

double relative_distance(const std::vector<double>& x, const std::vector<double>& target)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        num += (x[i] - target[i]) * (x[i] - target[i]);
        den += target[i] * target[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

int cmd_r0(const ExperimentConfig& cfg, std::ostream& out)
{
    ojson j;
    j["model"] = cfg.model;
    if (cfg.model == "sica") {
        double r0 = 0.0, thr = 0.0;
        check(fs_sica_r0(&cfg.sica, &r0), "R0");
        check(fs_sica_threshold_r0(&cfg.sica, &thr), "threshold R0");
        std::vector<double> ef(4);
        check(fs_sica_disease_free(&cfg.sica, ef.data()), "disease-free equilibrium");
        j["incidence"] = cfg.sica.incidence == FS_INCIDENCE_STANDARD ? "standard" : "mass_action";
        j["r0"] = r0;
        j["threshold_r0"] = thr;
        j["s0"] = ef[0];
        j["disease_free"] = ef;
        if (r0 > 1.0) {
            std::vector<double> es(4);
            check(fs_sica_endemic(&cfg.sica, es.data()), "endemic equilibrium");
            j["endemic"] = es;
        }
    } else {
        double r0 = 0.0;
        check(fs_teiv_r0(&cfg.teiv, &r0), "R0");
        double eq[8];
        size_t count = 0;
        check(fs_teiv_equilibria(&cfg.teiv, eq, &count), "equilibria");
        j["r0"] = r0;
        j["t0"] = eq[0];
        j["infection_free"] = std::vector<double>(eq, eq + 4);
        if (count > 1)
            j["chronic"] = std::vector<double>(eq + 4, eq + 8);
    }
    out << j.dump(2) << '\n';
    return exit_pass;
}

namespace {

std::string order_tag(double order)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", order);
    return buf;
}

} // namespace

int cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out)
{
    namespace fsys = std::filesystem;
    auto runs = run_orders(cfg, cfg.functionals);
    const auto labels = state_labels(cfg);

    fsys::create_directories(out_dir);
    std::vector<fsys::path> written;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& p : written)
            fsys::remove(p, ec);
    };

    ojson summary;
    summary["model"] = cfg.model;
    summary["files"] = ojson::array();
    summary["runs"] = ojson::array();
    try {
        for (const auto& run : runs) {
            const auto path = out_dir / (cfg.outputs.csv_prefix + "_theta" + order_tag(run.order) + ".csv");
            written.push_back(path);
            std::ofstream f(path, std::ios::binary);
            if (!f)
                throw CommandError(exit_config_error, "cannot write " + path.string());
            write_csv(f, trajectory_table(run, labels));
            if (!f)
                throw CommandError(exit_config_error, "write failed: " + path.string());
            summary["files"].push_back(path.string());

            std::vector<double> last(labels.size());
            check(fs_trajectory_state(run.traj.get(), cfg.steps, last.data()), "final state");
            summary["runs"].push_back({{"order", run.order},
                                       {"final_state", last},
                                       {"undershoot_count", fs_trajectory_undershoot_count(run.traj.get())}});
        }
        const auto svg = out_dir / cfg.outputs.svg;
        written.push_back(svg);
        std::ofstream f(svg, std::ios::binary);
        f << render_svg(runs, labels, cfg.model + " trajectories");
        if (!f)
            throw CommandError(exit_config_error, "write failed: " + svg.string());
        summary["files"].push_back(svg.string());
    } catch (...) {
        cleanup();
        throw;
    }
    out << summary.dump(2) << '\n';
    return exit_pass;
}

namespace {

struct Signal {
    std::vector<double> x;
    double t0 = 0.0;
    double h = 0.0;
};

Signal signal_from_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CommandError(exit_config_error, "cannot open signal file " + path);
    const CsvTable t = read_csv(in);
    if (t.header.size() != 2)
        throw CommandError(exit_config_error, "signal file must have two columns t,x");
    if (t.rows.size() < 2)
        throw CommandError(exit_config_error, "signal file needs at least two samples");
    Signal s;
    s.t0 = t.rows[0][0];
    s.h = t.rows[1][0] - t.rows[0][0];
    if (!(s.h > 0.0))
        throw CommandError(exit_config_error, "signal times must increase");
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const double expect = s.t0 + static_cast<double>(k) * s.h;
        if (std::abs(t.rows[k][0] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw CommandError(exit_config_error, "signal grid is not uniform at row " + std::to_string(k + 1));
        s.x.push_back(t.rows[k][1]);
    }
    return s;
}

} // namespace

int cmd_verify_lemma(const ExperimentConfig& cfg, const LemmaOptions& opts, std::ostream& out)
{
    const double order = opts.order ? *opts.order : cfg.orders.front();
    if (!(order > 0.0 && order <= 1.0))
        throw CommandError(exit_config_error, "--order must lie in (0, 1]");

    Signal sig;
    std::optional<std::size_t> coord;
    if (opts.signal_csv) {
        sig = signal_from_csv(*opts.signal_csv);
    } else {
        if (!opts.coordinate)
            throw CommandError(exit_config_error, "either --coordinate or --signal-csv is required");
        const auto labels = state_labels(cfg);
        const auto it = std::find(labels.begin(), labels.end(), *opts.coordinate);
        if (it == labels.end())
            throw CommandError(exit_config_error, "unknown coordinate '" + *opts.coordinate + "'");
        coord = static_cast<std::size_t>(it - labels.begin());

        ExperimentConfig one = cfg;
        one.orders = {order};
        auto runs = run_orders(one, {});
        sig.h = cfg.t_end / static_cast<double>(cfg.steps);
        sig.x.resize(cfg.steps + 1);
        check(fs_trajectory_component(runs.front().traj.get(), *coord, sig.x.data()), "trajectory component");
    }

    double xbar = 0.0;
    if (opts.xbar) {
        xbar = *opts.xbar;
    } else if (coord) {
        xbar = predict(cfg).equilibrium[*coord];
    } else {
        throw CommandError(exit_config_error, "--xbar is required with --signal-csv");
    }

    fs_certificate c{};
    const double* tol = opts.tolerance ? &*opts.tolerance : nullptr;
    check(fs_lemma_certificate(sig.x.data(), sig.x.size(), sig.t0, sig.h, opts.g.c_str(), xbar, order, tol, &c),
          "lemma certificate");
    std::string buf(1024, '\0');
    size_t len = 0;
    check(fs_certificate_to_json(&c, buf.data(), buf.size(), &len), "certificate json");
    buf.resize(len);
    out << buf << '\n';
    return c.pass ? exit_pass : exit_certificate_failed;
}

int cmd_report(const ExperimentConfig& cfg, std::ostream& out)
{
    const Prediction pred = predict(cfg);

    // Sign of the spectral abscissa of the linearisation at the infection-free
    // state must agree with the threshold classification.
    double abscissa = 0.0;
    if (cfg.model == "sica")
        check(fs_sica_dfe_spectral_abscissa(&cfg.sica, &abscissa), "spectral abscissa");
    else
        check(fs_teiv_ife_spectral_abscissa(&cfg.teiv, &abscissa), "spectral abscissa");
    const bool consistent = (pred.r0 <= 1.0) == (abscissa < 0.0);

    const std::string& prefix = pred.regime;

    ojson j;
    j["model"] = cfg.model;
    if (cfg.model == "sica")
        j["incidence"] = cfg.sica.incidence == FS_INCIDENCE_STANDARD ? "standard" : "mass_action";
    j["r0"] = pred.r0;
    j["regime"] = pred.regime;
    j["spectral_abscissa"] = abscissa;
    j["consistent"] = consistent;
    j["equilibrium"] = pred.equilibrium;
    j["functional"] = pred.functional;
    j["ball"] = pred.ball;
    j["t_end"] = cfg.t_end;
    j["steps"] = cfg.steps;
    j["orders"] = ojson::array();

    // The functional is only a certificate candidate when both threshold tests
    // agree; otherwise nothing is solved and every order is flagged.
    if (!consistent) {
        for (double order : cfg.orders)
            j["orders"].push_back({{"order", order},
                                   {"certificate", nullptr},
                                   {"verdict", "inconsistent: R0 classification disagrees with spectral abscissa"}});
        j["all_certified"] = false;
        out << j.dump(2) << '\n';
        return exit_certificate_failed;
    }

    auto runs = run_orders(cfg, {pred.functional});
    j["functional"] = runs.front().functional_labels.front();

    bool all_certified = true;
    const double h = cfg.t_end / static_cast<double>(cfg.steps);
    for (const auto& run : runs) {
        const auto& values = run.functional_values.front();
        const auto& dv = run.functional_caputo.front();
        double scale = 0.0;
        for (double v : values)
            scale = std::max(scale, std::abs(v));
        fs_certificate cert{};
        check(fs_decrescence_certificate(dv.data(), dv.size(), 0.0, h, fs_default_tolerance(h, run.order, scale),
                                         &run.order, &cert),
              "decrescence certificate");
        std::string cbuf(1024, '\0');
        size_t len = 0;
        check(fs_certificate_to_json(&cert, cbuf.data(), cbuf.size(), &len), "certificate json");
        cbuf.resize(len);

        std::vector<double> state(4), last(4);
        std::optional<double> entry;
        for (std::size_t k = 0; k <= cfg.steps; ++k) {
            check(fs_trajectory_state(run.traj.get(), k, state.data()), "trajectory state");
            if (!entry && relative_distance(state, pred.equilibrium) <= 0.05)
                entry = static_cast<double>(k) * h;
        }
        last = state;
        const double dist = relative_distance(last, pred.equilibrium);
        const bool inside = dist <= pred.ball;

        std::string verdict;
        if (cert.pass && inside)
            verdict = prefix + ", certified";
        else if (cert.pass)
            verdict = prefix + ", decrescent, not converged";
        else
            verdict = prefix + ", not certified";
        const bool certified = cert.pass && inside;
        all_certified = all_certified && certified;

        ojson o;
        o["order"] = run.order;
        o["certificate"] = ojson::parse(cbuf);
        o["final_state"] = last;
        o["final_distance"] = dist;
        o["inside_ball"] = inside;
        o["entry_time_5pct"] = entry ? ojson(*entry) : ojson(nullptr);
        o["undershoot_count"] = fs_trajectory_undershoot_count(run.traj.get());
        o["verdict"] = verdict;
        j["orders"].push_back(std::move(o));
    }
    j["all_certified"] = all_certified;
    out << j.dump(2) << '\n';
    return all_certified ? exit_pass : exit_certificate_failed;
}

} // namespace fracstab::cli
