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
#include <fstream>
#include <sstream>

namespace fracstab::cli {

void check(fs_status status, const std::string& context)
{
    if (status == FS_OK)
        return;
    const std::string msg = context + ": " + fs_last_error_message();
    switch (status) {
    case FS_ERR_DIVERGENCE:
        throw CommandError(exit_divergence, msg);
    case FS_ERR_DOMAIN:
        throw CommandError(exit_domain_error, msg);
    case FS_ERR_PARSE:
    case FS_ERR_CONTRACT:
    case FS_ERR_NO_ENDEMIC:
        throw CommandError(exit_config_error, msg);
    default:
        throw CommandError(exit_certificate_failed, msg);
    }
}

namespace {

[[noreturn]] void config_error(const std::string& what)
{
    throw CommandError(exit_config_error, "config: " + what);
}

void only_fields(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    for (const auto& [key, value] : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known)
            config_error("unknown field '" + where + key + "'");
    }
}

const nlohmann::json& field(const nlohmann::json& j, const char* key)
{
    const auto it = j.find(key);
    if (it == j.end())
        config_error(std::string("missing field '") + key + "'");
    return *it;
}

double number_at(const nlohmann::json& v, const std::string& path)
{
    if (!v.is_number())
        config_error("field '" + path + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        config_error("field '" + path + "' must be finite");
    return d;
}

std::vector<double> number_list(const nlohmann::json& v, const std::string& path)
{
    if (!v.is_array())
        config_error("field '" + path + "' must be an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(number_at(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::size_t line_of(const std::string& text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

} // namespace

ExperimentConfig parse_config(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        config_error("syntax error at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    if (!j.is_object())
        config_error("top level must be an object");
    only_fields(j, {"model", "params", "orders", "initial_state", "t_end", "steps", "functionals", "outputs"}, "");

    ExperimentConfig cfg;
    const auto& model = field(j, "model");
    if (!model.is_string() || (model != "sica" && model != "teiv"))
        config_error("field 'model' must be \"sica\" or \"teiv\"");
    cfg.model = model.get<std::string>();

    const std::string params = field(j, "params").dump();
    fs_status st = cfg.model == "sica" ? fs_sica_params_from_json(params.c_str(), &cfg.sica)
                                       : fs_teiv_params_from_json(params.c_str(), &cfg.teiv);
    if (st != FS_OK)
        config_error(std::string("field 'params': ") + fs_last_error_message());

    cfg.orders = number_list(field(j, "orders"), "orders");
    if (cfg.orders.empty())
        config_error("field 'orders' must not be empty");
    for (std::size_t i = 0; i < cfg.orders.size(); ++i)
        if (!(cfg.orders[i] > 0.0 && cfg.orders[i] <= 1.0))
            config_error("field 'orders[" + std::to_string(i) + "]' must lie in (0, 1]");

    cfg.initial_state = number_list(field(j, "initial_state"), "initial_state");
    if (cfg.initial_state.size() != 4)
        config_error("field 'initial_state' must have 4 components");
    for (std::size_t i = 0; i < 4; ++i)
        if (cfg.initial_state[i] < 0.0)
            config_error("field 'initial_state[" + std::to_string(i) + "]' must be non-negative");

    cfg.t_end = number_at(field(j, "t_end"), "t_end");
    if (!(cfg.t_end > 0.0))
        config_error("field 't_end' must be positive");

    const auto& steps = field(j, "steps");
    if (!steps.is_number_integer() || steps.get<long long>() < 10)
        config_error("field 'steps' must be an integer >= 10");
    cfg.steps = steps.get<std::size_t>();

    const auto& fl = field(j, "functionals");
    if (!fl.is_array())
        config_error("field 'functionals' must be an array");
    for (std::size_t i = 0; i < fl.size(); ++i) {
        const std::string path = "functionals[" + std::to_string(i) + "]";
        if (!fl[i].is_string())
            config_error("field '" + path + "' must be a string");
        const auto name = fl[i].get<std::string>();
        const bool ok = cfg.model == "sica" ? (name == "v0" || name == "v1") : name == "teiv_at_anchor";
        if (!ok)
            config_error("field '" + path + "': functional '" + name + "' is not available for model " + cfg.model);
        cfg.functionals.push_back(name);
    }

    if (const auto it = j.find("outputs"); it != j.end()) {
        if (!it->is_object())
            config_error("field 'outputs' must be an object");
        only_fields(*it, {"csv_prefix", "svg", "report"}, "outputs.");
        auto str = [&](const char* key, std::string& dst) {
            if (const auto f = it->find(key); f != it->end()) {
                if (!f->is_string() || f->get<std::string>().empty())
                    config_error(std::string("field 'outputs.") + key + "' must be a non-empty string");
                dst = f->get<std::string>();
            }
        };
        str("csv_prefix", cfg.outputs.csv_prefix);
        str("svg", cfg.outputs.svg);
        str("report", cfg.outputs.report);
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CommandError(exit_config_error, "config: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg)
{
    std::string params(512, '\0');
    size_t len = 0;
    fs_status st = cfg.model == "sica" ? fs_sica_params_to_json(&cfg.sica, params.data(), params.size(), &len)
                                       : fs_teiv_params_to_json(&cfg.teiv, params.data(), params.size(), &len);
    check(st, "serialize params");
    params.resize(len);

    nlohmann::ordered_json j;
    j["model"] = cfg.model;
    j["params"] = nlohmann::ordered_json::parse(params);
    j["orders"] = cfg.orders;
    j["initial_state"] = cfg.initial_state;
    j["t_end"] = cfg.t_end;
    j["steps"] = cfg.steps;
    j["functionals"] = cfg.functionals;
    j["outputs"] = {{"csv_prefix", cfg.outputs.csv_prefix},
                    {"svg", cfg.outputs.svg},
                    {"report", cfg.outputs.report}};
    return j;
}

std::string serialize_config(const ExperimentConfig& cfg)
{
    return config_to_json(cfg).dump(2) + "\n";
}

} // namespace fracstab::cli
