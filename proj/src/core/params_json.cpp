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
#include "fracstab/params_json.hpp"
#include "fracstab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

namespace fracstab {

namespace {

template <std::size_t N>
void check_fields(const nlohmann::json& j, const std::array<std::string_view, N>& allowed, const char* what)
{
    if (!j.is_object())
        throw ParseError(std::string(what) + " parameters must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError(std::string(what) + " parameters: unknown field '" + key + "'");
}

double number(const nlohmann::json& j, const char* key, const char* what)
{
    const auto it = j.find(key);
    if (it == j.end())
        throw ParseError(std::string(what) + " parameters: missing field '" + key + "'");
    if (!it->is_number())
        throw ParseError(std::string(what) + " parameters: field '" + key + "' must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v))
        throw ParseError(std::string(what) + " parameters: field '" + key + "' is not finite");
    return v;
}

nlohmann::json parse_text(const std::string& text)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

constexpr std::array<std::string_view, 9> sica_fields{"lambda_", "mu", "beta", "rho", "phi",
                                                      "alpha_t", "omega", "d", "incidence"};
constexpr std::array<std::string_view, 12> teiv_fields{"lambda", "mu_T", "mu_E", "mu_I", "mu_V", "rho",
                                                       "gamma", "k", "beta", "alpha1", "alpha2", "alpha3"};

} // namespace

SicaParams sica_params_from_json(const nlohmann::json& j)
{
    check_fields(j, sica_fields, "SICA");
    SicaParams p;
    p.Lambda = number(j, "lambda_", "SICA");
    p.mu = number(j, "mu", "SICA");
    p.beta = number(j, "beta", "SICA");
    p.rho = number(j, "rho", "SICA");
    p.phi = number(j, "phi", "SICA");
    p.alpha_t = number(j, "alpha_t", "SICA");
    p.omega = number(j, "omega", "SICA");
    p.d = number(j, "d", "SICA");
    p.incidence = Incidence::standard;
    if (const auto it = j.find("incidence"); it != j.end()) {
        if (!it->is_string())
            throw ParseError("SICA parameters: field 'incidence' must be a string");
        p.incidence = incidence_from_string(it->get<std::string>());
    }
    try {
        p.validate();
    } catch (const ContractError& e) {
        throw ParseError(std::string("SICA parameters: ") + e.what());
    }
    return p;
}

SicaParams sica_params_from_json(const std::string& text)
{
    return sica_params_from_json(parse_text(text));
}

nlohmann::ordered_json to_json(const SicaParams& p)
{
    nlohmann::ordered_json j;
    j["lambda_"] = p.Lambda;
    j["mu"] = p.mu;
    j["beta"] = p.beta;
    j["rho"] = p.rho;
    j["phi"] = p.phi;
    j["alpha_t"] = p.alpha_t;
    j["omega"] = p.omega;
    j["d"] = p.d;
    j["incidence"] = to_string(p.incidence);
    return j;
}

TeivParams teiv_params_from_json(const nlohmann::json& j)
{
    check_fields(j, teiv_fields, "TEIV");
    TeivParams p;
    p.lambda = number(j, "lambda", "TEIV");
    p.mu_T = number(j, "mu_T", "TEIV");
    p.mu_E = number(j, "mu_E", "TEIV");
    p.mu_I = number(j, "mu_I", "TEIV");
    p.mu_V = number(j, "mu_V", "TEIV");
    p.rho = number(j, "rho", "TEIV");
    p.gamma = number(j, "gamma", "TEIV");
    p.k = number(j, "k", "TEIV");
    p.beta = number(j, "beta", "TEIV");
    p.alpha1 = number(j, "alpha1", "TEIV");
    p.alpha2 = number(j, "alpha2", "TEIV");
    p.alpha3 = number(j, "alpha3", "TEIV");
    try {
        p.validate();
    } catch (const ContractError& e) {
        throw ParseError(std::string("TEIV parameters: ") + e.what());
    }
    return p;
}

TeivParams teiv_params_from_json(const std::string& text)
{
    return teiv_params_from_json(parse_text(text));
}

nlohmann::ordered_json to_json(const TeivParams& p)
{
    nlohmann::ordered_json j;
    j["lambda"] = p.lambda;
    j["mu_T"] = p.mu_T;
    j["mu_E"] = p.mu_E;
    j["mu_I"] = p.mu_I;
    j["mu_V"] = p.mu_V;
    j["rho"] = p.rho;
    j["gamma"] = p.gamma;
    j["k"] = p.k;
    j["beta"] = p.beta;
    j["alpha1"] = p.alpha1;
    j["alpha2"] = p.alpha2;
    j["alpha3"] = p.alpha3;
    return j;
}

} // namespace fracstab
