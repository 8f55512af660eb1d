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

// Parameter records <-> JSON. Field names match the record members (SICA
// recruitment is "lambda_"). Unknown or missing fields raise ParseError;
// "incidence" defaults to "standard" when absent.

#include "fracstab/models.hpp"

#include <json.hpp>

#include <string>

namespace fracstab {

SicaParams sica_params_from_json(const nlohmann::json& j);
SicaParams sica_params_from_json(const std::string& text);
nlohmann::ordered_json to_json(const SicaParams& p);

TeivParams teiv_params_from_json(const nlohmann::json& j);
TeivParams teiv_params_from_json(const std::string& text);
nlohmann::ordered_json to_json(const TeivParams& p);

} // namespace fracstab
