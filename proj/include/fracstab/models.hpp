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

// HIV models with their reproduction numbers, equilibria and Lyapunov
// functionals.
//
// SICA (population): S susceptible, I infected without AIDS symptoms,
// C under treatment, A with AIDS symptoms.
//
//   S' = Lambda - mu S - inc
//   I' = inc - (rho + phi + mu) I + alpha_t A + omega C
//   C' = phi I - (omega + mu) C
//   A' = rho I - (alpha_t + mu + d) A
//
// with inc = beta S I (mass action) or beta S I / (S + I + C + A) (standard).
//
// TEIV (cellular): T target cells, E eclipse-stage infected, I productive
// infected, V free virus, incidence f(T, V) = beta T / (1 + a1 T + a2 V + a3 T V).

#include "fracstab/lyapunov.hpp"
#include "fracstab/solver.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace fracstab {

enum class Incidence { mass_action, standard };

const char* to_string(Incidence incidence) noexcept;
Incidence incidence_from_string(const std::string& s);

struct SicaParams {
    double Lambda = 10724.0;
    double mu = 1.0 / 69.54;
    double beta = 0.066;
    double rho = 0.1;
    double phi = 1.0;
    double alpha_t = 0.33;
    double omega = 0.09;
    double d = 1.0;
    Incidence incidence = Incidence::standard;

    double xi1() const noexcept { return alpha_t + mu + d; }
    double xi2() const noexcept { return omega + mu; }
    /// mu [xi2 (rho + xi1) + xi1 phi + rho d] + rho omega d
    double script_n() const noexcept;

    /// Throws ContractError unless every rate is positive and finite.
    void validate() const;
};

/// Parameters used for the disease-free simulations (R0 = 0.29).
SicaParams sica_baseline();
/// Same with beta = 0.866 (endemic regime).
SicaParams sica_endemic_params();

StateVector sica_rhs(const SicaParams& p, std::span<const double> state);
Eigen::MatrixXd sica_jacobian(const SicaParams& p, std::span<const double> state);
ModelDefinition sica_model(const SicaParams& p);

/// beta xi1 xi2 / N, the printed formula. Independent of the incidence switch.
double sica_r0(const SicaParams& p);
/// Threshold of the configured incidence: sica_r0 for standard incidence,
/// sica_r0 * Lambda/mu for mass action.
double sica_threshold_r0(const SicaParams& p);

StateVector sica_disease_free(const SicaParams& p);
/// Endemic equilibrium by damped Newton. Throws NoEndemicEquilibrium when
/// sica_threshold_r0 <= 1 and SolverError when Newton fails.
StateVector sica_endemic(const SicaParams& p);

/// Spectral abscissa of the (I, C, A) block of the Jacobian at E_f.
double sica_dfe_spectral_abscissa(const SicaParams& p);

LyapunovFunctional sica_v0(const SicaParams& p);
LyapunovFunctional sica_v1(const SicaParams& p);

struct TeivParams {
    double lambda = 1.0;
    double mu_T = 1.0;
    double mu_E = 1.0;
    double mu_I = 1.0;
    double mu_V = 1.0;
    double rho = 1.0;
    double gamma = 1.0;
    double k = 1.0;
    double beta = 1.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;

    void validate() const;
};

double teiv_incidence(const TeivParams& p, double T, double V);
StateVector teiv_rhs(const TeivParams& p, std::span<const double> state);
Eigen::MatrixXd teiv_jacobian(const TeivParams& p, std::span<const double> state);
ModelDefinition teiv_model(const TeivParams& p);
double teiv_r0(const TeivParams& p);

/// Infection-free equilibrium first; the chronic one is appended when R0 > 1.
std::vector<StateVector> teiv_equilibria(const TeivParams& p);

/// Spectral abscissa of the (E, I, V) block of the Jacobian at the
/// infection-free equilibrium.
double teiv_ife_spectral_abscissa(const TeivParams& p);

/// Functional anchored at an equilibrium. Throws ContractError if the anchor
/// is not one.
LyapunovFunctional teiv_lyapunov(const TeivParams& p, std::span<const double> anchor);

/// ||rhs(x)||_inf / max(1, ||x||_inf).
double relative_residual(const StateVector& rhs, std::span<const double> x);

} // namespace fracstab
