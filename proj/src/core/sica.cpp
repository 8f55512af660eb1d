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
#include "fracstab/errors.hpp"
#include "fracstab/models.hpp"
#include "fracstab/newton.hpp"

#include <algorithm>
#include <cmath>

namespace fracstab {

const char* to_string(Incidence incidence) noexcept
{
    return incidence == Incidence::standard ? "standard" : "mass_action";
}

Incidence incidence_from_string(const std::string& s)
{
    if (s == "standard")
        return Incidence::standard;
    if (s == "mass_action")
        return Incidence::mass_action;
    throw ParseError("unknown incidence '" + s + "' (expected standard or mass_action)");
}

double SicaParams::script_n() const noexcept
{
    return mu * (xi2() * (rho + xi1()) + xi1() * phi + rho * d) + rho * omega * d;
}

void SicaParams::validate() const
{
    const double rates[] = {Lambda, mu, beta, rho, phi, alpha_t, omega, d};
    for (double r : rates)
        if (!(r > 0.0) || !std::isfinite(r))
            throw ContractError("SICA rates must be positive and finite");
}

SicaParams sica_baseline()
{
    return SicaParams{};
}

SicaParams sica_endemic_params()
{
    SicaParams p;
    p.beta = 0.866;
    return p;
}

namespace {

struct IncidencePartials {
    double value, dS, dI, dC, dA;
};

IncidencePartials incidence(const SicaParams& p, std::span<const double> u)
{
    const double S = u[0], I = u[1], C = u[2], A = u[3];
    if (p.incidence == Incidence::mass_action)
        return {p.beta * S * I, p.beta * I, p.beta * S, 0.0, 0.0};
    const double N = S + I + C + A;
    if (N == 0.0)
        throw DomainError("standard incidence undefined at total population 0");
    const double v = p.beta * S * I / N;
    const double N2 = N * N;
    return {v, p.beta * I * (N - S) / N2, p.beta * S * (N - I) / N2, -v / N, -v / N};
}

void check_dim(std::span<const double> state)
{
    if (state.size() != 4)
        throw ContractError("SICA state must have 4 components");
}

} // namespace

StateVector sica_rhs(const SicaParams& p, std::span<const double> u)
{
    check_dim(u);
    const double S = u[0], I = u[1], C = u[2], A = u[3];
    const double inc = incidence(p, u).value;
    return {p.Lambda - p.mu * S - inc,
            inc - (p.rho + p.phi + p.mu) * I + p.alpha_t * A + p.omega * C,
            p.phi * I - p.xi2() * C,
            p.rho * I - p.xi1() * A};
}

Eigen::MatrixXd sica_jacobian(const SicaParams& p, std::span<const double> u)
{
    check_dim(u);
    const auto i = incidence(p, u);
    Eigen::MatrixXd J(4, 4);
    J << -p.mu - i.dS, -i.dI, -i.dC, -i.dA,
         i.dS, i.dI - (p.rho + p.phi + p.mu), p.omega + i.dC, p.alpha_t + i.dA,
         0.0, p.phi, -p.xi2(), 0.0,
         0.0, p.rho, 0.0, -p.xi1();
    return J;
}

ModelDefinition sica_model(const SicaParams& p)
{
    p.validate();
    ModelDefinition m;
    m.dimension = 4;
    m.name = "sica";
    m.state_labels = {"S", "I", "C", "A"};
    m.rhs = [p](std::span<const double> u, std::span<double> out) {
        const StateVector f = sica_rhs(p, u);
        std::copy(f.begin(), f.end(), out.begin());
    };
    return m;
}

double sica_r0(const SicaParams& p)
{
    return p.beta * p.xi1() * p.xi2() / p.script_n();
}

double sica_threshold_r0(const SicaParams& p)
{
    const double r0 = sica_r0(p);
    return p.incidence == Incidence::mass_action ? r0 * p.Lambda / p.mu : r0;
}

StateVector sica_disease_free(const SicaParams& p)
{
    return {p.Lambda / p.mu, 0.0, 0.0, 0.0};
}

double relative_residual(const StateVector& rhs, std::span<const double> x)
{
    double r = 0.0, s = 1.0;
    for (double v : rhs)
        r = std::max(r, std::abs(v));
    for (double v : x)
        s = std::max(s, std::abs(v));
    return r / s;
}

StateVector sica_endemic(const SicaParams& p)
{
    p.validate();
    const double r0 = sica_threshold_r0(p);
    if (!(r0 > 1.0))
        throw NoEndemicEquilibrium("no endemic equilibrium: threshold R0 = " + std::to_string(r0) + " <= 1");

    // Seed from the C and A equations, C = phi I / xi2 and A = rho I / xi1,
    // together with the I balance inc = (N / (xi1 xi2)) I.
    const double m = 1.0 + p.phi / p.xi2() + p.rho / p.xi1();
    double S, I;
    if (p.incidence == Incidence::standard) {
        // S / N = 1 / R0, N = S + m I, S = (Lambda - beta I / R0) / mu
        I = p.Lambda * (r0 - 1.0) / p.mu / (m + p.beta * (r0 - 1.0) / (p.mu * r0));
        S = (p.Lambda - p.beta * I / r0) / p.mu;
    } else {
        S = p.script_n() / (p.beta * p.xi1() * p.xi2());
        I = (p.Lambda - p.mu * S) / (p.beta * S);
    }
    Eigen::VectorXd seed(4);
    seed << S, I, p.phi * I / p.xi2(), p.rho * I / p.xi1();

    auto F = [&p](const Eigen::VectorXd& x) {
        const StateVector f = sica_rhs(p, {x.data(), 4});
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(f.data(), 4));
    };
    auto J = [&p](const Eigen::VectorXd& x) { return sica_jacobian(p, {x.data(), 4}); };
    const NewtonResult res = damped_newton(F, J, seed);

    StateVector e(res.x.data(), res.x.data() + 4);
    const double rr = relative_residual(sica_rhs(p, e), e);
    if (!(rr <= 1e-9))
        throw SolverError("endemic equilibrium residual " + std::to_string(rr) + " above 1e-9");
    return e;
}

double sica_dfe_spectral_abscissa(const SicaParams& p)
{
    const StateVector ef = sica_disease_free(p);
    const Eigen::MatrixXd J = sica_jacobian(p, ef);
    return spectral_abscissa(J.block(1, 1, 3, 3));
}

LyapunovFunctional sica_v0(const SicaParams& p)
{
    const double S0 = p.Lambda / p.mu;
    const auto id = GFunction::identity();
    return LyapunovFunctional({{1.0, id, S0, 0},
                               {1.0, id, 0.0, 1},
                               {p.omega / p.xi2(), id, 0.0, 2},
                               {p.alpha_t / p.xi1(), id, 0.0, 3}},
                              {}, {}, "V0");
}

LyapunovFunctional sica_v1(const SicaParams& p)
{
    const StateVector e = sica_endemic(p);
    return build_log_volterra({{1.0, e[0]}, {1.0, e[1]}, {p.omega / p.xi2(), e[2]}, {p.alpha_t / p.xi1(), e[3]}},
                              "V1");
}

} // namespace fracstab
