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

void TeivParams::validate() const
{
    const double rates[] = {lambda, mu_T, mu_E, mu_I, mu_V, rho, gamma, k, beta};
    for (double r : rates)
        if (!(r > 0.0) || !std::isfinite(r))
            throw ContractError("TEIV rates must be positive and finite");
    const double sat[] = {alpha1, alpha2, alpha3};
    for (double a : sat)
        if (!(a >= 0.0) || !std::isfinite(a))
            throw ContractError("TEIV saturation constants must be non-negative");
}

double teiv_incidence(const TeivParams& p, double T, double V)
{
    return p.beta * T / (1.0 + p.alpha1 * T + p.alpha2 * V + p.alpha3 * T * V);
}

namespace {

void check_dim(std::span<const double> state)
{
    if (state.size() != 4)
        throw ContractError("TEIV state must have 4 components");
}

} // namespace

StateVector teiv_rhs(const TeivParams& p, std::span<const double> u)
{
    check_dim(u);
    const double T = u[0], E = u[1], I = u[2], V = u[3];
    const double inf = teiv_incidence(p, T, V) * V;
    return {p.lambda - p.mu_T * T - inf + p.rho * E,
            inf - (p.mu_E + p.rho + p.gamma) * E,
            p.gamma * E - p.mu_I * I,
            p.k * I - p.mu_V * V};
}

Eigen::MatrixXd teiv_jacobian(const TeivParams& p, std::span<const double> u)
{
    check_dim(u);
    const double T = u[0], V = u[3];
    const double D = 1.0 + p.alpha1 * T + p.alpha2 * V + p.alpha3 * T * V;
    // d(fV)/dT and d(fV)/dV
    const double FT = p.beta * V * (1.0 + p.alpha2 * V) / (D * D);
    const double FV = p.beta * T * (1.0 + p.alpha1 * T) / (D * D);
    const double out_e = p.mu_E + p.rho + p.gamma;
    Eigen::MatrixXd J(4, 4);
    J << -p.mu_T - FT, p.rho, 0.0, -FV,
         FT, -out_e, 0.0, FV,
         0.0, p.gamma, -p.mu_I, 0.0,
         0.0, 0.0, p.k, -p.mu_V;
    return J;
}

ModelDefinition teiv_model(const TeivParams& p)
{
    p.validate();
    ModelDefinition m;
    m.dimension = 4;
    m.name = "teiv";
    m.state_labels = {"T", "E", "I", "V"};
    m.rhs = [p](std::span<const double> u, std::span<double> out) {
        const StateVector f = teiv_rhs(p, u);
        std::copy(f.begin(), f.end(), out.begin());
    };
    return m;
}

double teiv_r0(const TeivParams& p)
{
    return p.lambda * p.beta * p.k * p.gamma /
           (p.mu_I * p.mu_V * (p.lambda * p.alpha1 + p.mu_T) * (p.rho + p.mu_E + p.gamma));
}

std::vector<StateVector> teiv_equilibria(const TeivParams& p)
{
    p.validate();
    const double T0 = p.lambda / p.mu_T;
    std::vector<StateVector> out{{T0, 0.0, 0.0, 0.0}};
    if (!(teiv_r0(p) > 1.0))
        return out;

    // On the chronic branch E, I and V follow from T:
    //   E = (lambda - mu_T T) / (mu_E + gamma), I = gamma E / mu_I, V = k I / mu_V
    // and the E balance f(T, V) V = (mu_E + rho + gamma) E fixes T. Bisection
    // on that scalar balance seeds the Newton polish.
    const double out_e = p.mu_E + p.rho + p.gamma;
    const double vfac = p.k * p.gamma / (p.mu_I * p.mu_V);
    auto branch = [&](double T) {
        const double E = (p.lambda - p.mu_T * T) / (p.mu_E + p.gamma);
        const double I = p.gamma * E / p.mu_I;
        return StateVector{T, E, I, p.k * I / p.mu_V};
    };
    auto balance = [&](double T) {
        const double V = branch(T)[3];
        const double D = 1.0 + p.alpha1 * T + p.alpha2 * V + p.alpha3 * T * V;
        return p.beta * T * vfac / D - out_e;
    };
    double lo = 0.0, hi = T0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * T0; ++i) {
        const double mid = 0.5 * (lo + hi);
        (balance(mid) < 0.0 ? lo : hi) = mid;
    }
    const StateVector s = branch(0.5 * (lo + hi));
    Eigen::VectorXd seed = Eigen::Map<const Eigen::VectorXd>(s.data(), 4);

    auto F = [&p](const Eigen::VectorXd& x) {
        const StateVector f = teiv_rhs(p, {x.data(), 4});
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(f.data(), 4));
    };
    auto J = [&p](const Eigen::VectorXd& x) { return teiv_jacobian(p, {x.data(), 4}); };
    const NewtonResult res = damped_newton(F, J, seed);

    StateVector e(res.x.data(), res.x.data() + 4);
    const double rr = relative_residual(teiv_rhs(p, e), e);
    if (!(rr <= 1e-9))
        throw SolverError("chronic equilibrium residual " + std::to_string(rr) + " above 1e-9");
    out.push_back(std::move(e));
    return out;
}

double teiv_ife_spectral_abscissa(const TeivParams& p)
{
    const StateVector ife{p.lambda / p.mu_T, 0.0, 0.0, 0.0};
    const Eigen::MatrixXd J = teiv_jacobian(p, ife);
    return spectral_abscissa(J.block(1, 1, 3, 3));
}

LyapunovFunctional teiv_lyapunov(const TeivParams& p, std::span<const double> anchor)
{
    p.validate();
    check_dim(anchor);
    for (double v : anchor)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ContractError("TEIV anchor must be non-negative");
    const StateVector a(anchor.begin(), anchor.end());
    const double rr = relative_residual(teiv_rhs(p, a), a);
    if (!(rr <= 1e-9))
        throw ContractError("TEIV anchor is not an equilibrium (relative residual " + std::to_string(rr) + ")");

    const double Tb = a[0], Eb = a[1], Ib = a[2], Vb = a[3];
    const double out_e = p.rho + p.mu_E + p.gamma;

    std::vector<PsiComponent> parts;
    if (Tb > 0.0) {
        GFunction gT([p, Vb](double theta) { return teiv_incidence(p, theta, Vb); }, "f(.,Vbar)");
        parts.push_back({1.0, std::move(gT), Tb, 0});
    } else {
        parts.push_back({1.0, GFunction::identity(), 0.0, 0});
    }
    const auto id = GFunction::identity();
    parts.push_back({1.0, id, Eb, 1});
    parts.push_back({out_e / p.gamma, id, Ib, 2});
    parts.push_back({p.mu_I * out_e / (p.k * p.gamma), id, Vb, 3});

    const double D = 1.0 + p.alpha1 * Tb + p.alpha2 * Vb + p.alpha3 * Tb * Vb;
    CrossQuadComponent cross{p.rho * (1.0 + p.alpha2 * Vb) / (2.0 * D), {0, 1}, {Tb, Eb}};
    return LyapunovFunctional(std::move(parts), {}, {std::move(cross)}, "L");
}

} // namespace fracstab
