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
#include "fracstab/lyapunov.hpp"
#include "fracstab/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracstab {

namespace {

constexpr int g_check_samples = 64;
constexpr double g_check_lo = 1e-6;
constexpr double g_check_hi = 1e6;

void check_admissible(const std::function<double(double)>& g, const std::string& label)
{
    if (!g)
        throw DomainError("g function '" + label + "' is empty");
    const double step = std::log(g_check_hi / g_check_lo) / (g_check_samples - 1);
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < g_check_samples; ++i) {
        const double s = g_check_lo * std::exp(step * i);
        const double v = g(s);
        if (!std::isfinite(v) || v < 0.0)
            throw DomainError("g function '" + label + "' is negative or non-finite at s = " + std::to_string(s));
        if (!(v > prev))
            throw DomainError("g function '" + label + "' is not strictly increasing near s = " + std::to_string(s));
        prev = v;
    }
}

double check_state(std::span<const double> state, std::size_t index)
{
    if (index >= state.size())
        throw ContractError("functional reads coordinate " + std::to_string(index) + " of a " +
                            std::to_string(state.size()) + "-dimensional state");
    return state[index];
}

// Multiplier dPsi/dx = 1 - g(xbar)/g(x); 1 for a linear (xbar = 0) part.
double psi_slope(const PsiComponent& p, double x)
{
    if (p.anchor == 0.0)
        return 1.0;
    if (p.g.is_identity()) {
        if (x == 0.0)
            throw DomainError("g vanishes at the evaluation point");
        return 1.0 - p.anchor / x;
    }
    const double gx = p.g(x);
    if (gx == 0.0)
        throw DomainError("g vanishes at the evaluation point");
    return 1.0 - p.g(p.anchor) / gx;
}

// Adaptive bisection over non-adaptive 15-point Gauss-Kronrod panels. Stops on
// a relative tolerance or once the error estimate reaches roundoff level.
template <class F>
double psi_quadrature(const F& f, double a, double b, double fmax, int depth)
{
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    const double val = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    err *= 0.5 * (b - a);  // boost reports the panel error on [-1, 1]
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (b - a) * (1.0 + fmax);
    if (err <= std::max(1e-13 * std::abs(val), floor) || depth >= 40)
        return val;
    const double m = 0.5 * (a + b);
    return psi_quadrature(f, a, m, fmax, depth + 1) + psi_quadrature(f, m, b, fmax, depth + 1);
}

} // namespace

GFunction::GFunction(std::function<double(double)> eval, std::string label)
    : eval_(std::move(eval)), label_(std::move(label))
{
    check_admissible(eval_, label_);
}

GFunction GFunction::identity()
{
    GFunction g([](double s) { return s; }, "s");
    g.identity_ = true;
    return g;
}

GFunction g_by_label(const std::string& label)
{
    if (label == "s")
        return GFunction::identity();
    if (label == "s2")
        return GFunction([](double s) { return s * s; }, label);
    if (label == "log1p")
        return GFunction([](double s) { return std::log1p(s) + 1e-6 * s; }, label);
    if (label == "s/(1+s)")
        return GFunction([](double s) { return s / (1.0 + s); }, label);
    throw DomainError("unknown g function '" + label + "' (expected s, s2, log1p or s/(1+s))");
}

LyapunovFunctional::LyapunovFunctional(std::vector<PsiComponent> psi_parts, std::vector<QuadComponent> quad_parts,
                                       std::vector<CrossQuadComponent> cross_parts, std::string label)
    : psi_(std::move(psi_parts)), quad_(std::move(quad_parts)), cross_(std::move(cross_parts)),
      label_(std::move(label))
{
    for (const auto& p : psi_) {
        if (!(p.weight > 0.0) || !std::isfinite(p.weight))
            throw ContractError("Psi weight must be positive");
        if (!(p.anchor >= 0.0) || !std::isfinite(p.anchor))
            throw ContractError("Psi anchor must be non-negative");
    }
    for (const auto& q : quad_)
        if (!(q.weight >= 0.0) || !std::isfinite(q.weight) || !std::isfinite(q.anchor))
            throw ContractError("quadratic weight must be non-negative");
    for (const auto& c : cross_) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight))
            throw ContractError("cross-quadratic weight must be non-negative");
        if (c.indices.size() != c.anchors.size() || c.indices.empty())
            throw ContractError("cross-quadratic part needs one anchor per index");
    }
}

std::size_t LyapunovFunctional::min_dimension() const noexcept
{
    std::size_t n = 0;
    for (const auto& p : psi_)
        n = std::max(n, p.index + 1);
    for (const auto& q : quad_)
        n = std::max(n, q.index + 1);
    for (const auto& c : cross_)
        for (auto i : c.indices)
            n = std::max(n, i + 1);
    return n;
}

double psi(const GFunction& g, double xstar, double x)
{
    if (!std::isfinite(x) || !std::isfinite(xstar) || xstar < 0.0)
        throw DomainError("psi: non-finite argument or negative anchor");
    if (xstar == 0.0)
        return x;
    if (x <= psi_state_floor)
        throw DomainError("psi: state " + std::to_string(x) + " at or below the positivity floor");
    if (x == xstar)
        return 0.0;

    if (g.is_identity()) {
        // xbar * (u - ln(1 + u)), u = x/xbar - 1
        const double u = x / xstar - 1.0;
        return xstar * (u - std::log1p(u));
    }

    const double gbar = g(xstar);
    auto integrand = [&](double s) {
        const double gs = g(s);
        if (!(gs > 0.0))
            throw DomainError("psi: g vanishes inside the integration range");
        return 1.0 - gbar / gs;
    };
    const double lo = std::min(x, xstar);
    const double hi = std::max(x, xstar);
    // The integrand is monotone on [lo, hi], so its size is bounded by the end
    // values; that bound sets a roundoff floor below which refinement is noise.
    const double fmax = std::max(std::abs(integrand(lo)), std::abs(integrand(hi)));
    const double val = psi_quadrature(integrand, lo, hi, fmax, 0);
    return x > xstar ? val : -val;
}

double eval_functional(const LyapunovFunctional& f, std::span<const double> state)
{
    double v = 0.0;
    for (const auto& p : f.psi_parts())
        v += p.weight * psi(p.g, p.anchor, check_state(state, p.index));
    for (const auto& q : f.quad_parts()) {
        const double d = check_state(state, q.index) - q.anchor;
        v += 0.5 * q.weight * d * d;
    }
    for (const auto& c : f.cross_parts()) {
        double s = 0.0;
        for (std::size_t j = 0; j < c.indices.size(); ++j)
            s += check_state(state, c.indices[j]) - c.anchors[j];
        v += c.weight * s * s;
    }
    return v;
}

double field_derivative(const LyapunovFunctional& f, const ModelDefinition& model, std::span<const double> state)
{
    if (state.size() != model.dimension)
        throw ContractError("state dimension does not match model '" + model.name + "'");
    if (f.min_dimension() > model.dimension)
        throw ContractError("functional reads coordinates beyond the model dimension");
    const StateVector rhs = model.eval(state);

    double d = 0.0;
    for (const auto& p : f.psi_parts()) {
        const double x = state[p.index];
        if (p.anchor > 0.0 && x <= psi_state_floor)
            throw DomainError("field_derivative: state at or below the positivity floor");
        d += p.weight * psi_slope(p, x) * rhs[p.index];
    }
    for (const auto& q : f.quad_parts())
        d += q.weight * (state[q.index] - q.anchor) * rhs[q.index];
    for (const auto& c : f.cross_parts()) {
        double s = 0.0, ds = 0.0;
        for (std::size_t j = 0; j < c.indices.size(); ++j) {
            s += state[c.indices[j]] - c.anchors[j];
            ds += rhs[c.indices[j]];
        }
        d += 2.0 * c.weight * s * ds;
    }
    return d;
}

SampledSignal functional_values(const LyapunovFunctional& f, const Trajectory& traj)
{
    std::vector<double> v(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k)
        v[k] = eval_functional(f, traj.state(k));
    return SampledSignal(traj.grid(), std::move(v));
}

SampledSignal caputo_of_functional(const LyapunovFunctional& f, const Trajectory& traj)
{
    return l1_caputo(functional_values(f, traj), traj.order());
}

const char* to_string(CertificateKind kind) noexcept
{
    switch (kind) {
    case CertificateKind::lemma_inequality:
        return "lemma_inequality";
    case CertificateKind::decrescence:
        return "decrescence";
    }
    return "unknown";
}

double default_tolerance(const UniformGrid& grid, FractionalOrder order, double scale)
{
    return 10.0 * std::pow(grid.h, 2.0 - order.value()) * scale;
}

Certificate lemma_certificate(const SampledSignal& x, const GFunction& g, double xbar, FractionalOrder order,
                              std::optional<double> tolerance)
{
    if (!(xbar > 0.0) || !std::isfinite(xbar))
        throw DomainError("lemma_certificate: xbar must be positive");
    const auto xs = x.values();
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (!(xs[k] > 0.0))
            throw SampleDomainError(k, "lemma_certificate: non-positive sample");

    std::vector<double> psi_vals(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k)
        psi_vals[k] = psi(g, xbar, xs[k]);
    const SampledSignal lhs = l1_caputo(SampledSignal(x.grid(), std::move(psi_vals)), order);
    const SampledSignal dx = l1_caputo(x, order);

    const double gbar = g(xbar);
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_node = 1;
    for (std::size_t k = 1; k < xs.size(); ++k) {
        const double rhs = (1.0 - gbar / g(xs[k])) * dx[k];
        const double v = lhs[k] - rhs;
        if (v > worst) {
            worst = v;
            worst_node = k;
        }
    }

    Certificate c{CertificateKind::lemma_inequality, worst, 0.0, false, std::nullopt, x.grid(), order.value()};
    c.tolerance = tolerance ? *tolerance : default_tolerance(x.grid(), order, x.max_abs());
    c.pass = c.max_violation <= c.tolerance;
    if (!c.pass)
        c.violating_node = worst_node;
    return c;
}

Certificate decrescence_certificate(const SampledSignal& signal, double tolerance, std::optional<double> order)
{
    Certificate c{CertificateKind::decrescence, -std::numeric_limits<double>::infinity(), tolerance, true,
                  std::nullopt, signal.grid(), order};
    for (std::size_t k = 0; k < signal.size(); ++k) {
        c.max_violation = std::max(c.max_violation, signal[k]);
        if (!c.violating_node && signal[k] > tolerance)
            c.violating_node = k;
    }
    c.pass = c.max_violation <= c.tolerance;
    return c;
}

std::string certificate_to_json(const Certificate& cert)
{
    nlohmann::ordered_json j;
    j["kind"] = to_string(cert.kind);
    j["max_violation"] = cert.max_violation;
    j["tolerance"] = cert.tolerance;
    j["pass"] = cert.pass;
    j["violating_node"] = cert.violating_node ? nlohmann::ordered_json(*cert.violating_node) : nullptr;
    j["grid"] = {{"t0", cert.grid.t0}, {"h", cert.grid.h}, {"n", cert.grid.n_steps}};
    j["order"] = cert.order ? nlohmann::ordered_json(*cert.order) : nullptr;
    return j.dump(2);
}

LyapunovFunctional build_log_volterra(const std::vector<std::pair<double, double>>& weights, std::string label)
{
    std::vector<PsiComponent> parts;
    parts.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        parts.push_back({weights[i].first, GFunction::identity(), weights[i].second, i});
    return LyapunovFunctional(std::move(parts), {}, {}, std::move(label));
}

} // namespace fracstab
