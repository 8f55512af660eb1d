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
#include "fracstab/solver.hpp"
#include "fracstab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fracstab {

StateVector ModelDefinition::eval(std::span<const double> state) const
{
    StateVector out(dimension, 0.0);
    rhs(state, out);
    return out;
}

Trajectory::Trajectory(UniformGrid grid, std::size_t dimension, FractionalOrder order, std::string model_name)
    : grid_(grid), dim_(dimension), order_(order), model_name_(std::move(model_name)),
      data_(grid.size() * dimension, 0.0)
{
}

SampledSignal Trajectory::component(std::size_t i) const
{
    if (i >= dim_)
        throw ContractError("component index out of range");
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k)
        v[k] = data_[k * dim_ + i];
    return SampledSignal(grid_, std::move(v));
}

namespace {

void check_inputs(const ModelDefinition& model, std::span<const double> x0)
{
    if (model.dimension == 0 || !model.rhs)
        throw ContractError("model '" + model.name + "' has no dimension or right-hand side");
    if (x0.size() != model.dimension)
        throw ContractError("initial state has dimension " + std::to_string(x0.size()) + ", model '" +
                            model.name + "' expects " + std::to_string(model.dimension));
    for (double v : x0)
        if (!std::isfinite(v))
            throw DivergenceError(0, "non-finite initial state");
}

void check_finite(std::span<const double> s, std::size_t node)
{
    for (double v : s)
        if (!std::isfinite(v))
            throw DivergenceError(node, "solver produced a non-finite state");
}

// Evaluates the field and guards against rhs implementations that change the
// output size or return garbage.
void eval_rhs(const ModelDefinition& model, std::span<const double> u, std::span<double> out, std::size_t node)
{
    model.rhs(u, out);
    check_finite(out, node);
}

std::size_t window_start(std::size_t k, const SolverOptions& opt)
{
    if (!opt.memory_window || *opt.memory_window >= k)
        return 0;
    return k - *opt.memory_window;
}

} // namespace

Trajectory solve_fde_abm(const ModelDefinition& model, FractionalOrder order, std::span<const double> x0,
                         const UniformGrid& grid, const SolverOptions& options)
{
    check_inputs(model, x0);
    const std::size_t dim = model.dimension;
    const std::size_t n = grid.n_steps;
    const double a = order.value();
    const double h = grid.h;

    Trajectory traj(grid, dim, order, model.name);
    std::copy(x0.begin(), x0.end(), traj.state(0).begin());

    // All weights depend only on the lag k - j, so the power tables are built
    // once: pa[m] = m^a, pa1[m] = m^{a+1}.
    std::vector<double> pa(n + 2), pa1(n + 2);
    for (std::size_t m = 0; m < n + 2; ++m) {
        const auto md = static_cast<double>(m);
        pa[m] = std::pow(md, a);
        pa1[m] = std::pow(md, a + 1.0);
    }
    const double ga = gamma_fn(a);
    const double pred_scale = std::pow(h, a) / (a * ga);           // b / Gamma(a)
    const double corr_scale = std::pow(h, a) / gamma_fn(a + 2.0);  // a-weights / Gamma(a)

    // b_lag = pa[lag] - pa[lag-1], lag = k - j >= 1
    std::vector<double> b(n + 1, 0.0);
    for (std::size_t lag = 1; lag <= n; ++lag)
        b[lag] = pa[lag] - pa[lag - 1];
    // interior corrector weights, lag = k - j in 1..k-1
    std::vector<double> c(n + 1, 0.0);
    for (std::size_t lag = 1; lag <= n; ++lag)
        c[lag] = pa1[lag + 1] + pa1[lag - 1] - 2.0 * pa1[lag];

    std::vector<double> f((n + 1) * dim, 0.0);
    eval_rhs(model, traj.state(0), {f.data(), dim}, 0);

    std::vector<double> pred_sum(dim), corr_sum(dim), predicted(dim), fp(dim);
    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t j0 = window_start(k, options);
        std::fill(pred_sum.begin(), pred_sum.end(), 0.0);
        std::fill(corr_sum.begin(), corr_sum.end(), 0.0);

        for (std::size_t j = j0; j < k; ++j) {
            const std::size_t lag = k - j;
            const double* fj = f.data() + j * dim;
            const double wb = b[lag];
            double wc;
            if (j == 0) {
                const auto kd = static_cast<double>(k);
                wc = pa1[k - 1] - (kd - 1.0 - a) * pa[k];
            } else {
                wc = c[lag];
            }
            for (std::size_t i = 0; i < dim; ++i) {
                pred_sum[i] += wb * fj[i];
                corr_sum[i] += wc * fj[i];
            }
        }

        for (std::size_t i = 0; i < dim; ++i)
            predicted[i] = x0[i] + pred_scale * pred_sum[i];
        check_finite(predicted, k);
        eval_rhs(model, predicted, fp, k);

        auto yk = traj.state(k);
        for (std::size_t i = 0; i < dim; ++i)
            yk[i] = x0[i] + corr_scale * (corr_sum[i] + fp[i]);
        check_finite(yk, k);
        eval_rhs(model, yk, {f.data() + k * dim, dim}, k);
    }
    return traj;
}

Trajectory solve_fde_gl(const ModelDefinition& model, FractionalOrder order, std::span<const double> x0,
                        const UniformGrid& grid, const SolverOptions& options)
{
    check_inputs(model, x0);
    const std::size_t dim = model.dimension;
    const std::size_t n = grid.n_steps;
    const double ha = std::pow(grid.h, order.value());
    const std::vector<double> w = gl_weights(order, n);

    Trajectory traj(grid, dim, order, model.name);
    std::copy(x0.begin(), x0.end(), traj.state(0).begin());

    // Caputo form: sum_{j=0}^{k} w_j (y_{k-j} - y_0) = h^a f(y_{k-1})
    std::vector<double> fprev(dim), acc(dim);
    for (std::size_t k = 1; k <= n; ++k) {
        eval_rhs(model, traj.state(k - 1), fprev, k - 1);
        std::fill(acc.begin(), acc.end(), 0.0);
        const std::size_t jmax = options.memory_window ? std::min(k, *options.memory_window) : k;
        for (std::size_t j = 1; j <= jmax; ++j) {
            const auto y = traj.state(k - j);
            for (std::size_t i = 0; i < dim; ++i)
                acc[i] += w[j] * (y[i] - x0[i]);
        }
        auto yk = traj.state(k);
        for (std::size_t i = 0; i < dim; ++i)
            yk[i] = x0[i] - acc[i] + ha * fprev[i];
        check_finite(yk, k);
    }
    return traj;
}

Trajectory solve_ode_rk4(const ModelDefinition& model, std::span<const double> x0, const UniformGrid& grid)
{
    check_inputs(model, x0);
    const std::size_t dim = model.dimension;
    const double h = grid.h;

    Trajectory traj(grid, dim, FractionalOrder(1.0), model.name);
    std::copy(x0.begin(), x0.end(), traj.state(0).begin());

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    for (std::size_t k = 1; k <= grid.n_steps; ++k) {
        const auto y = traj.state(k - 1);
        eval_rhs(model, y, k1, k - 1);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + 0.5 * h * k1[i];
        eval_rhs(model, tmp, k2, k);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + 0.5 * h * k2[i];
        eval_rhs(model, tmp, k3, k);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * k3[i];
        eval_rhs(model, tmp, k4, k);

        auto yk = traj.state(k);
        for (std::size_t i = 0; i < dim; ++i)
            yk[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        check_finite(yk, k);
    }
    return traj;
}

std::vector<Undershoot> undershoot_report(const Trajectory& traj, double relative_threshold)
{
    double scale = 0.0;
    for (double v : traj.data())
        scale = std::max(scale, std::abs(v));
    const double floor = -relative_threshold * scale;

    std::vector<Undershoot> out;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto s = traj.state(k);
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] < floor)
                out.push_back({k, i, s[i]});
    }
    return out;
}

} // namespace fracstab
