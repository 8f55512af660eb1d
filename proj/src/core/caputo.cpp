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
#include "fracstab/caputo.hpp"
#include "fracstab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracstab {

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("fractional order must lie in (0, 1], got " + std::to_string(alpha));
}

UniformGrid::UniformGrid(double t0_, double h_, std::size_t n_steps_)
    : t0(t0_), h(h_), n_steps(n_steps_)
{
    if (!std::isfinite(t0) || !std::isfinite(h) || !(h > 0.0))
        throw GridError("grid step must be positive and finite");
    if (n_steps < 1)
        throw GridError("grid needs at least one step");
}

SampledSignal::SampledSignal(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size())
        throw GridError("signal length " + std::to_string(values_.size()) +
                        " does not match grid node count " + std::to_string(grid_.size()));
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (!std::isfinite(values_[k]))
            throw DomainError("non-finite signal value at node " + std::to_string(k));
}

double SampledSignal::max_abs() const noexcept
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

double gamma_fn(double x)
{
    if (!std::isfinite(x) || x <= 0.0)
        throw DomainError("gamma_fn requires a finite positive argument");
    return std::tgamma(x);
}

std::vector<double> l1_weights(FractionalOrder order, std::size_t count)
{
    const double p = 1.0 - order.value();
    std::vector<double> c(count);
    double prev = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
        const double next = std::pow(static_cast<double>(m + 1), p);
        c[m] = next - prev;
        prev = next;
    }
    return c;
}

SampledSignal l1_caputo(const SampledSignal& signal, FractionalOrder order)
{
    const auto u = signal.values();
    const std::size_t n = signal.size();
    if (n < 2)
        throw GridError("l1_caputo needs at least two nodes");
    const double h = signal.grid().h;

    std::vector<double> out(n, 0.0);
    if (order.classical()) {
        for (std::size_t k = 1; k < n; ++k)
            out[k] = (u[k] - u[k - 1]) / h;
    } else {
        const double alpha = order.value();
        const double scale = std::pow(h, -alpha) / gamma_fn(2.0 - alpha);
        const std::vector<double> c = l1_weights(order, n - 1);
        std::vector<double> du(n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j)
            du[j] = u[j + 1] - u[j];
        // D u_k = scale * sum_{j<k} c_{k-1-j} (u_{j+1} - u_j)
        for (std::size_t k = 1; k < n; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < k; ++j)
                acc += c[k - 1 - j] * du[j];
            out[k] = scale * acc;
        }
    }
    out[0] = out[1];
    SampledSignal result(signal.grid(), std::move(out));
    result.mark_head_copied();
    return result;
}

std::vector<double> gl_weights(FractionalOrder order, std::size_t count)
{
    const double alpha = order.value();
    std::vector<double> w(count + 1);
    w[0] = 1.0;
    for (std::size_t j = 1; j <= count; ++j)
        w[j] = w[j - 1] * (1.0 - (alpha + 1.0) / static_cast<double>(j));
    return w;
}

AbmWeights abm_weights(FractionalOrder order, std::size_t step_index, double h)
{
    if (step_index < 1)
        throw ContractError("abm_weights: step_index must be >= 1");
    if (!(h > 0.0) || !std::isfinite(h))
        throw GridError("abm_weights: step must be positive");

    const double a = order.value();
    const auto k = static_cast<double>(step_index);
    const double ha = std::pow(h, a);

    AbmWeights w;
    w.predictor.resize(step_index);
    for (std::size_t j = 0; j < step_index; ++j) {
        const double lag = k - static_cast<double>(j);
        w.predictor[j] = ha / a * (std::pow(lag, a) - std::pow(lag - 1.0, a));
    }

    const double cs = ha / (a * (a + 1.0));
    w.corrector.resize(step_index + 1);
    w.corrector[0] = cs * (std::pow(k - 1.0, a + 1.0) - (k - 1.0 - a) * std::pow(k, a));
    for (std::size_t j = 1; j < step_index; ++j) {
        const double lag = k - static_cast<double>(j);
        w.corrector[j] = cs * (std::pow(lag + 1.0, a + 1.0) + std::pow(lag - 1.0, a + 1.0) -
                               2.0 * std::pow(lag, a + 1.0));
    }
    w.corrector[step_index] = cs;
    return w;
}

} // namespace fracstab
