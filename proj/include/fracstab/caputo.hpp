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

// Discrete fractional-calculus primitives on uniform grids: the L1 Caputo
// operator, Grunwald-Letnikov binomial weights and the fractional
// Adams-Bashforth-Moulton quadrature weights.

#include <cstddef>
#include <span>
#include <vector>

namespace fracstab {

/// Order of the Caputo operator, 0 < alpha <= 1.
class FractionalOrder {
public:
    explicit FractionalOrder(double alpha);

    double value() const noexcept { return alpha_; }
    /// alpha == 1: every operator falls back to its classical counterpart.
    bool classical() const noexcept { return alpha_ == 1.0; }

private:
    double alpha_;
};

struct UniformGrid {
    UniformGrid(double t0, double h, std::size_t n_steps);

    double t0;
    double h;
    std::size_t n_steps;

    double node(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * h; }
    std::size_t size() const noexcept { return n_steps + 1; }
    double t_end() const noexcept { return node(n_steps); }
};

class SampledSignal {
public:
    SampledSignal(UniformGrid grid, std::vector<double> values);

    const UniformGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Set on outputs of l1_caputo: node 0 holds a copy of node 1.
    bool head_copied() const noexcept { return head_copied_; }
    void mark_head_copied() noexcept { head_copied_ = true; }

    double max_abs() const noexcept;

private:
    UniformGrid grid_;
    std::vector<double> values_;
    bool head_copied_ = false;
};

/// Gamma function for x > 0. Throws DomainError otherwise.
double gamma_fn(double x);

/// L1 estimate of the Caputo derivative at every node k >= 1. Node 0 copies
/// node 1 and the result is flagged with head_copied(). At alpha = 1 this is
/// the backward difference quotient.
SampledSignal l1_caputo(const SampledSignal& signal, FractionalOrder order);

/// L1 weights c_m = (m+1)^{1-alpha} - m^{1-alpha}, m = 0..count-1, without the
/// h^{-alpha}/Gamma(2-alpha) prefactor.
std::vector<double> l1_weights(FractionalOrder order, std::size_t count);

/// Grunwald-Letnikov weights w_0..w_count, w_j = (-1)^j binom(alpha, j).
std::vector<double> gl_weights(FractionalOrder order, std::size_t count);

/// Fractional Adams quadrature weights for advancing to node k = step_index.
/// predictor[j] = (h^a/a)((k-j)^a - (k-1-j)^a), j = 0..k-1.
/// corrector[j], j = 0..k, carries the endpoint corrections and is scaled by
/// h^a/(a(a+1)). Neither includes the 1/Gamma(a) factor, so at a = 1 they are
/// the rectangle and trapezoidal weights.
struct AbmWeights {
    std::vector<double> predictor;
    std::vector<double> corrector;
};

AbmWeights abm_weights(FractionalOrder order, std::size_t step_index, double h);

} // namespace fracstab
