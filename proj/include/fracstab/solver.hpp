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

#include "fracstab/caputo.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fracstab {

using StateVector = std::vector<double>;

/// Right-hand side f(u) of du/dt = f(u) or D^alpha u = f(u). Writes into out,
/// which has the model dimension. Must be pure: solvers and workers share it.
using VectorField = std::function<void(std::span<const double> state, std::span<double> out)>;

struct ModelDefinition {
    std::size_t dimension = 0;
    VectorField rhs;
    std::string name;
    std::vector<std::string> state_labels;

    StateVector eval(std::span<const double> state) const;
};

class Trajectory {
public:
    Trajectory(UniformGrid grid, std::size_t dimension, FractionalOrder order, std::string model_name);

    const UniformGrid& grid() const noexcept { return grid_; }
    std::size_t dimension() const noexcept { return dim_; }
    std::size_t size() const noexcept { return grid_.size(); }
    FractionalOrder order() const noexcept { return order_; }
    const std::string& model_name() const noexcept { return model_name_; }

    std::span<const double> state(std::size_t k) const { return {data_.data() + k * dim_, dim_}; }
    std::span<double> state(std::size_t k) { return {data_.data() + k * dim_, dim_}; }
    std::span<const double> data() const noexcept { return data_; }

    /// Component i at every node.
    SampledSignal component(std::size_t i) const;

private:
    UniformGrid grid_;
    std::size_t dim_;
    FractionalOrder order_;
    std::string model_name_;
    std::vector<double> data_;
};

struct SolverOptions {
    /// Fixed-window short-memory truncation for the fractional solvers. The
    /// history sums only cover the last `memory_window` nodes. Unset means
    /// full memory.
    std::optional<std::size_t> memory_window;
};

/// Fractional Adams-Bashforth-Moulton predictor-corrector (PECE, one
/// corrector pass, full memory by default).
Trajectory solve_fde_abm(const ModelDefinition& model, FractionalOrder order, std::span<const double> x0,
                         const UniformGrid& grid, const SolverOptions& options = {});

/// Explicit Grunwald-Letnikov scheme. First order; used as an oracle for the
/// ABM solver.
Trajectory solve_fde_gl(const ModelDefinition& model, FractionalOrder order, std::span<const double> x0,
                        const UniformGrid& grid, const SolverOptions& options = {});

/// Classical fourth-order Runge-Kutta for du/dt = f(u). The trajectory order is 1.
Trajectory solve_ode_rk4(const ModelDefinition& model, std::span<const double> x0, const UniformGrid& grid);

struct Undershoot {
    std::size_t node;
    std::size_t component;
    double value;
};

/// Components that dipped below -1e-8 * (largest |state| on the trajectory).
/// States are never clamped by the solvers; this is the post-hoc flag.
std::vector<Undershoot> undershoot_report(const Trajectory& traj, double relative_threshold = 1e-8);

} // namespace fracstab
