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

#include <Eigen/Dense>

#include <cstddef>
#include <functional>

namespace fracstab {

struct NewtonOptions {
    std::size_t max_iterations = 200;
    /// Converged when ||dx|| <= step_tolerance * max(1, ||x||).
    double step_tolerance = 1e-12;
    std::size_t max_halvings = 60;
    /// Halve steps that leave the non-negative orthant.
    bool keep_nonnegative = true;
};

struct NewtonResult {
    Eigen::VectorXd x;
    std::size_t iterations = 0;
    double residual_norm = 0.0;
};

/// Damped Newton iteration for F(x) = 0 with an analytic Jacobian J(x).
/// Steps are halved while the residual grows. Throws SolverError when the
/// iteration limit is exhausted or the Jacobian is singular.
NewtonResult damped_newton(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
                           const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
                           Eigen::VectorXd x0, const NewtonOptions& options = {});

/// max Re(lambda) over the eigenvalues of a square matrix.
double spectral_abscissa(const Eigen::MatrixXd& m);

} // namespace fracstab
