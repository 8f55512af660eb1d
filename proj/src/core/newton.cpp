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
#include "fracstab/newton.hpp"
#include "fracstab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace fracstab {

NewtonResult damped_newton(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
                           const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
                           Eigen::VectorXd x, const NewtonOptions& options)
{
    Eigen::VectorXd r = residual(x);
    double rnorm = r.norm();
    if (!std::isfinite(rnorm))
        throw SolverError("Newton: non-finite residual at the seed");

    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        const Eigen::MatrixXd J = jacobian(x);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible())
            throw SolverError("Newton: singular Jacobian at iteration " + std::to_string(it));
        Eigen::VectorXd dx = -lu.solve(r);

        double lambda = 1.0;
        Eigen::VectorXd trial;
        Eigen::VectorXd rtrial;
        double tnorm = 0.0;
        std::size_t halvings = 0;
        for (;; ++halvings) {
            trial = x + lambda * dx;
            const bool admissible = !options.keep_nonnegative || (trial.array() >= 0.0).all();
            if (admissible) {
                rtrial = residual(trial);
                tnorm = rtrial.norm();
                if (std::isfinite(tnorm) && tnorm <= rnorm)
                    break;
            }
            if (halvings >= options.max_halvings) {
                // No descent possible: accept the full step only if we are
                // already at round-off level, otherwise give up.
                if (dx.norm() <= options.step_tolerance * std::max(1.0, x.norm()))
                    return {x, it, rnorm};
                throw SolverError("Newton: line search failed at iteration " + std::to_string(it));
            }
            lambda *= 0.5;
        }

        const double step = (lambda * dx).norm();
        x = trial;
        r = rtrial;
        rnorm = tnorm;
        if (step <= options.step_tolerance * std::max(1.0, x.norm()))
            return {x, it, rnorm};
    }
    throw SolverError("Newton: no convergence after " + std::to_string(options.max_iterations) + " iterations");
}

double spectral_abscissa(const Eigen::MatrixXd& m)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    if (es.info() != Eigen::Success)
        throw SolverError("eigenvalue computation failed");
    return es.eigenvalues().real().maxCoeff();
}

} // namespace fracstab
