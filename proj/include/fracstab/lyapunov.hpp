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

// Psi-type Lyapunov functionals
//
//   Psi(x) = x - xbar - int_{xbar}^{x} g(xbar)/g(s) ds,
//
// their weighted sums with optional quadratic parts, derivatives along a
// vector field or a sampled trajectory, and numerical certificates for the
// fractional chain-rule inequality
//
//   D^a Psi(x(t)) <= (1 - g(xbar)/g(x(t))) D^a x(t)
//
// and for decrescence (D^a V <= 0) along computed trajectories. Certificates
// are evidence about a computed trajectory, not proofs about the system.

#include "fracstab/caputo.hpp"
#include "fracstab/solver.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracstab {

/// Non-negative, strictly increasing scalar map on (0, inf).
class GFunction {
public:
    /// Runs the admissibility check: 64 log-spaced samples on [1e-6, 1e6]
    /// must be non-negative and strictly increasing. The check is sampled,
    /// not a proof. Throws DomainError when it fails.
    GFunction(std::function<double(double)> eval, std::string label);

    /// g(s) = s. Psi then has the closed log form.
    static GFunction identity();

    double operator()(double s) const { return eval_(s); }
    const std::string& label() const noexcept { return label_; }
    bool is_identity() const noexcept { return identity_; }

private:
    std::function<double(double)> eval_;
    std::string label_;
    bool identity_ = false;
};

/// Named g functions usable from configs and the CLI: "s", "s2", "log1p"
/// (ln(1+s) + 1e-6 s) and "s/(1+s)".
GFunction g_by_label(const std::string& label);

struct PsiComponent {
    double weight;
    GFunction g;
    double anchor;
    std::size_t index;
};

struct QuadComponent {
    double weight;
    double anchor;
    std::size_t index;
};

/// weight * (sum_i (x_i - anchor_i))^2 over a set of coordinates.
struct CrossQuadComponent {
    double weight;
    std::vector<std::size_t> indices;
    std::vector<double> anchors;
};

class LyapunovFunctional {
public:
    LyapunovFunctional(std::vector<PsiComponent> psi_parts, std::vector<QuadComponent> quad_parts = {},
                       std::vector<CrossQuadComponent> cross_parts = {}, std::string label = "V");

    const std::vector<PsiComponent>& psi_parts() const noexcept { return psi_; }
    const std::vector<QuadComponent>& quad_parts() const noexcept { return quad_; }
    const std::vector<CrossQuadComponent>& cross_parts() const noexcept { return cross_; }
    const std::string& label() const noexcept { return label_; }

    /// Largest coordinate index referenced plus one.
    std::size_t min_dimension() const noexcept;

private:
    std::vector<PsiComponent> psi_;
    std::vector<QuadComponent> quad_;
    std::vector<CrossQuadComponent> cross_;
    std::string label_;
};

/// Below this a Psi part anchored away from zero reports a domain error
/// instead of returning a huge value.
inline constexpr double psi_state_floor = 1e-30;

double psi(const GFunction& g, double xstar, double x);

double eval_functional(const LyapunovFunctional& f, std::span<const double> state);

/// Classical derivative of V along the field: grad V(state) . f(state).
double field_derivative(const LyapunovFunctional& f, const ModelDefinition& model, std::span<const double> state);

/// V along the trajectory, then the L1 Caputo derivative with the
/// trajectory's order.
SampledSignal functional_values(const LyapunovFunctional& f, const Trajectory& traj);
SampledSignal caputo_of_functional(const LyapunovFunctional& f, const Trajectory& traj);

enum class CertificateKind { lemma_inequality, decrescence };

const char* to_string(CertificateKind kind) noexcept;

struct Certificate {
    CertificateKind kind;
    double max_violation;
    double tolerance;
    bool pass;
    std::optional<std::size_t> violating_node;
    UniformGrid grid;
    std::optional<double> order;
};

/// 10 h^{2-a} scale: the L1 truncation budget used as default tolerance.
double default_tolerance(const UniformGrid& grid, FractionalOrder order, double scale);

/// Pointwise check of D^a Psi(x) <= (1 - g(xbar)/g(x)) D^a x at nodes k >= 1.
/// Without an explicit tolerance, default_tolerance(grid, order, max |x|) is used.
Certificate lemma_certificate(const SampledSignal& x, const GFunction& g, double xbar, FractionalOrder order,
                              std::optional<double> tolerance = std::nullopt);

/// Passes iff every node value is <= tolerance. The violating node, if any,
/// is the first one over tolerance.
Certificate decrescence_certificate(const SampledSignal& signal, double tolerance,
                                    std::optional<double> order = std::nullopt);

/// {kind, max_violation, tolerance, pass, violating_node, grid: {t0, h, n}, order}
std::string certificate_to_json(const Certificate& cert);

/// Sum of a_i Psi_i with g(s) = s on coordinate i, i = position in the list.
LyapunovFunctional build_log_volterra(const std::vector<std::pair<double, double>>& weights,
                                      std::string label = "V");

} // namespace fracstab
