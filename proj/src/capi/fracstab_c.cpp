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
#include "fracstab/fracstab.h"

#include "fracstab/caputo.hpp"
#include "fracstab/errors.hpp"
#include "fracstab/lyapunov.hpp"
#include "fracstab/models.hpp"
#include "fracstab/params_json.hpp"
#include "fracstab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>

struct fs_model {
    fracstab::ModelDefinition def;
};

struct fs_trajectory {
    fracstab::Trajectory traj;
};

struct fs_functional {
    fracstab::LyapunovFunctional f;
};

namespace {

constexpr std::size_t no_node = std::numeric_limits<std::size_t>::max();

thread_local std::string last_message;
thread_local std::size_t last_node = no_node;

fs_status fail(fs_status s, const char* msg, std::size_t node = no_node)
{
    last_message = msg;
    last_node = node;
    return s;
}

// Runs body and maps the core exception hierarchy onto status codes.
template <class Body>
fs_status guarded(Body&& body) noexcept
{
    last_message.clear();
    last_node = no_node;
    try {
        body();
        return FS_OK;
    } catch (const fracstab::DivergenceError& e) {
        return fail(FS_ERR_DIVERGENCE, e.what(), e.node());
    } catch (const fracstab::SampleDomainError& e) {
        return fail(FS_ERR_DOMAIN, e.what(), e.node());
    } catch (const fracstab::DomainError& e) {
        return fail(FS_ERR_DOMAIN, e.what());
    } catch (const fracstab::GridError& e) {
        return fail(FS_ERR_GRID, e.what());
    } catch (const fracstab::ContractError& e) {
        return fail(FS_ERR_CONTRACT, e.what());
    } catch (const fracstab::NoEndemicEquilibrium& e) {
        return fail(FS_ERR_NO_ENDEMIC, e.what());
    } catch (const fracstab::SolverError& e) {
        return fail(FS_ERR_SOLVER, e.what());
    } catch (const fracstab::ParseError& e) {
        return fail(FS_ERR_PARSE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(FS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FS_ERR_INTERNAL, "unknown exception");
    }
}

template <class... Ptrs>
bool any_null(const Ptrs*... ptrs)
{
    return ((ptrs == nullptr) || ...);
}

#define FS_REQUIRE(...)                                                                   \
    do {                                                                                  \
        if (any_null(__VA_ARGS__))                                                        \
            return fail(FS_ERR_NULL_ARGUMENT, "required pointer argument is NULL");        \
    } while (0)

fracstab::SicaParams to_core(const fs_sica_params& p)
{
    fracstab::SicaParams q;
    q.Lambda = p.lambda_;
    q.mu = p.mu;
    q.beta = p.beta;
    q.rho = p.rho;
    q.phi = p.phi;
    q.alpha_t = p.alpha_t;
    q.omega = p.omega;
    q.d = p.d;
    q.incidence = p.incidence == FS_INCIDENCE_MASS_ACTION ? fracstab::Incidence::mass_action
                                                          : fracstab::Incidence::standard;
    return q;
}

fs_sica_params to_c(const fracstab::SicaParams& q)
{
    return {q.Lambda, q.mu, q.beta, q.rho, q.phi, q.alpha_t, q.omega, q.d,
            q.incidence == fracstab::Incidence::mass_action ? FS_INCIDENCE_MASS_ACTION : FS_INCIDENCE_STANDARD};
}

fracstab::TeivParams to_core(const fs_teiv_params& p)
{
    return {p.lambda, p.mu_T, p.mu_E, p.mu_I, p.mu_V, p.rho, p.gamma, p.k, p.beta, p.alpha1, p.alpha2, p.alpha3};
}

fs_teiv_params to_c(const fracstab::TeivParams& q)
{
    return {q.lambda, q.mu_T, q.mu_E, q.mu_I, q.mu_V, q.rho, q.gamma, q.k, q.beta, q.alpha1, q.alpha2, q.alpha3};
}

fs_status write_text(const std::string& text, char* buf, size_t cap, size_t* len)
{
    if (len)
        *len = text.size();
    if (!buf || cap <= text.size())
        return fail(FS_ERR_BUFFER_TOO_SMALL, "output buffer too small");
    std::memcpy(buf, text.data(), text.size());
    buf[text.size()] = '\0';
    return FS_OK;
}

fs_certificate to_c(const fracstab::Certificate& c)
{
    fs_certificate o{};
    o.kind = c.kind == fracstab::CertificateKind::lemma_inequality ? FS_CERT_LEMMA_INEQUALITY : FS_CERT_DECRESCENCE;
    o.max_violation = c.max_violation;
    o.tolerance = c.tolerance;
    o.pass = c.pass ? 1 : 0;
    o.has_violating_node = c.violating_node ? 1 : 0;
    o.violating_node = c.violating_node.value_or(0);
    o.t0 = c.grid.t0;
    o.h = c.grid.h;
    o.n_steps = c.grid.n_steps;
    o.has_order = c.order ? 1 : 0;
    o.order = c.order.value_or(0.0);
    return o;
}

fracstab::Certificate to_core(const fs_certificate& c)
{
    fracstab::Certificate o{c.kind == FS_CERT_LEMMA_INEQUALITY ? fracstab::CertificateKind::lemma_inequality
                                                              : fracstab::CertificateKind::decrescence,
                            c.max_violation,
                            c.tolerance,
                            c.pass != 0,
                            std::nullopt,
                            fracstab::UniformGrid(c.t0, c.h, c.n_steps),
                            std::nullopt};
    if (c.has_violating_node)
        o.violating_node = c.violating_node;
    if (c.has_order)
        o.order = c.order;
    return o;
}

fracstab::SampledSignal make_signal(const double* values, size_t n_nodes, double t0, double h)
{
    if (n_nodes < 2)
        throw fracstab::GridError("signal needs at least two nodes");
    return fracstab::SampledSignal(fracstab::UniformGrid(t0, h, n_nodes - 1),
                                   std::vector<double>(values, values + n_nodes));
}

} // namespace

extern "C" {

const char* fs_version(void)
{
    return "1.0.0";
}

const char* fs_status_name(fs_status status)
{
    switch (status) {
    case FS_OK: return "ok";
    case FS_ERR_DOMAIN: return "domain_error";
    case FS_ERR_GRID: return "grid_error";
    case FS_ERR_CONTRACT: return "contract_error";
    case FS_ERR_DIVERGENCE: return "divergence";
    case FS_ERR_SOLVER: return "solver_error";
    case FS_ERR_NO_ENDEMIC: return "no_endemic_equilibrium";
    case FS_ERR_PARSE: return "parse_error";
    case FS_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case FS_ERR_NULL_ARGUMENT: return "null_argument";
    case FS_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* fs_last_error_message(void)
{
    return last_message.c_str();
}

size_t fs_last_error_node(void)
{
    return last_node;
}

void fs_sica_params_baseline(fs_sica_params* out)
{
    if (out)
        *out = to_c(fracstab::sica_baseline());
}

fs_status fs_sica_params_from_json(const char* json, fs_sica_params* out)
{
    FS_REQUIRE(json, out);
    return guarded([&] { *out = to_c(fracstab::sica_params_from_json(std::string(json))); });
}

fs_status fs_sica_params_to_json(const fs_sica_params* p, char* buf, size_t cap, size_t* len)
{
    FS_REQUIRE(p);
    std::string text;
    const fs_status s = guarded([&] { text = fracstab::to_json(to_core(*p)).dump(); });
    return s != FS_OK ? s : write_text(text, buf, cap, len);
}

fs_status fs_teiv_params_from_json(const char* json, fs_teiv_params* out)
{
    FS_REQUIRE(json, out);
    return guarded([&] { *out = to_c(fracstab::teiv_params_from_json(std::string(json))); });
}

fs_status fs_teiv_params_to_json(const fs_teiv_params* p, char* buf, size_t cap, size_t* len)
{
    FS_REQUIRE(p);
    std::string text;
    const fs_status s = guarded([&] { text = fracstab::to_json(to_core(*p)).dump(); });
    return s != FS_OK ? s : write_text(text, buf, cap, len);
}

fs_status fs_gamma(double x, double* out)
{
    FS_REQUIRE(out);
    return guarded([&] { *out = fracstab::gamma_fn(x); });
}

fs_status fs_l1_caputo(const double* values, size_t n_nodes, double t0, double h, double alpha, double* out)
{
    FS_REQUIRE(values, out);
    return guarded([&] {
        const auto d = fracstab::l1_caputo(make_signal(values, n_nodes, t0, h), fracstab::FractionalOrder(alpha));
        std::copy(d.values().begin(), d.values().end(), out);
    });
}

fs_status fs_gl_weights(double alpha, size_t count, double* out)
{
    FS_REQUIRE(out);
    return guarded([&] {
        const auto w = fracstab::gl_weights(fracstab::FractionalOrder(alpha), count);
        std::copy(w.begin(), w.end(), out);
    });
}

fs_status fs_abm_weights(double alpha, size_t step_index, double h, double* predictor, double* corrector)
{
    FS_REQUIRE(predictor, corrector);
    return guarded([&] {
        const auto w = fracstab::abm_weights(fracstab::FractionalOrder(alpha), step_index, h);
        std::copy(w.predictor.begin(), w.predictor.end(), predictor);
        std::copy(w.corrector.begin(), w.corrector.end(), corrector);
    });
}

fs_status fs_model_sica(const fs_sica_params* p, fs_model** out)
{
    FS_REQUIRE(p, out);
    return guarded([&] { *out = new fs_model{fracstab::sica_model(to_core(*p))}; });
}

fs_status fs_model_teiv(const fs_teiv_params* p, fs_model** out)
{
    FS_REQUIRE(p, out);
    return guarded([&] { *out = new fs_model{fracstab::teiv_model(to_core(*p))}; });
}

fs_status fs_model_custom(size_t dimension, fs_rhs_fn fn, void* user_data, const char* name, fs_model** out)
{
    FS_REQUIRE(out);
    if (!fn || dimension == 0)
        return fail(FS_ERR_CONTRACT, "custom model needs a callback and a positive dimension");
    return guarded([&] {
        fracstab::ModelDefinition m;
        m.dimension = dimension;
        m.name = name ? name : "custom";
        for (size_t i = 0; i < dimension; ++i)
            m.state_labels.push_back("u" + std::to_string(i));
        m.rhs = [fn, user_data, dimension](std::span<const double> u, std::span<double> f) {
            fn(u.data(), f.data(), dimension, user_data);
        };
        *out = new fs_model{std::move(m)};
    });
}

void fs_model_free(fs_model* m)
{
    delete m;
}

size_t fs_model_dimension(const fs_model* m)
{
    return m ? m->def.dimension : 0;
}

const char* fs_model_name(const fs_model* m)
{
    return m ? m->def.name.c_str() : "";
}

const char* fs_model_state_label(const fs_model* m, size_t i)
{
    if (!m || i >= m->def.state_labels.size())
        return "";
    return m->def.state_labels[i].c_str();
}

fs_status fs_model_rhs(const fs_model* m, const double* state, double* out)
{
    FS_REQUIRE(m, state, out);
    return guarded([&] {
        const auto f = m->def.eval({state, m->def.dimension});
        std::copy(f.begin(), f.end(), out);
    });
}

fs_status fs_sica_r0(const fs_sica_params* p, double* out)
{
    FS_REQUIRE(p, out);
    return guarded([&] {
        const auto q = to_core(*p);
        q.validate();
        *out = fracstab::sica_r0(q);
    });
}

fs_status fs_sica_threshold_r0(const fs_sica_params* p, double* out)
{
    FS_REQUIRE(p, out);
    return guarded([&] {
        const auto q = to_core(*p);
        q.validate();
        *out = fracstab::sica_threshold_r0(q);
    });
}

fs_status fs_sica_disease_free(const fs_sica_params* p, double out[4])
{
    FS_REQUIRE(p, out);
    return guarded([&] {
        const auto q = to_core(*p);
        q.validate();
        const auto e = fracstab::sica_disease_free(q);
        std::copy(e.begin(), e.end(), out);
    });
}

fs_status fs_sica_endemic(const fs_sica_params* p, double out[4])
{
    FS_REQUIRE(p, out);
    return guarded([&] {
        const auto e = fracstab::sica_endemic(to_core(*p));
        std::copy(e.begin(), e.end(), out);
    });
}

fs_status fs_sica_dfe_spectral_abscissa(const fs_sica_params* p, double* out)
{
    FS_REQUIRE(p, out);
    return guarded([&] {
        const auto q = to_core(*p);
        q.validate();
        *out = fracstab::sica_dfe_spectral_abscissa(q);
    });
}

fs_status fs_teiv_incidence(const fs_teiv_params* p, double T, double V, double* out)
{
    FS_REQUIRE(p, out);
    return guarded([&] { *out = fracstab::teiv_incidence(to_core(*p), T, V); });
}

fs_status fs_teiv_r0(const fs_teiv_params* p, double* out)
{
    FS_REQUIRE(p, out);
    return guarded([&] {
        const auto q = to_core(*p);
        q.validate();
        *out = fracstab::teiv_r0(q);
    });
}

fs_status fs_teiv_equilibria(const fs_teiv_params* p, double out[8], size_t* count)
{
    FS_REQUIRE(p, out, count);
    return guarded([&] {
        const auto eqs = fracstab::teiv_equilibria(to_core(*p));
        *count = eqs.size();
        for (size_t i = 0; i < eqs.size(); ++i)
            std::copy(eqs[i].begin(), eqs[i].end(), out + 4 * i);
    });
}

fs_status fs_teiv_ife_spectral_abscissa(const fs_teiv_params* p, double* out)
{
    FS_REQUIRE(p, out);
    return guarded([&] {
        const auto q = to_core(*p);
        q.validate();
        *out = fracstab::teiv_ife_spectral_abscissa(q);
    });
}

fs_status fs_solve(const fs_model* m, fs_method method, double alpha, const double* x0, double t0, double h,
                   size_t n_steps, size_t memory_window, fs_trajectory** out)
{
    FS_REQUIRE(m, x0, out);
    *out = nullptr;
    return guarded([&] {
        const fracstab::UniformGrid grid(t0, h, n_steps);
        const std::span<const double> init(x0, m->def.dimension);
        fracstab::SolverOptions opt;
        if (memory_window > 0)
            opt.memory_window = memory_window;
        switch (method) {
        case FS_METHOD_ABM:
            *out = new fs_trajectory{fracstab::solve_fde_abm(m->def, fracstab::FractionalOrder(alpha), init, grid, opt)};
            break;
        case FS_METHOD_GL:
            *out = new fs_trajectory{fracstab::solve_fde_gl(m->def, fracstab::FractionalOrder(alpha), init, grid, opt)};
            break;
        case FS_METHOD_RK4:
            if (alpha != 1.0)
                throw fracstab::ContractError("rk4 integrates the classical system; alpha must be 1");
            *out = new fs_trajectory{fracstab::solve_ode_rk4(m->def, init, grid)};
            break;
        default:
            throw fracstab::ContractError("unknown solver method");
        }
    });
}

void fs_trajectory_free(fs_trajectory* t)
{
    delete t;
}

size_t fs_trajectory_nodes(const fs_trajectory* t)
{
    return t ? t->traj.size() : 0;
}

size_t fs_trajectory_dimension(const fs_trajectory* t)
{
    return t ? t->traj.dimension() : 0;
}

double fs_trajectory_order(const fs_trajectory* t)
{
    return t ? t->traj.order().value() : 0.0;
}

void fs_trajectory_grid(const fs_trajectory* t, double* t0, double* h, size_t* n_steps)
{
    if (!t)
        return;
    if (t0)
        *t0 = t->traj.grid().t0;
    if (h)
        *h = t->traj.grid().h;
    if (n_steps)
        *n_steps = t->traj.grid().n_steps;
}

fs_status fs_trajectory_state(const fs_trajectory* t, size_t node, double* out)
{
    FS_REQUIRE(t, out);
    if (node >= t->traj.size())
        return fail(FS_ERR_CONTRACT, "node index out of range");
    const auto s = t->traj.state(node);
    std::copy(s.begin(), s.end(), out);
    return FS_OK;
}

fs_status fs_trajectory_component(const fs_trajectory* t, size_t component, double* out)
{
    FS_REQUIRE(t, out);
    return guarded([&] {
        const auto c = t->traj.component(component);
        std::copy(c.values().begin(), c.values().end(), out);
    });
}

size_t fs_trajectory_undershoot_count(const fs_trajectory* t)
{
    return t ? fracstab::undershoot_report(t->traj).size() : 0;
}

fs_status fs_functional_sica_v0(const fs_sica_params* p, fs_functional** out)
{
    FS_REQUIRE(p, out);
    return guarded([&] {
        const auto q = to_core(*p);
        q.validate();
        *out = new fs_functional{fracstab::sica_v0(q)};
    });
}

fs_status fs_functional_sica_v1(const fs_sica_params* p, fs_functional** out)
{
    FS_REQUIRE(p, out);
    return guarded([&] { *out = new fs_functional{fracstab::sica_v1(to_core(*p))}; });
}

fs_status fs_functional_teiv(const fs_teiv_params* p, const double anchor[4], fs_functional** out)
{
    FS_REQUIRE(p, anchor, out);
    return guarded([&] { *out = new fs_functional{fracstab::teiv_lyapunov(to_core(*p), {anchor, 4})}; });
}

fs_status fs_functional_log_volterra(const double* weights, const double* anchors, size_t n, fs_functional** out)
{
    FS_REQUIRE(weights, anchors, out);
    return guarded([&] {
        std::vector<std::pair<double, double>> w;
        for (size_t i = 0; i < n; ++i)
            w.emplace_back(weights[i], anchors[i]);
        *out = new fs_functional{fracstab::build_log_volterra(w)};
    });
}

void fs_functional_free(fs_functional* f)
{
    delete f;
}

const char* fs_functional_label(const fs_functional* f)
{
    return f ? f->f.label().c_str() : "";
}

fs_status fs_functional_eval(const fs_functional* f, const double* state, size_t dimension, double* out)
{
    FS_REQUIRE(f, state, out);
    return guarded([&] { *out = fracstab::eval_functional(f->f, {state, dimension}); });
}

fs_status fs_functional_field_derivative(const fs_functional* f, const fs_model* m, const double* state, double* out)
{
    FS_REQUIRE(f, m, state, out);
    return guarded([&] { *out = fracstab::field_derivative(f->f, m->def, {state, m->def.dimension}); });
}

fs_status fs_functional_values(const fs_functional* f, const fs_trajectory* t, double* out)
{
    FS_REQUIRE(f, t, out);
    return guarded([&] {
        const auto v = fracstab::functional_values(f->f, t->traj);
        std::copy(v.values().begin(), v.values().end(), out);
    });
}

fs_status fs_functional_caputo(const fs_functional* f, const fs_trajectory* t, double* out)
{
    FS_REQUIRE(f, t, out);
    return guarded([&] {
        const auto v = fracstab::caputo_of_functional(f->f, t->traj);
        std::copy(v.values().begin(), v.values().end(), out);
    });
}

fs_status fs_psi(const char* g_label, double xstar, double x, double* out)
{
    FS_REQUIRE(g_label, out);
    return guarded([&] { *out = fracstab::psi(fracstab::g_by_label(g_label), xstar, x); });
}

double fs_default_tolerance(double h, double alpha, double scale)
{
    return 10.0 * std::pow(h, 2.0 - alpha) * scale;
}

fs_status fs_lemma_certificate(const double* x, size_t n_nodes, double t0, double h, const char* g_label,
                               double xbar, double alpha, const double* tolerance, fs_certificate* out)
{
    FS_REQUIRE(x, g_label, out);
    return guarded([&] {
        std::optional<double> tol;
        if (tolerance)
            tol = *tolerance;
        *out = to_c(fracstab::lemma_certificate(make_signal(x, n_nodes, t0, h), fracstab::g_by_label(g_label), xbar,
                                                fracstab::FractionalOrder(alpha), tol));
    });
}

fs_status fs_decrescence_certificate(const double* values, size_t n_nodes, double t0, double h, double tolerance,
                                     const double* order, fs_certificate* out)
{
    FS_REQUIRE(values, out);
    return guarded([&] {
        std::optional<double> ord;
        if (order)
            ord = *order;
        *out = to_c(fracstab::decrescence_certificate(make_signal(values, n_nodes, t0, h), tolerance, ord));
    });
}

fs_status fs_certificate_to_json(const fs_certificate* c, char* buf, size_t cap, size_t* len)
{
    FS_REQUIRE(c);
    std::string text;
    const fs_status s = guarded([&] { text = fracstab::certificate_to_json(to_core(*c)); });
    return s != FS_OK ? s : write_text(text, buf, cap, len);
}

} // extern "C"
