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
// Exercises the shared library through its C header only.

#include "fracstab/fracstab.h"

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

namespace {

void decay_rhs(const double* x, double* out, size_t, void* user)
{
    out[0] = -*static_cast<const double*>(user) * x[0];
}

void square_rhs(const double* x, double* out, size_t, void*)
{
    out[0] = x[0] * x[0];
}

fs_model* sica(double beta)
{
    fs_sica_params p;
    fs_sica_params_baseline(&p);
    p.beta = beta;
    fs_model* m = nullptr;
    REQUIRE(fs_model_sica(&p, &m) == FS_OK);
    return m;
}

} // namespace

TEST_CASE("status names and version")
{
    CHECK(std::string(fs_status_name(FS_OK)) == "ok");
    CHECK(std::string(fs_status_name(FS_ERR_DIVERGENCE)) == "divergence");
    CHECK(std::strlen(fs_version()) > 0);
}

TEST_CASE("null arguments are rejected")
{
    double out = 0.0;
    CHECK(fs_gamma(1.0, nullptr) == FS_ERR_NULL_ARGUMENT);
    CHECK(fs_sica_r0(nullptr, &out) == FS_ERR_NULL_ARGUMENT);
    CHECK(fs_model_sica(nullptr, nullptr) == FS_ERR_NULL_ARGUMENT);
    CHECK(std::strlen(fs_last_error_message()) > 0);
    fs_model_free(nullptr);
    fs_trajectory_free(nullptr);
    fs_functional_free(nullptr);
}

TEST_CASE("calculus entry points")
{
    double g = 0.0;
    CHECK(fs_gamma(0.5, &g) == FS_OK);
    CHECK(g == doctest::Approx(std::sqrt(M_PI)));
    CHECK(fs_gamma(-1.0, &g) == FS_ERR_DOMAIN);

    std::vector<double> u(11, 3.0), d(11, 1.0);
    CHECK(fs_l1_caputo(u.data(), u.size(), 0.0, 0.1, 0.4, d.data()) == FS_OK);
    for (double v : d)
        CHECK(v == 0.0);
    CHECK(fs_l1_caputo(u.data(), 1, 0.0, 0.1, 0.4, d.data()) == FS_ERR_GRID);
    CHECK(fs_l1_caputo(u.data(), u.size(), 0.0, 0.1, 1.5, d.data()) == FS_ERR_DOMAIN);

    double w[3];
    CHECK(fs_gl_weights(0.5, 2, w) == FS_OK);
    CHECK(w[2] == doctest::Approx(-0.125));

    double b[3], a[4];
    CHECK(fs_abm_weights(1.0, 3, 0.5, b, a) == FS_OK);
    CHECK(b[0] == doctest::Approx(0.5));
    CHECK(a[3] == doctest::Approx(0.25));
}

TEST_CASE("parameter records")
{
    fs_sica_params p;
    fs_sica_params_baseline(&p);
    CHECK(p.mu == 1.0 / 69.54);
    CHECK(p.incidence == FS_INCIDENCE_STANDARD);

    size_t len = 0;
    CHECK(fs_sica_params_to_json(&p, nullptr, 0, &len) == FS_ERR_BUFFER_TOO_SMALL);
    std::string buf(len + 1, '\0');
    CHECK(fs_sica_params_to_json(&p, buf.data(), buf.size(), &len) == FS_OK);
    buf.resize(len);
    fs_sica_params q{};
    CHECK(fs_sica_params_from_json(buf.c_str(), &q) == FS_OK);
    CHECK(p.lambda_ == q.lambda_);
    CHECK(p.mu == q.mu);
    CHECK(p.beta == q.beta);
    CHECK(p.rho == q.rho);
    CHECK(p.phi == q.phi);
    CHECK(p.alpha_t == q.alpha_t);
    CHECK(p.omega == q.omega);
    CHECK(p.d == q.d);
    CHECK(p.incidence == q.incidence);

    CHECK(fs_sica_params_from_json("{\"mu\": 1}", &q) == FS_ERR_PARSE);
    CHECK(std::string(fs_last_error_message()).find("missing") != std::string::npos);
    fs_teiv_params t{};
    CHECK(fs_teiv_params_from_json("{", &t) == FS_ERR_PARSE);
}

TEST_CASE("sica queries")
{
    fs_sica_params p;
    fs_sica_params_baseline(&p);
    double r0 = 0.0, s = 0.0;
    CHECK(fs_sica_r0(&p, &r0) == FS_OK);
    CHECK(std::abs(r0 - 0.29) <= 5e-4);
    double ef[4], es[4];
    CHECK(fs_sica_disease_free(&p, ef) == FS_OK);
    CHECK(ef[0] == doctest::Approx(745746.96));
    CHECK(fs_sica_endemic(&p, es) == FS_ERR_NO_ENDEMIC);
    CHECK(fs_sica_dfe_spectral_abscissa(&p, &s) == FS_OK);
    CHECK(s < 0.0);

    p.beta = 0.866;
    CHECK(fs_sica_endemic(&p, es) == FS_OK);
    CHECK(es[3] / es[1] == doctest::Approx(p.rho / (p.alpha_t + p.mu + p.d)));

    p.mu = -1.0;
    CHECK(fs_sica_r0(&p, &r0) == FS_ERR_CONTRACT);
}

TEST_CASE("teiv queries")
{
    fs_teiv_params p{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    double r0 = 0.0, f = 0.0, s = 0.0;
    CHECK(fs_teiv_r0(&p, &r0) == FS_OK);
    CHECK(r0 == doctest::Approx(1.0 / 6.0));
    CHECK(fs_teiv_incidence(&p, 1.0, 1.0, &f) == FS_OK);
    CHECK(f == doctest::Approx(0.25));
    double eq[8];
    size_t count = 0;
    CHECK(fs_teiv_equilibria(&p, eq, &count) == FS_OK);
    CHECK(count == 1);
    CHECK(fs_teiv_ife_spectral_abscissa(&p, &s) == FS_OK);
    CHECK(s < 0.0);

    p.beta = 30.0;
    CHECK(fs_teiv_equilibria(&p, eq, &count) == FS_OK);
    CHECK(count == 2);
    fs_model* m = nullptr;
    REQUIRE(fs_model_teiv(&p, &m) == FS_OK);
    double r[4];
    CHECK(fs_model_rhs(m, eq + 4, r) == FS_OK);
    for (double v : r)
        CHECK(std::abs(v) <= 1e-9);
    fs_model_free(m);
}

TEST_CASE("custom model, solve and trajectory accessors")
{
    double rate = 1.0;
    fs_model* m = nullptr;
    REQUIRE(fs_model_custom(1, decay_rhs, &rate, "decay", &m) == FS_OK);
    CHECK(std::string(fs_model_name(m)) == "decay");
    CHECK(fs_model_dimension(m) == 1);

    const double x0 = 1.0;
    fs_trajectory* t = nullptr;
    REQUIRE(fs_solve(m, FS_METHOD_ABM, 1.0, &x0, 0.0, 1e-3, 1000, 0, &t) == FS_OK);
    CHECK(fs_trajectory_nodes(t) == 1001);
    CHECK(fs_trajectory_dimension(t) == 1);
    CHECK(fs_trajectory_order(t) == 1.0);
    double t0 = -1, h = 0;
    size_t n = 0;
    fs_trajectory_grid(t, &t0, &h, &n);
    CHECK(t0 == 0.0);
    CHECK(h == 1e-3);
    CHECK(n == 1000);
    double last = 0.0;
    CHECK(fs_trajectory_state(t, 1000, &last) == FS_OK);
    CHECK(std::abs(last - std::exp(-1.0)) <= 1e-5);
    CHECK(fs_trajectory_state(t, 1001, &last) == FS_ERR_CONTRACT);
    std::vector<double> comp(1001);
    CHECK(fs_trajectory_component(t, 0, comp.data()) == FS_OK);
    CHECK(comp[1000] == last);
    CHECK(fs_trajectory_component(t, 1, comp.data()) == FS_ERR_CONTRACT);
    CHECK(fs_trajectory_undershoot_count(t) == 0);
    fs_trajectory_free(t);

    fs_trajectory* g = nullptr;
    CHECK(fs_solve(m, FS_METHOD_GL, 0.5, &x0, 0.0, 1e-3, 1000, 0, &g) == FS_OK);
    fs_trajectory_free(g);
    CHECK(fs_solve(m, FS_METHOD_RK4, 0.5, &x0, 0.0, 1e-3, 10, 0, &g) == FS_ERR_CONTRACT);
    CHECK(fs_solve(m, FS_METHOD_ABM, 0.5, &x0, 0.0, -1.0, 10, 0, &g) == FS_ERR_GRID);
    CHECK(fs_solve(m, static_cast<fs_method>(9), 0.5, &x0, 0.0, 0.1, 10, 0, &g) == FS_ERR_CONTRACT);
    fs_model_free(m);
}

TEST_CASE("divergence reports its node")
{
    fs_model* m = nullptr;
    REQUIRE(fs_model_custom(1, square_rhs, nullptr, "blowup", &m) == FS_OK);
    const double x0 = 1.0;
    fs_trajectory* t = nullptr;
    CHECK(fs_solve(m, FS_METHOD_ABM, 0.8, &x0, 0.0, 0.1, 200, 0, &t) == FS_ERR_DIVERGENCE);
    CHECK(t == nullptr);
    const size_t node = fs_last_error_node();
    CHECK(node > 0);
    CHECK(node <= 200);
    CHECK(std::string(fs_last_error_message()).find("node " + std::to_string(node)) != std::string::npos);

    double g = 0.0;
    CHECK(fs_gamma(2.0, &g) == FS_OK);
    CHECK(fs_last_error_node() == SIZE_MAX);
    fs_model_free(m);
}

TEST_CASE("functionals and certificates")
{
    fs_sica_params p;
    fs_sica_params_baseline(&p);
    fs_functional* v0 = nullptr;
    REQUIRE(fs_functional_sica_v0(&p, &v0) == FS_OK);
    CHECK(std::string(fs_functional_label(v0)) == "V0");
    double ef[4], val = 1.0;
    fs_sica_disease_free(&p, ef);
    CHECK(fs_functional_eval(v0, ef, 4, &val) == FS_OK);
    CHECK(val == 0.0);
    CHECK(fs_functional_eval(v0, ef, 2, &val) == FS_ERR_CONTRACT);

    fs_functional* v1 = nullptr;
    CHECK(fs_functional_sica_v1(&p, &v1) == FS_ERR_NO_ENDEMIC);

    fs_model* m = sica(p.beta);
    const double x0[4] = {0.8 * ef[0], 0.1 * ef[0], 0.05 * ef[0], 0.05 * ef[0]};
    double dv = 1.0;
    CHECK(fs_functional_field_derivative(v0, m, x0, &dv) == FS_OK);
    CHECK(dv < 0.0);

    fs_trajectory* t = nullptr;
    REQUIRE(fs_solve(m, FS_METHOD_ABM, 0.8, x0, 0.0, 0.05, 400, 0, &t) == FS_OK);
    std::vector<double> vals(401), cap(401);
    CHECK(fs_functional_values(v0, t, vals.data()) == FS_OK);
    CHECK(fs_functional_caputo(v0, t, cap.data()) == FS_OK);
    double scale = 0.0;
    for (double v : vals)
        scale = std::max(scale, std::abs(v));
    fs_certificate c{};
    const double order = 0.8;
    CHECK(fs_decrescence_certificate(cap.data(), cap.size(), 0.0, 0.05, fs_default_tolerance(0.05, 0.8, scale), &order,
                                     &c) == FS_OK);
    CHECK(c.kind == FS_CERT_DECRESCENCE);
    CHECK(c.pass == 1);
    CHECK(c.has_violating_node == 0);
    CHECK(c.has_order == 1);

    std::string buf(1024, '\0');
    size_t len = 0;
    CHECK(fs_certificate_to_json(&c, buf.data(), buf.size(), &len) == FS_OK);
    buf.resize(len);
    CHECK(buf.find("\"kind\": \"decrescence\"") != std::string::npos);

    std::vector<double> sig{1.0, 2.0, 0.0, 1.0};
    CHECK(fs_lemma_certificate(sig.data(), sig.size(), 0.0, 0.1, "s", 1.0, 0.5, nullptr, &c) == FS_ERR_DOMAIN);
    CHECK(fs_last_error_node() == 2);
    sig[2] = 1.5;
    const double tol = 1e-3;
    CHECK(fs_lemma_certificate(sig.data(), sig.size(), 0.0, 0.1, "s2", 1.0, 0.5, &tol, &c) == FS_OK);
    CHECK(c.tolerance == tol);
    CHECK(fs_lemma_certificate(sig.data(), sig.size(), 0.0, 0.1, "cosh", 1.0, 0.5, &tol, &c) == FS_ERR_DOMAIN);

    double psi = 0.0;
    CHECK(fs_psi("s", 1.0, M_E, &psi) == FS_OK);
    CHECK(psi == doctest::Approx(M_E - 2.0));

    const double w[2] = {1.0, 2.0}, anch[2] = {1.0, 0.0};
    fs_functional* lv = nullptr;
    REQUIRE(fs_functional_log_volterra(w, anch, 2, &lv) == FS_OK);
    const double st[2] = {M_E, 3.0};
    CHECK(fs_functional_eval(lv, st, 2, &val) == FS_OK);
    CHECK(val == doctest::Approx(M_E - 2.0 + 6.0));

    fs_functional_free(lv);
    fs_trajectory_free(t);
    fs_model_free(m);
    fs_functional_free(v0);
}

TEST_CASE("concurrent solves on a shared model are deterministic")
{
    fs_model* m = sica(0.866);
    double ef[4];
    fs_sica_params p;
    fs_sica_params_baseline(&p);
    fs_sica_disease_free(&p, ef);
    const double x0[4] = {0.8 * ef[0], 0.1 * ef[0], 0.05 * ef[0], 0.05 * ef[0]};

    fs_trajectory* serial = nullptr;
    REQUIRE(fs_solve(m, FS_METHOD_ABM, 0.7, x0, 0.0, 0.05, 600, 0, &serial) == FS_OK);
    std::vector<double> ref(4);
    fs_trajectory_state(serial, 600, ref.data());

    std::vector<std::vector<double>> ends(6, std::vector<double>(4));
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < ends.size(); ++i)
        pool.emplace_back([&, i] {
            fs_trajectory* t = nullptr;
            if (fs_solve(m, FS_METHOD_ABM, 0.7, x0, 0.0, 0.05, 600, 0, &t) == FS_OK)
                fs_trajectory_state(t, 600, ends[i].data());
            fs_trajectory_free(t);
        });
    for (auto& th : pool)
        th.join();
    for (const auto& e : ends)
        CHECK(e == ref);
    fs_trajectory_free(serial);
    fs_model_free(m);
}
