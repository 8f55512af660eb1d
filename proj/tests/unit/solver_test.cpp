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
#include "fracstab/errors.hpp"
#include "fracstab/models.hpp"
#include "fracstab/solver.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fracstab;

namespace {

ModelDefinition scalar(std::function<double(double)> f)
{
    return {1, [f](std::span<const double> x, std::span<double> out) { out[0] = f(x[0]); }, "scalar", {"u"}};
}

const ModelDefinition decay = scalar([](double u) { return -u; });
const ModelDefinition still = scalar([](double) { return 0.0; });

double rel_sup_gap(const Trajectory& a, const Trajectory& b)
{
    double gap = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        gap = std::max(gap, std::abs(a.data()[i] - b.data()[i]));
        scale = std::max(scale, std::abs(b.data()[i]));
    }
    return gap / scale;
}

std::vector<double> fig_initial_state()
{
    const double s0 = sica_disease_free(sica_baseline())[0];
    return {0.8 * s0, 0.1 * s0, 0.05 * s0, 0.05 * s0};
}

} // namespace

TEST_CASE("abm on scalar decay")
{
    const std::vector<double> x0{1.0};
    const auto t1 = solve_fde_abm(decay, FractionalOrder(1.0), x0, UniformGrid(0.0, 1e-3, 1000));
    CHECK(std::abs(t1.state(1000)[0] - std::exp(-1.0)) <= 1e-5);

    const auto th = solve_fde_abm(decay, FractionalOrder(0.5), x0, UniformGrid(0.0, 1e-3, 1000));
    const auto gl = solve_fde_gl(decay, FractionalOrder(0.5), x0, UniformGrid(0.0, 1e-3, 1000));
    CHECK(std::abs(th.state(1000)[0] - gl.state(1000)[0]) <= 5e-3);
    // both against the closed form exp(t) erfc(sqrt t)
    CHECK(std::abs(th.state(1000)[0] - oracle::mittag_leffler_half(1.0)) <= 5e-3);
    CHECK(std::abs(gl.state(1000)[0] - oracle::mittag_leffler_half(1.0)) <= 5e-3);

    for (double a : {0.3, 0.7, 0.9}) {
        const auto t = solve_fde_abm(decay, FractionalOrder(a), x0, UniformGrid(0.0, 1e-3, 1000));
        CHECK(std::abs(t.state(1000)[0] - oracle::mittag_leffler_decay(a, 1.0)) <= 5e-3);
    }
}

TEST_CASE("zero field keeps the initial state")
{
    for (double a : {0.3, 0.7, 1.0}) {
        const auto abm = solve_fde_abm(still, FractionalOrder(a), std::vector<double>{2.5}, UniformGrid(0.0, 0.1, 50));
        const auto gl = solve_fde_gl(still, FractionalOrder(a), std::vector<double>{2.0}, UniformGrid(0.0, 0.1, 50));
        for (std::size_t k = 0; k <= 50; ++k) {
            CHECK(abm.state(k)[0] == 2.5);
            CHECK(gl.state(k)[0] == 2.0);
        }
    }
}

TEST_CASE("gl classical limit")
{
    const auto gl = solve_fde_gl(decay, FractionalOrder(1.0), std::vector<double>{1.0}, UniformGrid(0.0, 1e-3, 1000));
    for (std::size_t k = 0; k <= 1000; k += 100)
        CHECK(std::abs(gl.state(k)[0] - std::exp(-1e-3 * static_cast<double>(k))) <= 5e-3);
}

TEST_CASE("rk4")
{
    const auto r = solve_ode_rk4(decay, std::vector<double>{1.0}, UniformGrid(0.0, 1e-2, 100));
    CHECK(std::abs(r.state(100)[0] - 0.36787944117144233) <= 1e-8);

    const ModelDefinition rot{2,
                              [](std::span<const double> x, std::span<double> out) {
                                  out[0] = -x[1];
                                  out[1] = x[0];
                              },
                              "rotation",
                              {"u", "v"}};
    const std::size_t n = 1000;
    const auto q = solve_ode_rk4(rot, std::vector<double>{1.0, 0.0},
                                 UniformGrid(0.0, std::numbers::pi / 2.0 / static_cast<double>(n), n));
    CHECK(std::abs(q.state(n)[0]) <= 1e-6);
    CHECK(std::abs(q.state(n)[1] - 1.0) <= 1e-6);
}

TEST_CASE("order one abm against rk4")
{
    const UniformGrid g(0.0, 1e-2, 2500);
    const auto x0 = fig_initial_state();
    for (const auto& p : {sica_baseline(), sica_endemic_params()}) {
        const auto m = sica_model(p);
        CHECK(rel_sup_gap(solve_fde_abm(m, FractionalOrder(1.0), x0, g), solve_ode_rk4(m, x0, g)) <= 1e-3);
    }
    TeivParams tp;
    tp.beta = 8.0;
    tp.alpha1 = 0.5;
    const auto tm = teiv_model(tp);
    const std::vector<double> y0{0.6, 0.1, 0.1, 0.3};
    CHECK(rel_sup_gap(solve_fde_abm(tm, FractionalOrder(1.0), y0, g), solve_ode_rk4(tm, y0, g)) <= 1e-3);
    CHECK(rel_sup_gap(solve_fde_abm(decay, FractionalOrder(1.0), std::vector<double>{1.0}, g),
                      solve_ode_rk4(decay, std::vector<double>{1.0}, g)) <= 1e-3);
}

TEST_CASE("abm and gl agree on sica")
{
    const auto m = sica_model(sica_baseline());
    const UniformGrid g(0.0, 1e-2, 2500);
    const auto x0 = fig_initial_state();
    const auto abm = solve_fde_abm(m, FractionalOrder(0.9), x0, g);
    const auto gl = solve_fde_gl(m, FractionalOrder(0.9), x0, g);
    for (std::size_t i = 0; i < 4; ++i) {
        const double a = abm.state(2500)[i], b = gl.state(2500)[i];
        CHECK(std::abs(a - b) <= 1e-2 * std::abs(a));
    }
}

TEST_CASE("determinism and step refinement")
{
    const auto m = sica_model(sica_endemic_params());
    const auto x0 = fig_initial_state();
    const auto a = solve_fde_abm(m, FractionalOrder(0.7), x0, UniformGrid(0.0, 0.05, 400));
    const auto b = solve_fde_abm(m, FractionalOrder(0.7), x0, UniformGrid(0.0, 0.05, 400));
    CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin()));

    for (double al : {0.5, 0.8}) {
        const std::vector<double> u0{1.0};
        const auto coarse = solve_fde_abm(decay, FractionalOrder(al), u0, UniformGrid(0.0, 2e-2, 50));
        const auto fine = solve_fde_abm(decay, FractionalOrder(al), u0, UniformGrid(0.0, 1e-2, 100));
        const auto gl = solve_fde_gl(decay, FractionalOrder(al), u0, UniformGrid(0.0, 2e-2, 50));
        CHECK(std::abs(fine.state(100)[0] - coarse.state(50)[0]) < std::abs(gl.state(50)[0] - coarse.state(50)[0]));
    }
}

TEST_CASE("short memory window")
{
    const std::vector<double> u0{1.0};
    const UniformGrid g(0.0, 1e-2, 400);
    const auto full = solve_fde_abm(decay, FractionalOrder(0.6), u0, g);
    const auto wide = solve_fde_abm(decay, FractionalOrder(0.6), u0, g, SolverOptions{400});
    const auto narrow = solve_fde_abm(decay, FractionalOrder(0.6), u0, g, SolverOptions{20});
    CHECK(wide.state(400)[0] == full.state(400)[0]);
    CHECK(narrow.state(400)[0] != full.state(400)[0]);
    CHECK(std::isfinite(narrow.state(400)[0]));
}

TEST_CASE("divergence carries the node index")
{
    const auto blowup = scalar([](double u) { return u * u; });
    try {
        solve_fde_abm(blowup, FractionalOrder(0.8), std::vector<double>{1.0}, UniformGrid(0.0, 0.1, 200));
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.node() > 0);
        CHECK(e.node() <= 200);
        CHECK(std::string(e.what()).find("node") != std::string::npos);
    }
    CHECK_THROWS_AS(solve_fde_gl(blowup, FractionalOrder(0.8), std::vector<double>{1.0}, UniformGrid(0.0, 0.1, 200)),
                    DivergenceError);
    CHECK_THROWS_AS(solve_ode_rk4(blowup, std::vector<double>{1.0}, UniformGrid(0.0, 0.1, 200)), DivergenceError);
}

TEST_CASE("dimension mismatch")
{
    CHECK_THROWS_AS(solve_fde_abm(decay, FractionalOrder(0.5), std::vector<double>{1.0, 2.0}, UniformGrid(0.0, 0.1, 5)),
                    ContractError);
    CHECK_THROWS_AS(solve_ode_rk4(decay, std::vector<double>{}, UniformGrid(0.0, 0.1, 5)), ContractError);
}

TEST_CASE("undershoot is reported, not clamped")
{
    // explicit stepping with h*lambda = -1.5 oscillates through zero
    const auto fast = scalar([](double u) { return -15.0 * u; });
    const auto t = solve_fde_gl(fast, FractionalOrder(1.0), std::vector<double>{1.0}, UniformGrid(0.0, 0.1, 20));
    const auto r = undershoot_report(t);
    bool any_negative = false;
    for (std::size_t k = 0; k < t.size(); ++k)
        any_negative = any_negative || t.state(k)[0] < 0.0;
    CHECK(any_negative);
    REQUIRE(!r.empty());
    CHECK(r.front().value < 0.0);
    CHECK(t.state(r.front().node)[0] == r.front().value);
    CHECK(undershoot_report(solve_ode_rk4(decay, std::vector<double>{1.0}, UniformGrid(0.0, 0.1, 20))).empty());
}
