/*
 * Copyright 2026 The hiacor Authors
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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "hiacor/problem.hpp"
#include "hiacor/soco.hpp"

using namespace hiacor;

namespace {

BoundedProblem sphere(std::size_t dim, double lo = -100.0, double hi = 100.0, double bias = 0.0,
                      int* calls = nullptr) {
    return BoundedProblem("sphere", std::vector<double>(dim, lo), std::vector<double>(dim, hi),
                          std::vector<double>(dim, 0.0), bias, [calls](std::span<const double> z) {
                              if (calls) ++*calls;
                              double s = 0.0;
                              for (double v : z) s += v * v;
                              return s;
                          });
}

std::vector<double> random_point(std::mt19937_64& rng, const BoundedProblem& p) {
    std::vector<double> x(p.dimension());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::uniform_real_distribution<double>(p.lower()[i], p.upper()[i])(rng);
    return x;
}

}  // namespace

TEST_CASE("F1 at its shift returns the bias") {
    soco::Options opt;
    opt.bias = -450.0;
    const BoundedProblem p = soco::make_problem(soco::FunctionId::F1, 10, {}, opt);
    CHECK(p(p.shift()) == -450.0);
    CHECK(p.optimum_value() == -450.0);
    CHECK(p.error(p(p.shift())) == 0.0);
}

TEST_CASE("unshifted sphere value") {
    const BoundedProblem p = sphere(2);
    const std::vector<double> x{1.0, 1.0};
    CHECK(p(x) == 2.0);
}

TEST_CASE("evaluator refuses to exceed its cap without calling the objective") {
    int calls = 0;
    const BoundedProblem p = sphere(3, -100, 100, 0.0, &calls);
    BudgetedEvaluator ev(p, 3);
    const std::vector<double> x{1.0, 2.0, 3.0};
    for (int k = 0; k < 3; ++k) ev(x);
    CHECK(ev.used() == 3);
    CHECK(calls == 3);
    CHECK_THROWS_AS(ev(x), BudgetExhausted);
    CHECK(ev.used() == 3);
    CHECK(calls == 3);
    CHECK(ev.exhausted());
}

TEST_CASE("evaluator checks the dimension") {
    const BoundedProblem p = sphere(3);
    BudgetedEvaluator ev(p, 10);
    const std::vector<double> x{1.0, 2.0};
    CHECK_THROWS_AS(ev(x), DimensionMismatch);
    CHECK(ev.used() == 0);
}

TEST_CASE("property: budget accounting is exact and best-seen never increases") {
    std::mt19937_64 rng(3);
    const BoundedProblem p = sphere(4);
    BudgetedEvaluator ev(p, 1000);
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint64_t k = 1; k <= 1000; ++k) {
        const std::vector<double> x = random_point(rng, p);
        const double v = ev(x);
        CHECK(ev.used() == k);
        CHECK(ev.best_value() <= prev);
        CHECK(ev.best_value() <= v);
        prev = ev.best_value();
    }
}

TEST_CASE("local call scopes nest and restore") {
    const BoundedProblem p = sphere(2);
    BudgetedEvaluator ev(p, 100);
    const std::vector<double> x{0.5, 0.5};
    {
        LocalCallScope outer(ev, 10);
        ev(x);
        {
            LocalCallScope inner(ev, 2);
            ev(x);
            ev(x);
            try {
                ev(x);
                FAIL("expected the inner cap to trigger");
            } catch (const BudgetExhausted& e) {
                CHECK(e.local_cap());
            }
            CHECK(inner.consumed() == 2);
        }
        CHECK(outer.consumed() == 3);
        CHECK(ev.remaining() == 7);
    }
    CHECK(ev.remaining() == 97);
}

TEST_CASE("central difference on a scalar quadratic") {
    const BoundedProblem p = sphere(1, -10, 10);
    BudgetedEvaluator ev(p, 10);
    const std::vector<double> x{3.0};
    const std::vector<double> g = central_difference_gradient(ev, x, 1e-4);
    CHECK(g[0] == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(ev.used() == 2);
}

TEST_CASE("central difference at the optimum is zero") {
    const BoundedProblem p = sphere(5);
    BudgetedEvaluator ev(p, 100);
    const std::vector<double> g = central_difference_gradient(ev, std::vector<double>(5, 0.0));
    for (double v : g) CHECK(v == 0.0);
}

TEST_CASE("central difference charges exactly 2D evaluations") {
    const BoundedProblem p = soco::make_problem(soco::FunctionId::F1, 50);
    BudgetedEvaluator ev(p, 1000);
    ev(p.shift());
    const std::uint64_t before = ev.used();
    central_difference_gradient(ev, p.shift());
    CHECK(ev.used() - before == 100);
}

TEST_CASE("central difference refuses a partial gradient") {
    const BoundedProblem p = sphere(5);
    BudgetedEvaluator ev(p, 9);
    CHECK_THROWS_AS(central_difference_gradient(ev, std::vector<double>(5, 1.0)), BudgetExhausted);
    CHECK(ev.used() == 0);
}

TEST_CASE("central difference stays inside the box at the boundary") {
    std::vector<std::vector<double>> seen;
    const BoundedProblem p = sphere(3, -1.0, 1.0);
    BudgetedEvaluator ev(p, 100);
    ev.set_observer([&](std::span<const double> x, double) { seen.emplace_back(x.begin(), x.end()); });
    const std::vector<double> x{1.0, -1.0, 0.25};
    const std::vector<double> g = central_difference_gradient(ev, x, 1e-6);
    CHECK(ev.used() == 6);
    for (const auto& y : seen) CHECK(p.contains(y));
    CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(g[1] == doctest::Approx(-2.0).epsilon(1e-5));
    CHECK(g[2] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("gradient fidelity on F1 at random points") {
    std::mt19937_64 rng(11);
    const BoundedProblem p = soco::make_problem(soco::FunctionId::F1, 10);
    for (int trial = 0; trial < 100; ++trial) {
        BudgetedEvaluator ev(p, 100);
        const std::vector<double> x = random_point(rng, p);
        const std::vector<double> g = central_difference_gradient(ev, x, 1e-5);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double exact = 2.0 * (x[i] - p.shift()[i]);
            num += (g[i] - exact) * (g[i] - exact);
            den += exact * exact;
        }
        CHECK(std::sqrt(num / den) <= 1e-6);
    }
}

TEST_CASE("clamp_to_bounds") {
    const BoundedProblem p = sphere(2);
    const std::vector<double> out = clamp_to_bounds(std::vector<double>{200.0, -200.0}, p);
    CHECK(out == std::vector<double>{100.0, -100.0});
    const std::vector<double> in{3.0, -7.5};
    CHECK(clamp_to_bounds(in, p) == in);
}

TEST_CASE("property: clamping is idempotent and feasible") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g(0.0, 150.0);
    const BoundedProblem p = sphere(6);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> x(6);
        for (double& v : x) v = g(rng);
        const std::vector<double> once = clamp_to_bounds(x, p);
        CHECK(p.contains(once));
        CHECK(clamp_to_bounds(once, p) == once);
    }
}

TEST_CASE("shift files round-trip and reject bad input") {
    const auto dir = std::filesystem::temp_directory_path() / "hiacor_test_problem";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "o.txt").string();
    const std::vector<double> o{1.5, -2.25, 3.125e-7, 99.0};
    write_shift_file(path, o);
    CHECK(read_shift_file(path, 4) == o);
    CHECK_THROWS_AS(read_shift_file(path, 5), BadShiftFile);
    {
        std::ofstream f(dir / "bad.txt");
        f << "3\n1.0 abc 2.0\n";
    }
    CHECK_THROWS_AS(read_shift_file((dir / "bad.txt").string(), 3), BadShiftFile);
    CHECK_THROWS_AS(read_shift_file((dir / "missing.txt").string(), 3), BadShiftFile);
    std::filesystem::remove_all(dir);
}

TEST_CASE("problem construction validates the box") {
    auto f = [](std::span<const double>) { return 0.0; };
    CHECK_THROWS(BoundedProblem("bad", {1.0}, {0.0}, {0.5}, 0.0, f));
    CHECK_THROWS(BoundedProblem("bad", {0.0}, {1.0}, {2.0}, 0.0, f));
    CHECK_THROWS(BoundedProblem("bad", {0.0, 0.0}, {1.0}, {0.5}, 0.0, f));
}
