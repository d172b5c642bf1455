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
#include <random>

#include "hiacor/local_search.hpp"
#include "hiacor/soco.hpp"

using namespace hiacor;
using namespace hiacor::ls;

namespace {

BoundedProblem sphere(std::size_t dim, double lo = -10.0, double hi = 10.0) {
    return BoundedProblem("sphere", std::vector<double>(dim, lo), std::vector<double>(dim, hi),
                          std::vector<double>(dim, 0.0), 0.0, [](std::span<const double> z) {
                              double s = 0.0;
                              for (double v : z) s += v * v;
                              return s;
                          });
}

BoundedProblem rosenbrock2() {
    return BoundedProblem("rosen", {-5.0, -5.0}, {5.0, 5.0}, {0.0, 0.0}, 0.0, [](std::span<const double> x) {
        const double a = x[0] * x[0] - x[1];
        const double b = x[0] - 1.0;
        return 100.0 * a * a + b * b;
    });
}

std::vector<double> random_point(std::mt19937_64& rng, const BoundedProblem& p) {
    std::vector<double> x(p.dimension());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::uniform_real_distribution<double>(p.lower()[i], p.upper()[i])(rng);
    return x;
}

}  // namespace

TEST_CASE("mtsls1 pass: forward rejected, backward accepted") {
    const BoundedProblem p = sphere(1);
    BudgetedEvaluator ev(p, 100);
    Mtsls1State st = make_mtsls1_state(p);
    st.step = {0.5};
    const std::vector<double> x{1.0};
    const Mtsls1PassResult r = mtsls1_pass(ev, x, 1.0, st);
    CHECK(r.x == std::vector<double>{0.75});
    CHECK(r.value == 0.5625);
    CHECK(r.improved);
    CHECK(ev.used() == 2);
}

TEST_CASE("mtsls1 pass: the optimum is a fixed point") {
    const BoundedProblem p = sphere(1);
    BudgetedEvaluator ev(p, 100);
    Mtsls1State st = make_mtsls1_state(p);
    st.step = {0.3};
    const Mtsls1PassResult r = mtsls1_pass(ev, std::vector<double>{0.0}, 0.0, st);
    CHECK(r.x == std::vector<double>{0.0});
    CHECK(r.value == 0.0);
    CHECK_FALSE(r.improved);
    CHECK_FALSE(st.improved_last_pass);
}

TEST_CASE("mtsls1 pass: later dimensions start from the improved point") {
    const BoundedProblem p = sphere(2);
    BudgetedEvaluator ev(p, 100);
    Mtsls1State st = make_mtsls1_state(p);
    st.step = {2.0, 2.0};  // the backward half step lands on 0 in each dimension
    std::vector<std::vector<double>> seen;
    ev.set_observer([&](std::span<const double> x, double) { seen.emplace_back(x.begin(), x.end()); });
    const Mtsls1PassResult r = mtsls1_pass(ev, std::vector<double>{1.0, 1.0}, 2.0, st);
    CHECK(r.x == std::vector<double>{0.0, 0.0});
    CHECK(r.value == 0.0);
    REQUIRE(seen.size() == 4);
    CHECK(seen[1] == std::vector<double>{0.0, 1.0});
    CHECK(seen[2] == std::vector<double>{0.0, 3.0});
    CHECK(seen[3] == std::vector<double>{0.0, 0.0});
}

TEST_CASE("mtsls1 initial steps and scheduling") {
    const BoundedProblem p = sphere(3, -5.0, 5.0);
    Mtsls1State st = make_mtsls1_state(p);
    for (double s : st.step) CHECK(s == doctest::Approx(4.0));
    halve_steps(st);
    for (double s : st.step) CHECK(s == doctest::Approx(2.0));
    st.resolution_aware_reset = false;
    st.step[1] = 1e-15;
    reset_exhausted_steps(st, std::vector<double>{0.0, 0.0, 0.0});
    CHECK(st.step[0] == doctest::Approx(2.0));
    CHECK(st.step[1] == doctest::Approx(4.0));
}

TEST_CASE("property: mtsls1 pass is deterministic and never worsens") {
    std::mt19937_64 rng(13);
    const BoundedProblem p = soco::make_problem(soco::FunctionId::F6, 8);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> x = random_point(rng, p);
        Mtsls1State s1 = make_mtsls1_state(p), s2 = make_mtsls1_state(p);
        std::uniform_real_distribution<double> u(0.01, 10.0);
        for (std::size_t i = 0; i < s1.step.size(); ++i) s1.step[i] = s2.step[i] = u(rng);
        BudgetedEvaluator e1(p, 1000), e2(p, 1000);
        const double fx = p(x);
        const Mtsls1PassResult a = mtsls1_pass(e1, x, fx, s1);
        const Mtsls1PassResult b = mtsls1_pass(e2, x, fx, s2);
        CHECK(a.x == b.x);
        CHECK(a.value == b.value);
        CHECK(e1.used() == e2.used());
        CHECK(a.value <= fx);
        CHECK(a.value == p(a.x));
    }
}

TEST_CASE("quasi-Newton solves a sphere") {
    std::mt19937_64 rng(1);
    const BoundedProblem p = sphere(5, -1.0, 1.0);
    QuasiNewtonSearcher qn;
    BudgetedEvaluator ev(p, 100000);
    const SearchResult r = qn.search(ev, random_point(rng, p));
    CHECK(r.value <= 1e-15);
    CHECK(r.evaluations <= evaluation_cap(5, 160));
}

TEST_CASE("quasi-Newton on a two-dimensional Rosenbrock valley") {
    const BoundedProblem p = rosenbrock2();
    QuasiNewtonSearcher qn;
    BudgetedEvaluator ev(p, 100000);
    const std::vector<double> x0{-1.2, 1.0};
    const SearchResult r = qn.search(ev, x0);
    CHECK(r.value < 1e-8);
    CHECK(std::fabs(r.x[0] - 1.0) < 1e-3);
    CHECK(std::fabs(r.x[1] - 1.0) < 2e-3);
}

TEST_CASE("quasi-Newton started at the optimum stays put") {
    const BoundedProblem p = sphere(4);
    QuasiNewtonSearcher qn;
    BudgetedEvaluator ev(p, 1000);
    const std::vector<double> x0(4, 0.0);
    const SearchResult r = qn.search(ev, x0);
    CHECK(r.x == x0);
    CHECK(r.value == 0.0);
    CHECK(ev.used() <= 2 * 4 + 1);
}

TEST_CASE("property: quasi-Newton opens with a descent direction on F1") {
    std::mt19937_64 rng(27);
    const BoundedProblem p = soco::make_problem(soco::FunctionId::F1, 10);
    for (int trial = 0; trial < 100; ++trial) {
        QuasiNewtonSearcher qn;
        BudgetedEvaluator ev(p, 100000);
        const std::vector<double> x0 = random_point(rng, p);
        qn.search(ev, x0);
        const std::vector<double>& d = qn.first_direction();
        REQUIRE(d.size() == 10);
        double dot = 0.0;
        for (std::size_t i = 0; i < 10; ++i) dot += d[i] * 2.0 * (x0[i] - p.shift()[i]);
        CHECK(dot < 0.0);
    }
}

TEST_CASE("Nelder-Mead on small quadratics") {
    NelderMeadSearcher nm;
    const BoundedProblem p2 = sphere(2);
    BudgetedEvaluator ev2(p2, 100000);
    CHECK(nm.search(ev2, std::vector<double>{1.0, 1.0}).value <= 1e-10);

    const BoundedProblem p1 = sphere(1);
    BudgetedEvaluator ev1(p1, 100000);
    CHECK(nm.search(ev1, std::vector<double>{3.0}).value <= 1e-10);
}

TEST_CASE("property: every searcher is monotone, feasible and capped") {
    std::mt19937_64 rng(41);
    for (SearcherKind kind : {SearcherKind::Mtsls1, SearcherKind::QuasiNewton, SearcherKind::NelderMead}) {
        CAPTURE(to_string(kind));
        for (soco::FunctionId id : {soco::FunctionId::F3, soco::FunctionId::F5, soco::FunctionId::F9,
                                    soco::FunctionId::F15}) {
            const BoundedProblem p = soco::make_problem(id, 6);
            auto searcher = make_searcher(kind);
            for (int trial = 0; trial < 5; ++trial) {
                bool feasible = true;
                BudgetedEvaluator ev(p, 1000000);
                ev.set_observer([&](std::span<const double> x, double) { feasible = feasible && p.contains(x); });
                const std::vector<double> x0 = random_point(rng, p);
                const double f0 = p(x0);
                const std::uint64_t before = ev.used();
                const SearchResult r = searcher->search(ev, x0, f0);
                CHECK(r.value <= f0);
                CHECK(feasible);
                CHECK(p.contains(r.x));
                CHECK(r.value == p(r.x));
                CHECK(ev.used() - before <= evaluation_cap(6, 160));
                CHECK(r.evaluations == ev.used() - before);
            }
        }
    }
}

TEST_CASE("global budget exhaustion returns the best point with a flag") {
    const BoundedProblem p = soco::make_problem(soco::FunctionId::F1, 5);
    for (SearcherKind kind : {SearcherKind::Mtsls1, SearcherKind::QuasiNewton, SearcherKind::NelderMead}) {
        BudgetedEvaluator ev(p, 25);
        std::vector<double> x0 = p.upper();
        const double f0 = p(x0);
        const SearchResult r = make_searcher(kind)->search(ev, x0, f0);
        CHECK(r.exhausted);
        // A gradient is never started without 2D evaluations left.
        CHECK(ev.used() <= 25);
        CHECK(ev.used() >= 25 - 2 * 5);
        CHECK(r.value <= f0);
    }
}

TEST_CASE("the per-call cap is (2D+1) times the iteration cap") {
    CHECK(evaluation_cap(50, 160) == 101 * 160);
    CHECK(evaluation_cap(10, 160) == 21 * 160);
    const BoundedProblem p = soco::make_problem(soco::FunctionId::F9, 3);
    SearchConfig cfg;
    cfg.call_cap = 2;
    auto searcher = make_searcher(SearcherKind::QuasiNewton, cfg);
    BudgetedEvaluator ev(p, 1000000);
    const SearchResult r = searcher->search(ev, p.upper());
    CHECK(ev.used() <= 14);
    CHECK(r.evaluations <= 14);
}

TEST_CASE("mtsls1 steps persist across calls and can be reseeded") {
    const BoundedProblem p = sphere(3);
    Mtsls1Searcher m;
    BudgetedEvaluator ev(p, 1000000);
    m.search(ev, std::vector<double>{1.0, 2.0, 3.0});
    const std::vector<double> after = m.state().step;
    CHECK(after.size() == 3);
    m.seed_steps(p, std::vector<double>{0.5, 0.0, -1.0});
    CHECK(m.state().step[0] == 0.5);
    CHECK(m.state().step[1] == doctest::Approx(8.0));
    CHECK(m.state().step[2] == doctest::Approx(8.0));
}
