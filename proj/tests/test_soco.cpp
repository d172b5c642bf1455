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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "hiacor/soco.hpp"

using namespace hiacor;
using namespace hiacor::soco;

namespace {

std::vector<FunctionId> all_ids() {
    std::vector<FunctionId> ids;
    for (const FunctionInfo& f : list_suite()) ids.push_back(f.id);
    return ids;
}

std::vector<double> random_point(std::mt19937_64& rng, const BoundedProblem& p) {
    std::vector<double> x(p.dimension());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::uniform_real_distribution<double>(p.lower()[i], p.upper()[i])(rng);
    return x;
}

ShiftSource seeded(std::uint64_t seed) {
    ShiftSource s;
    s.seed = seed;
    return s;
}

}  // namespace

TEST_CASE("catalogue metadata") {
    const auto suite = list_suite();
    REQUIRE(suite.size() == 19);
    CHECK(info(FunctionId::F1).modality == Modality::Unimodal);
    CHECK(info(FunctionId::F1).separable);
    CHECK(info(FunctionId::F5).modality == Modality::Multimodal);
    CHECK_FALSE(info(FunctionId::F5).separable);
    CHECK(info(FunctionId::F3).modality == Modality::Multimodal);
    CHECK_FALSE(info(FunctionId::F3).separable);
    const auto hybrids = std::count_if(suite.begin(), suite.end(),
                                       [](const FunctionInfo& f) { return hybrid_of(f.id).has_value(); });
    CHECK(hybrids == 8);
    CHECK(info(FunctionId::F4).lower == -5.0);
    CHECK(info(FunctionId::F8).upper == 65.536);
}

TEST_CASE("function id parsing") {
    CHECK(parse_function_id("F7") == FunctionId::F7);
    CHECK(parse_function_id("f12") == FunctionId::F12);
    CHECK(parse_function_id("19") == FunctionId::F19);
    CHECK(to_string(FunctionId::F3) == "F3");
    CHECK_THROWS_AS(parse_function_id("F20"), UnknownFunction);
    CHECK_THROWS_AS(parse_function_id("sphere"), UnknownFunction);
    CHECK_THROWS_AS(parse_function_id("F0"), UnknownFunction);
}

TEST_CASE("every function attains its optimum at the shift") {
    for (std::size_t dim : {2u, 10u, 50u}) {
        for (FunctionId id : all_ids()) {
            Options opt;
            opt.bias = 12.5;
            const BoundedProblem p = make_problem(id, dim, {}, opt);
            CAPTURE(to_string(id));
            CAPTURE(dim);
            CHECK(std::fabs(p(p.shift()) - p.optimum_value()) <= 1e-12);
        }
    }
}

TEST_CASE("Rastrigin and Ackley vanish exactly at the optimum") {
    for (std::size_t dim : {2u, 7u, 50u}) {
        CHECK(make_problem(FunctionId::F4, dim).error(make_problem(FunctionId::F4, dim)(
                  make_problem(FunctionId::F4, dim).shift())) == 0.0);
        const BoundedProblem ackley = make_problem(FunctionId::F6, dim);
        CHECK(ackley(ackley.shift()) == 0.0);
    }
}

TEST_CASE("hybrids are the weighted sum of their parts") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    const HybridComposition f12 = *hybrid_of(FunctionId::F12);
    CHECK(f12.part_a == FunctionId::F9);
    CHECK(f12.part_b == FunctionId::F1);
    CHECK(f12.weight_b == 0.25);
    for (FunctionId id : all_ids()) {
        const auto h = hybrid_of(id);
        if (!h) continue;
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> z(10);
            for (double& v : z) v = u(rng);
            CHECK(value(id, z) == value(h->part_a, z) + h->weight_b * value(h->part_b, z));
        }
    }
}

TEST_CASE("pairwise f10 chain") {
    CHECK(f10_pairwise(std::vector<double>(6, 0.0)) == 0.0);
    const double s = std::sin(50.0);
    CHECK(f10_pairwise(std::vector<double>{1.0, 0.0}) == doctest::Approx(2.0 * (s * s + 1.0)).epsilon(1e-14));
    CHECK(f10(3.0, 4.0) == doctest::Approx(std::pow(25.0, 0.25) *
                                           (std::pow(std::sin(50.0 * std::pow(25.0, 0.1)), 2) + 1.0))
                               .epsilon(1e-14));
    CHECK_THROWS(f10_pairwise(std::vector<double>{1.0}));

    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> z(2 + trial % 9);
        for (double& v : z) v = g(rng);
        std::vector<double> rotated = z;
        std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
        CHECK(f10_pairwise(rotated) == doctest::Approx(f10_pairwise(z)).epsilon(1e-13));
    }
}

TEST_CASE("property: separable functions are minimized coordinate by coordinate") {
    std::mt19937_64 rng(21);
    for (FunctionId id : {FunctionId::F1, FunctionId::F4, FunctionId::F6, FunctionId::F7}) {
        CAPTURE(to_string(id));
        const FunctionInfo& meta = info(id);
        std::uniform_real_distribution<double> u(meta.lower / 2, meta.upper / 2);
        std::vector<double> z(5);
        for (double& v : z) v = u(rng);
        // With the other coordinates fixed, z_i = 0 is the best value on a fine grid.
        for (std::size_t i = 0; i < z.size(); ++i) {
            std::vector<double> y = z;
            y[i] = 0.0;
            const double at_zero = value(id, y);
            for (int k = -200; k <= 200; ++k) {
                y[i] = meta.upper * k / 200.0;
                CHECK(value(id, y) >= at_zero - 1e-12);
            }
            z[i] = 0.0;
        }
        CHECK(value(id, z) == doctest::Approx(0.0));
    }
}

TEST_CASE("property: shifting the point is the same as shifting the function") {
    std::mt19937_64 rng(33);
    for (FunctionId id : all_ids()) {
        CAPTURE(to_string(id));
        const BoundedProblem shifted = make_problem(id, 10, seeded(77));
        ShiftSource zero;
        zero.explicit_shift = std::vector<double>(10, 0.0);
        const BoundedProblem plain = make_problem(id, 10, zero);
        for (int trial = 0; trial < 100; ++trial) {
            const std::vector<double> x = random_point(rng, shifted);
            std::vector<double> z(10);
            for (std::size_t i = 0; i < 10; ++i) z[i] = x[i] - shifted.shift()[i];
            const double a = shifted(x), b = plain(z);
            CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)));
        }
    }
}

TEST_CASE("property: values stay finite at the box extremes") {
    for (FunctionId id : all_ids()) {
        CAPTURE(to_string(id));
        const BoundedProblem p = make_problem(id, 50);
        for (std::size_t i = 0; i < 50; ++i) {
            for (double edge : {p.lower()[i], p.upper()[i]}) {
                std::vector<double> x = p.shift();
                x[i] = edge;
                CHECK(std::isfinite(p(x)));
            }
        }
        CHECK(std::isfinite(p(p.lower())));
        CHECK(std::isfinite(p(p.upper())));
    }
}

TEST_CASE("property: the optimum bounds every sampled value from below") {
    std::mt19937_64 rng(55);
    for (FunctionId id : all_ids()) {
        CAPTURE(to_string(id));
        const BoundedProblem p = make_problem(id, 10);
        double lowest = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 100000; ++k) lowest = std::min(lowest, p(random_point(rng, p)));
        CHECK(lowest >= p.optimum_value() - 1e-9);
    }
}

TEST_CASE("generated shifts are seeded and stay in the middle of the box") {
    const BoundedProblem a = make_problem(FunctionId::F5, 20, seeded(3));
    const BoundedProblem b = make_problem(FunctionId::F5, 20, seeded(3));
    const BoundedProblem c = make_problem(FunctionId::F5, 20, seeded(4));
    CHECK(a.shift() == b.shift());
    CHECK(a.shift() != c.shift());
    for (double o : a.shift()) CHECK(std::fabs(o) <= 0.8 * 600.0 + 1e-9);
}

TEST_CASE("box override and bad shifts") {
    Options opt;
    opt.box = std::pair{-1.0, 1.0};
    const BoundedProblem p = make_problem(FunctionId::F1, 3, {}, opt);
    CHECK(p.lower()[0] == -1.0);
    CHECK(p.upper()[2] == 1.0);
    ShiftSource far;
    far.explicit_shift = std::vector<double>{0.0, 5.0, 0.0};
    CHECK_THROWS_AS(make_problem(FunctionId::F1, 3, far, opt), BadShiftFile);
    far.explicit_shift = std::vector<double>{0.0, 0.0};
    CHECK_THROWS_AS(make_problem(FunctionId::F1, 3, far, opt), DimensionMismatch);
    CHECK_THROWS(make_problem(FunctionId::F9, 1));
}

TEST_CASE("builtin suite and manifests") {
    const auto suite = builtin_suite(10, 5);
    REQUIRE(suite.size() == 19);
    CHECK(suite[18].id == FunctionId::F19);
    CHECK(suite[0].dim == 10);

    const auto dir = std::filesystem::temp_directory_path() / "hiacor_test_soco";
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "o.txt");
        f << "4\n1 2 3 4\n";
    }
    const std::string text = R"({"dim": 6, "shift_seed": 9,
        "functions": ["F1", {"id": "F4", "dim": 4, "box": [-10, 10], "shift_file": "o.txt", "bias": 2}]})";
    const auto entries = parse_suite_manifest(text, dir.string());
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].dim == 6);
    CHECK(entries[0].shift.seed == 9);
    CHECK(entries[1].dim == 4);
    const BoundedProblem p = make_problem(entries[1].id, entries[1].dim, entries[1].shift, entries[1].options);
    CHECK(p.shift() == std::vector<double>{1, 2, 3, 4});
    CHECK(p.upper()[0] == 10.0);
    CHECK(p(p.shift()) == 2.0);
    CHECK_THROWS_AS(parse_suite_manifest("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_suite_manifest(R"({"functions": [3.5]})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_suite_manifest(R"({"functions": ["F99"]})"), UnknownFunction);
    std::filesystem::remove_all(dir);
}

TEST_CASE("literal printed forms differ from the canonical ones") {
    const std::vector<double> z{0.0, 0.0, 0.0};
    CHECK(value(FunctionId::F3, z) == 0.0);
    CHECK(value(FunctionId::F10, z) == 0.0);
    const std::vector<double> w{0.3, -0.2, 0.5};
    CHECK(value(FunctionId::F3, w, true) != value(FunctionId::F3, w));
    CHECK(value(FunctionId::F10, w, true) != value(FunctionId::F10, w));
}
