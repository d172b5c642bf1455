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
#ifndef HIACOR_SOCO_HPP
#define HIACOR_SOCO_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hiacor/problem.hpp"

/// The 19 shifted SOCO benchmark functions and their hybrid compositions.
namespace hiacor::soco {

enum class FunctionId : int {
    F1 = 1, F2, F3, F4, F5, F6, F7, F8, F9, F10,
    F11, F12, F13, F14, F15, F16, F17, F18, F19
};

inline constexpr int kFunctionCount = 19;

class UnknownFunction : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Modality { Unimodal, Multimodal };

struct FunctionInfo {
    FunctionId id;
    std::string_view name;
    Modality modality;
    bool separable;
    double lower;  ///< default search box, same for every coordinate
    double upper;
};

/// Catalogue of all 19 functions in id order.
std::span<const FunctionInfo> list_suite();
const FunctionInfo& info(FunctionId id);

/// "F7" -> FunctionId::F7. Also accepts "f7" and "7".
FunctionId parse_function_id(std::string_view text);
std::string to_string(FunctionId id);

struct HybridComposition {
    FunctionId part_a;
    FunctionId part_b;
    double weight_b;
};

/// Components of F12..F19; nullopt for the basic functions.
std::optional<HybridComposition> hybrid_of(FunctionId id);

/// f10(x, y) = (x^2 + y^2)^0.25 (sin^2(50 (x^2 + y^2)^0.1) + 1).
double f10(double x, double y) noexcept;

/// Cyclic chain of f10 over consecutive coordinate pairs (F9 kernel).
double f10_pairwise(std::span<const double> z);

/**
 * Value of function `id` at shifted coordinates z, without bias.
 *
 * With `literal_printed_forms` set, F3 and F10 use the forms exactly as they
 * are commonly misprinted: Rosenbrock with (z_i^2 + z_{i+1})^2 and no +1
 * offset, and Bohachevsky summed to D with a cyclic z_{D+1} = z_1. Those
 * variants do not have a known optimum and exist for comparison only.
 */
double value(FunctionId id, std::span<const double> z, bool literal_printed_forms = false);

/// Where the shift vector o comes from.
struct ShiftSource {
    std::optional<std::string> file;      ///< plain-text shift file
    std::optional<std::vector<double>> explicit_shift;
    std::uint64_t seed = 1;               ///< used when neither of the above is set
};

struct Options {
    std::optional<std::pair<double, double>> box;  ///< overrides the default box
    double bias = 0.0;
    bool literal_printed_forms = false;
};

/// Seeded shift drawn uniformly from the middle 80% of the box.
std::vector<double> generate_shift(FunctionId id, std::span<const double> lower,
                                   std::span<const double> upper, std::uint64_t seed);

/// Builds the shifted problem for `id` in dimension `dim` (dim >= 2).
BoundedProblem make_problem(FunctionId id, std::size_t dim, const ShiftSource& shift = {},
                            const Options& options = {});

/// One line of a suite manifest.
struct SuiteEntry {
    FunctionId id = FunctionId::F1;
    std::size_t dim = 50;
    ShiftSource shift;
    Options options;
};

/// F1..F19 in dimension `dim`, shifts seeded from `shift_seed`.
std::vector<SuiteEntry> builtin_suite(std::size_t dim, std::uint64_t shift_seed = 1);

/**
 * Parses a JSON suite manifest:
 *
 *     { "dim": 50, "shift_seed": 1,
 *       "functions": [ "F1", { "id": "F3", "dim": 10, "box": [-5, 5],
 *                              "shift_file": "o3.txt", "bias": 0 } ] }
 *
 * Entry-level keys override the top-level defaults. Relative shift-file
 * paths resolve against `base_dir`.
 */
std::vector<SuiteEntry> parse_suite_manifest(std::string_view json_text,
                                             const std::string& base_dir = ".");
std::vector<SuiteEntry> load_suite_manifest(const std::string& path);

}  // namespace hiacor::soco

#endif  // HIACOR_SOCO_HPP
