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
#include "hiacor/soco.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

namespace hiacor::soco {
namespace {

using M = Modality;

constexpr std::array<FunctionInfo, kFunctionCount> kSuite{{
    {FunctionId::F1, "Shifted Sphere", M::Unimodal, true, -100.0, 100.0},
    {FunctionId::F2, "Shifted Schwefel 2.21", M::Unimodal, false, -100.0, 100.0},
    {FunctionId::F3, "Shifted Rosenbrock", M::Multimodal, false, -100.0, 100.0},
    {FunctionId::F4, "Shifted Rastrigin", M::Multimodal, true, -5.0, 5.0},
    {FunctionId::F5, "Shifted Griewank", M::Multimodal, false, -600.0, 600.0},
    {FunctionId::F6, "Shifted Ackley", M::Multimodal, true, -32.0, 32.0},
    {FunctionId::F7, "Shifted Schwefel 2.22", M::Unimodal, true, -10.0, 10.0},
    {FunctionId::F8, "Shifted Schwefel 1.2", M::Unimodal, false, -65.536, 65.536},
    {FunctionId::F9, "Shifted Extended f10", M::Unimodal, false, -100.0, 100.0},
    {FunctionId::F10, "Shifted Bohachevsky", M::Unimodal, false, -15.0, 15.0},
    {FunctionId::F11, "Shifted Schaffer", M::Unimodal, false, -100.0, 100.0},
    // Hybrids: the box is the intersection of the component boxes.
    {FunctionId::F12, "Hybrid F9 + 0.25 F1", M::Multimodal, false, -100.0, 100.0},
    {FunctionId::F13, "Hybrid F9 + 0.25 F3", M::Multimodal, false, -100.0, 100.0},
    {FunctionId::F14, "Hybrid F9 + 0.25 F4", M::Multimodal, false, -5.0, 5.0},
    {FunctionId::F15, "Hybrid F10 + 0.25 F7", M::Multimodal, false, -10.0, 10.0},
    {FunctionId::F16, "Hybrid F9 + 0.5 F1", M::Multimodal, false, -100.0, 100.0},
    {FunctionId::F17, "Hybrid F9 + 0.75 F3", M::Multimodal, false, -100.0, 100.0},
    {FunctionId::F18, "Hybrid F9 + 0.75 F4", M::Multimodal, false, -5.0, 5.0},
    {FunctionId::F19, "Hybrid F10 + 0.75 F7", M::Multimodal, false, -10.0, 10.0},
}};

constexpr double kPi = std::numbers::pi;

// 1 - cos(2t) == 2 sin^2(t), without the cancellation near t = 0.
double sq_sin(double t) {
    const double v = std::sin(t);
    return v * v;
}

double sphere(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return s;
}

double schwefel_221(std::span<const double> z) {
    double m = 0.0;
    for (double v : z) m = std::max(m, std::abs(v));
    return m;
}

// Rosenbrock evaluated at w = z + 1, written in z so the optimum sits at
// z = 0 and small residuals keep full precision.
double rosenbrock(std::span<const double> z) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i] * z[i] + 2.0 * z[i] - z[i + 1];
        s += 100.0 * a * a + z[i] * z[i];
    }
    return s;
}

double rosenbrock_literal(std::span<const double> z) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i] * z[i] + z[i + 1];
        const double b = z[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double rastrigin(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v + 20.0 * sq_sin(kPi * v);
    return s;
}

double griewank(std::span<const double> z) {
    // q accumulates 1 - prod(cos) as 1 - prod(1 - a_i) with a_i = 1 - cos.
    double s = 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        s += z[i] * z[i];
        const double a = 2.0 * sq_sin(0.5 * z[i] / std::sqrt(static_cast<double>(i + 1)));
        q = q + a - q * a;
    }
    return s / 4000.0 + q;
}

double ackley(std::span<const double> z) {
    const double d = static_cast<double>(z.size());
    double sq = 0.0;
    double dc = 0.0;  // sum of cos(2 pi z) - 1
    for (double v : z) {
        sq += v * v;
        dc -= 2.0 * sq_sin(kPi * v);
    }
    const double e = std::exp(1.0);
    return -20.0 * std::expm1(-0.2 * std::sqrt(sq / d)) - e * std::expm1(dc / d);
}

double schwefel_222(std::span<const double> z) {
    double s = 0.0;
    double p = 1.0;
    for (double v : z) {
        s += std::abs(v);
        p *= std::abs(v);
    }
    return s + p;
}

double schwefel_12(std::span<const double> z) {
    double s = 0.0;
    double prefix = 0.0;
    for (double v : z) {
        prefix += v;
        s += prefix * prefix;
    }
    return s;
}

double bohachevsky_term(double a, double b) {
    return a * a + 2.0 * b * b + 0.6 * sq_sin(1.5 * kPi * a) + 0.8 * sq_sin(2.0 * kPi * b);
}

double bohachevsky(std::span<const double> z) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) s += bohachevsky_term(z[i], z[i + 1]);
    return s;
}

double bohachevsky_literal(std::span<const double> z) {
    double s = 0.0;
    const std::size_t d = z.size();
    for (std::size_t i = 0; i < d; ++i) s += bohachevsky_term(z[i], z[(i + 1) % d]);
    return s;
}

double schaffer(std::span<const double> z) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) s += f10(z[i], z[i + 1]);
    return s;
}

double basic_value(FunctionId id, std::span<const double> z, bool literal) {
    switch (id) {
        case FunctionId::F1: return sphere(z);
        case FunctionId::F2: return schwefel_221(z);
        case FunctionId::F3: return literal ? rosenbrock_literal(z) : rosenbrock(z);
        case FunctionId::F4: return rastrigin(z);
        case FunctionId::F5: return griewank(z);
        case FunctionId::F6: return ackley(z);
        case FunctionId::F7: return schwefel_222(z);
        case FunctionId::F8: return schwefel_12(z);
        case FunctionId::F9: return f10_pairwise(z);
        case FunctionId::F10: return literal ? bohachevsky_literal(z) : bohachevsky(z);
        case FunctionId::F11: return schaffer(z);
        default: break;
    }
    throw UnknownFunction("not a basic SOCO function: " + to_string(id));
}

bool valid_id(int raw) { return raw >= 1 && raw <= kFunctionCount; }

std::uint64_t shift_stream_seed(FunctionId id, std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id), 0x5eedu};
    std::array<std::uint64_t, 1> out{};
    seq.generate(out.begin(), out.end());
    return out[0];
}

}  // namespace

std::span<const FunctionInfo> list_suite() { return kSuite; }

const FunctionInfo& info(FunctionId id) {
    const int raw = static_cast<int>(id);
    if (!valid_id(raw)) throw UnknownFunction("unknown SOCO function id " + std::to_string(raw));
    return kSuite[static_cast<std::size_t>(raw - 1)];
}

FunctionId parse_function_id(std::string_view text) {
    std::string_view digits = text;
    if (!digits.empty() && (digits.front() == 'F' || digits.front() == 'f')) digits.remove_prefix(1);
    int raw = 0;
    bool ok = !digits.empty() && digits.size() <= 2;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            ok = false;
            break;
        }
        raw = raw * 10 + (c - '0');
    }
    if (!ok || !valid_id(raw))
        throw UnknownFunction("unknown SOCO function '" + std::string(text) + "'");
    return static_cast<FunctionId>(raw);
}

std::string to_string(FunctionId id) { return "F" + std::to_string(static_cast<int>(id)); }

std::optional<HybridComposition> hybrid_of(FunctionId id) {
    using F = FunctionId;
    switch (id) {
        case F::F12: return HybridComposition{F::F9, F::F1, 0.25};
        case F::F13: return HybridComposition{F::F9, F::F3, 0.25};
        case F::F14: return HybridComposition{F::F9, F::F4, 0.25};
        case F::F15: return HybridComposition{F::F10, F::F7, 0.25};
        case F::F16: return HybridComposition{F::F9, F::F1, 0.5};
        case F::F17: return HybridComposition{F::F9, F::F3, 0.75};
        case F::F18: return HybridComposition{F::F9, F::F4, 0.75};
        case F::F19: return HybridComposition{F::F10, F::F7, 0.75};
        default: return std::nullopt;
    }
}

double f10(double x, double y) noexcept {
    const double s = x * x + y * y;
    const double t = std::sin(50.0 * std::pow(s, 0.1));
    return std::pow(s, 0.25) * (t * t + 1.0);
}

double f10_pairwise(std::span<const double> z) {
    const std::size_t d = z.size();
    if (d < 2) throw std::invalid_argument("f10_pairwise needs at least two coordinates");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < d; ++i) s += f10(z[i], z[i + 1]);
    return s + f10(z[d - 1], z[0]);
}

double value(FunctionId id, std::span<const double> z, bool literal_printed_forms) {
    if (auto h = hybrid_of(id)) {
        return basic_value(h->part_a, z, literal_printed_forms) +
               h->weight_b * basic_value(h->part_b, z, literal_printed_forms);
    }
    return basic_value(id, z, literal_printed_forms);
}

std::vector<double> generate_shift(FunctionId id, std::span<const double> lower,
                                   std::span<const double> upper, std::uint64_t seed) {
    if (lower.size() != upper.size()) throw DimensionMismatch(lower.size(), upper.size());
    std::mt19937_64 rng(shift_stream_seed(id, seed));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> o(lower.size());
    for (std::size_t i = 0; i < o.size(); ++i) {
        const double w = upper[i] - lower[i];
        o[i] = lower[i] + 0.1 * w + 0.8 * w * unit(rng);
    }
    return o;
}

BoundedProblem make_problem(FunctionId id, std::size_t dim, const ShiftSource& shift,
                            const Options& options) {
    const FunctionInfo& meta = info(id);
    if (dim < 2) throw std::invalid_argument("SOCO functions need dim >= 2");
    const auto [lo, hi] = options.box.value_or(std::pair{meta.lower, meta.upper});
    std::vector<double> lower(dim, lo);
    std::vector<double> upper(dim, hi);

    std::vector<double> o;
    if (shift.explicit_shift) {
        o = *shift.explicit_shift;
        if (o.size() != dim) throw DimensionMismatch(dim, o.size());
    } else if (shift.file) {
        o = read_shift_file(*shift.file, dim);
    } else {
        o = generate_shift(id, lower, upper, shift.seed);
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (o[i] < lower[i] || o[i] > upper[i])
            throw BadShiftFile("shift coordinate " + std::to_string(i) + " of " + to_string(id) +
                               " lies outside the box");
    }

    const bool literal = options.literal_printed_forms;
    ShiftedObjective objective = [id, literal](std::span<const double> z) {
        return value(id, z, literal);
    };
    return BoundedProblem(to_string(id), std::move(lower), std::move(upper), std::move(o),
                          options.bias, std::move(objective));
}

std::vector<SuiteEntry> builtin_suite(std::size_t dim, std::uint64_t shift_seed) {
    std::vector<SuiteEntry> out;
    for (const auto& f : kSuite) {
        SuiteEntry e;
        e.id = f.id;
        e.dim = dim;
        e.shift.seed = shift_seed;
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<SuiteEntry> parse_suite_manifest(std::string_view json_text,
                                             const std::string& base_dir) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("suite manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("suite manifest must be a JSON object");

    const std::size_t default_dim = doc.value("dim", std::size_t{50});
    const std::uint64_t default_seed = doc.value("shift_seed", std::uint64_t{1});
    const double default_bias = doc.value("bias", 0.0);

    std::vector<SuiteEntry> out;
    auto add = [&](const json& item) {
        SuiteEntry e;
        e.dim = default_dim;
        e.shift.seed = default_seed;
        e.options.bias = default_bias;
        if (item.is_string()) {
            e.id = parse_function_id(item.get<std::string>());
        } else if (item.is_object()) {
            e.id = parse_function_id(item.at("id").get<std::string>());
            e.dim = item.value("dim", e.dim);
            e.shift.seed = item.value("shift_seed", e.shift.seed);
            e.options.bias = item.value("bias", e.options.bias);
            e.options.literal_printed_forms = item.value("literal", false);
            if (item.contains("box")) {
                const auto& box = item.at("box");
                if (!box.is_array() || box.size() != 2)
                    throw std::invalid_argument("'box' must be [lower, upper]");
                e.options.box = std::pair{box[0].get<double>(), box[1].get<double>()};
            }
            if (item.contains("shift_file")) {
                std::filesystem::path p = item.at("shift_file").get<std::string>();
                if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
                e.shift.file = p.string();
            }
        } else {
            throw std::invalid_argument("suite entries must be strings or objects");
        }
        out.push_back(std::move(e));
    };

    if (doc.contains("functions")) {
        for (const auto& item : doc.at("functions")) add(item);
    } else {
        for (const auto& f : kSuite) add(json(to_string(f.id)));
    }
    return out;
}

std::vector<SuiteEntry> load_suite_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open suite manifest '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_suite_manifest(buf.str(), dir.empty() ? "." : dir.string());
}

}  // namespace hiacor::soco
