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
#include "hiacor/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hiacor {

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t got)
    : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                            ", got " + std::to_string(got)) {}

BoundedProblem::BoundedProblem(std::string label, std::vector<double> lower,
                               std::vector<double> upper, std::vector<double> shift, double bias,
                               ShiftedObjective objective)
    : label_(std::move(label)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      shift_(std::move(shift)),
      bias_(bias),
      objective_(std::move(objective)) {
    const std::size_t d = lower_.size();
    if (d == 0) throw std::invalid_argument("problem dimension must be positive");
    if (upper_.size() != d) throw DimensionMismatch(d, upper_.size());
    if (shift_.size() != d) throw DimensionMismatch(d, shift_.size());
    for (std::size_t i = 0; i < d; ++i) {
        if (!(lower_[i] < upper_[i]))
            throw std::invalid_argument("empty box in coordinate " + std::to_string(i));
        if (shift_[i] < lower_[i] || shift_[i] > upper_[i])
            throw std::invalid_argument("shift outside the box in coordinate " +
                                        std::to_string(i));
    }
    if (!objective_) throw std::invalid_argument("problem objective is empty");
}

double BoundedProblem::operator()(std::span<const double> x) const {
    const std::size_t d = dimension();
    if (x.size() != d) throw DimensionMismatch(d, x.size());
    // Thread-local scratch keeps concurrent trials allocation-free.
    thread_local std::vector<double> z;
    z.resize(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = x[i] - shift_[i];
    return objective_(std::span<const double>(z.data(), d)) + bias_;
}

bool BoundedProblem::contains(std::span<const double> x) const noexcept {
    if (x.size() != dimension()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
    return true;
}

double BoundedProblem::error(double value) const noexcept {
    const double e = value - optimum_value();
    return e > 0.0 ? e : 0.0;
}

std::vector<double> clamp_to_bounds(std::span<const double> x, const BoundedProblem& problem) {
    std::vector<double> out(x.begin(), x.end());
    clamp_in_place(out, problem);
    return out;
}

void clamp_in_place(std::span<double> x, const BoundedProblem& problem) {
    if (x.size() != problem.dimension()) throw DimensionMismatch(problem.dimension(), x.size());
    const auto& lo = problem.lower();
    const auto& hi = problem.upper();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
}

BudgetedEvaluator::BudgetedEvaluator(const BoundedProblem& problem, std::uint64_t total_cap,
                                     std::uint64_t local_call_cap)
    : problem_(&problem), total_cap_(total_cap), local_call_cap_(local_call_cap) {}

std::uint64_t BudgetedEvaluator::remaining() const noexcept {
    const std::uint64_t limit = std::min(total_cap_, local_limit_);
    return used_ >= limit ? 0 : limit - used_;
}

double BudgetedEvaluator::operator()(std::span<const double> x) {
    if (x.size() != problem_->dimension()) throw DimensionMismatch(problem_->dimension(), x.size());
    if (used_ >= total_cap_) throw BudgetExhausted(false);
    if (used_ >= local_limit_) throw BudgetExhausted(true);
    const double value = (*problem_)(x);
    ++used_;
    if (value < best_value_ || best_x_.empty()) {
        const bool strict = value < best_value_;
        best_x_.assign(x.begin(), x.end());
        best_value_ = value;
        if (strict && improvement_hook_) improvement_hook_(used_, value);
    }
    if (observer_) observer_(x, value);
    return value;
}

LocalCallScope::LocalCallScope(BudgetedEvaluator& ev, std::uint64_t max_evaluations)
    : ev_(ev), start_(ev.used_), saved_limit_(ev.local_limit_) {
    const std::uint64_t room = std::numeric_limits<std::uint64_t>::max() - start_;
    const std::uint64_t limit = start_ + std::min(max_evaluations, room);
    ev_.local_limit_ = std::min(saved_limit_, limit);
}

LocalCallScope::~LocalCallScope() { ev_.local_limit_ = saved_limit_; }

std::vector<double> central_difference_gradient(BudgetedEvaluator& ev, std::span<const double> x,
                                                double h_rel) {
    const BoundedProblem& problem = ev.problem();
    const std::size_t d = problem.dimension();
    if (x.size() != d) throw DimensionMismatch(d, x.size());
    if (ev.remaining() < 2 * d) {
        const bool local = ev.total_cap() - std::min(ev.used(), ev.total_cap()) >= 2 * d;
        throw BudgetExhausted(local);
    }
    const auto& lo = problem.lower();
    const auto& hi = problem.upper();
    std::vector<double> probe(x.begin(), x.end());
    std::vector<double> grad(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        const double h = gradient_step(x[i], h_rel);
        double a = x[i] - h;
        double b = x[i] + h;
        // One-sided stencil at the boundary, still two evaluations.
        if (b > hi[i]) {
            b = x[i];
        } else if (a < lo[i]) {
            a = x[i];
        }
        a = std::max(a, lo[i]);
        b = std::min(b, hi[i]);
        probe[i] = b;
        const double fb = ev(probe);
        probe[i] = a;
        const double fa = ev(probe);
        probe[i] = x[i];
        grad[i] = b > a ? (fb - fa) / (b - a) : 0.0;
    }
    return grad;
}

std::vector<double> read_shift_file(const std::string& path, std::size_t expected_dim) {
    std::ifstream in(path);
    if (!in) throw BadShiftFile("cannot open shift file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw BadShiftFile("shift file '" + path + "' is empty");
    std::size_t dim = 0;
    {
        std::istringstream head(line);
        long long d = -1;
        std::string trailing;
        if (!(head >> d) || d <= 0 || (head >> trailing))
            throw BadShiftFile("shift file '" + path + "': first line must be a positive integer");
        dim = static_cast<std::size_t>(d);
    }
    if (dim != expected_dim)
        throw BadShiftFile("shift file '" + path + "' has D=" + std::to_string(dim) +
                           ", expected " + std::to_string(expected_dim));
    std::vector<double> values;
    values.reserve(dim);
    std::string token;
    while (in >> token) {
        std::size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &consumed);
        } catch (const std::exception&) {
            consumed = 0;
        }
        if (consumed != token.size() || !std::isfinite(v))
            throw BadShiftFile("shift file '" + path + "': unparseable value '" + token + "'");
        values.push_back(v);
    }
    if (values.size() != dim)
        throw BadShiftFile("shift file '" + path + "' has " + std::to_string(values.size()) +
                           " values, expected " + std::to_string(dim));
    return values;
}

void write_shift_file(const std::string& path, std::span<const double> shift) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write shift file '" + path + "'");
    out << shift.size() << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < shift.size(); ++i) out << (i ? " " : "") << shift[i];
    out << '\n';
}

}  // namespace hiacor
