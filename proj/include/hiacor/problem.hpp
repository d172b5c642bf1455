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
#ifndef HIACOR_PROBLEM_HPP
#define HIACOR_PROBLEM_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiacor {

/// Raised when an evaluation is attempted with no budget left, either the
/// trial-wide cap or the cap of the enclosing local-search call.
class BudgetExhausted : public std::runtime_error {
public:
    explicit BudgetExhausted(bool local_cap)
        : std::runtime_error(local_cap ? "local-search evaluation cap reached"
                                       : "evaluation budget exhausted"),
          local_cap_(local_cap) {}

    /// True when the per-call cap (not the global budget) was hit.
    bool local_cap() const noexcept { return local_cap_; }

private:
    bool local_cap_;
};

class DimensionMismatch : public std::invalid_argument {
public:
    DimensionMismatch(std::size_t expected, std::size_t got);
};

class BadShiftFile : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Objective expressed on shifted coordinates z = x - o.
using ShiftedObjective = std::function<double(std::span<const double> z)>;

/**
 * \brief A box-constrained objective with a known optimum.
 *
 * The objective is stored on shifted coordinates; the problem applies the
 * shift and adds the bias. Instances are immutable and may be shared across
 * threads.
 */
class BoundedProblem {
public:
    BoundedProblem(std::string label, std::vector<double> lower, std::vector<double> upper,
                   std::vector<double> shift, double bias, ShiftedObjective objective);

    std::size_t dimension() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }
    const std::vector<double>& shift() const noexcept { return shift_; }
    double bias() const noexcept { return bias_; }
    const std::string& label() const noexcept { return label_; }

    /// f(x*), the value attained at x = shift.
    double optimum_value() const noexcept { return bias_; }

    /// Raw objective value; does not touch any budget.
    double operator()(std::span<const double> x) const;

    bool contains(std::span<const double> x) const noexcept;

    /// f(x) - f(x*), floored at zero.
    double error(double value) const noexcept;

private:
    std::string label_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> shift_;
    double bias_;
    ShiftedObjective objective_;
};

/// Projects x onto the box of `problem`. Idempotent.
std::vector<double> clamp_to_bounds(std::span<const double> x, const BoundedProblem& problem);
void clamp_in_place(std::span<double> x, const BoundedProblem& problem);

/**
 * \brief Counting wrapper around a problem.
 *
 * Every call to the objective goes through operator(), which charges exactly
 * one evaluation. The evaluator is single-owner state: one per trial.
 *
 * A local-search call may open a LocalCallScope that adds a tighter cap on
 * top of the global one; hitting either throws BudgetExhausted without
 * calling the objective.
 */
class BudgetedEvaluator {
public:
    using Observer = std::function<void(std::span<const double> x, double value)>;

    static constexpr std::uint64_t kDefaultLocalCallCap = 160;

    BudgetedEvaluator(const BoundedProblem& problem, std::uint64_t total_cap,
                      std::uint64_t local_call_cap = kDefaultLocalCallCap);

    double operator()(std::span<const double> x);

    const BoundedProblem& problem() const noexcept { return *problem_; }
    std::size_t dimension() const noexcept { return problem_->dimension(); }
    std::uint64_t used() const noexcept { return used_; }
    std::uint64_t total_cap() const noexcept { return total_cap_; }
    std::uint64_t local_call_cap() const noexcept { return local_call_cap_; }

    /// Evaluations left before either the global or the active local cap.
    std::uint64_t remaining() const noexcept;
    bool exhausted() const noexcept { return used_ >= total_cap_; }

    bool has_best() const noexcept { return !best_x_.empty(); }
    const std::vector<double>& best_x() const noexcept { return best_x_; }
    double best_value() const noexcept { return best_value_; }

    /// Called after every successful evaluation. Used for instrumentation.
    void set_observer(Observer observer) { observer_ = std::move(observer); }

    /// Called whenever best_seen strictly improves: (evaluations used, value).
    void set_improvement_hook(std::function<void(std::uint64_t, double)> hook) {
        improvement_hook_ = std::move(hook);
    }

private:
    friend class LocalCallScope;

    const BoundedProblem* problem_;
    std::uint64_t total_cap_;
    std::uint64_t local_call_cap_;
    std::uint64_t used_ = 0;
    std::uint64_t local_limit_ = std::numeric_limits<std::uint64_t>::max();
    std::vector<double> best_x_;
    double best_value_ = std::numeric_limits<double>::infinity();
    Observer observer_;
    std::function<void(std::uint64_t, double)> improvement_hook_;
};

/// RAII guard limiting the evaluations of one local-search call. Scopes nest;
/// the innermost (tightest) limit wins and the previous one is restored.
class LocalCallScope {
public:
    LocalCallScope(BudgetedEvaluator& ev, std::uint64_t max_evaluations);
    ~LocalCallScope();
    LocalCallScope(const LocalCallScope&) = delete;
    LocalCallScope& operator=(const LocalCallScope&) = delete;

    std::uint64_t consumed() const noexcept { return ev_.used() - start_; }

private:
    BudgetedEvaluator& ev_;
    std::uint64_t start_;
    std::uint64_t saved_limit_;
};

/// Per-coordinate step used by the finite-difference gradient.
inline double gradient_step(double xi, double h_rel) noexcept {
    return h_rel * (xi < 0 ? (-xi > 1.0 ? -xi : 1.0) : (xi > 1.0 ? xi : 1.0));
}

inline constexpr double kDefaultGradientStep = 1e-6;

/**
 * Central-difference gradient with step h_i = h_rel * max(1, |x_i|).
 *
 * Coordinates whose stencil would leave the box fall back to a one-sided
 * difference that still evaluates exactly two points, so the call always
 * consumes 2*D evaluations. Throws BudgetExhausted up front if fewer than
 * 2*D evaluations remain; no partial gradient is ever produced.
 */
std::vector<double> central_difference_gradient(BudgetedEvaluator& ev, std::span<const double> x,
                                                double h_rel = kDefaultGradientStep);

/// Reads a shift file: first line D, second line D reals.
std::vector<double> read_shift_file(const std::string& path, std::size_t expected_dim);
void write_shift_file(const std::string& path, std::span<const double> shift);

}  // namespace hiacor

#endif  // HIACOR_PROBLEM_HPP
