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
#ifndef HIACOR_LOCAL_SEARCH_HPP
#define HIACOR_LOCAL_SEARCH_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hiacor/problem.hpp"

namespace hiacor::ls {

enum class SearcherKind { Mtsls1, QuasiNewton, NelderMead };

std::string_view to_string(SearcherKind kind);

struct SearchConfig {
    /// Iterations per call. Evaluations per call are capped at (2D+1)*call_cap.
    std::uint64_t call_cap = 160;
    double x_tol = 1e-7;  ///< relative and absolute
    double f_tol = 1e-15; ///< relative and absolute
    double gradient_step = kDefaultGradientStep;
};

/// (2*dim + 1) * call_cap: the most evaluations one call may consume.
std::uint64_t evaluation_cap(std::size_t dim, std::uint64_t call_cap) noexcept;

struct SearchResult {
    std::vector<double> x;
    double value = 0.0;
    bool exhausted = false;       ///< stopped by the global budget or the call cap
    std::uint64_t evaluations = 0;
    std::uint64_t iterations = 0;
};

/// Best point seen by a searcher during one call.
struct Incumbent {
    std::vector<double> x;
    double value = 0.0;

    void offer(std::span<const double> candidate, double v) {
        if (v < value) {
            x.assign(candidate.begin(), candidate.end());
            value = v;
        }
    }
};

/**
 * Common interface of the local searchers.
 *
 * search() opens a LocalCallScope of evaluation_cap(D, call_cap) evaluations,
 * runs the concrete method and always returns the best point seen, which is
 * never worse than the start. Budget exhaustion is reported through
 * SearchResult::exhausted instead of an exception.
 */
class LocalSearcher {
public:
    explicit LocalSearcher(SearchConfig config) : config_(config) {}
    virtual ~LocalSearcher() = default;

    virtual SearcherKind kind() const noexcept = 0;
    const SearchConfig& config() const noexcept { return config_; }

    /// `f0` is the known value at x0; when absent it is evaluated (and charged).
    SearchResult search(BudgetedEvaluator& ev, std::span<const double> x0,
                        std::optional<double> f0 = std::nullopt);

protected:
    /// Runs the method; must keep `best` and `iterations` up to date because
    /// they are returned as-is if an evaluation throws BudgetExhausted.
    virtual void run(BudgetedEvaluator& ev, Incumbent& best, std::uint64_t& iterations) = 0;

private:
    SearchConfig config_;
};

// --- Mtsls1 --------------------------------------------------------------

struct Mtsls1State {
    std::vector<double> step;      ///< current per-dimension search range s
    std::vector<double> initial;   ///< 0.4 * (upper - lower)
    bool improved_last_pass = false;
    double min_step = 1e-14;
    /// Keep halving below min_step while the step can still move the
    /// coordinate by at least one ulp; see reset_exhausted_steps().
    bool resolution_aware_reset = true;
};

Mtsls1State make_mtsls1_state(const BoundedProblem& problem);

struct Mtsls1PassResult {
    std::vector<double> x;
    double value = 0.0;
    bool improved = false;
    bool exhausted = false;
};

/**
 * One Mtsls1 sweep over all dimensions in order.
 *
 * For dimension i the point moves to x_i + s_i; the move is kept if it
 * lowers f and the sweep continues from there. Otherwise x_i is restored
 * and x_i - 0.5 s_i is tried, again kept only on a decrease. Candidates are
 * clamped to the box; a candidate identical to the current coordinate is
 * skipped without an evaluation. Sets state.improved_last_pass.
 */
Mtsls1PassResult mtsls1_pass(BudgetedEvaluator& ev, std::span<const double> x, double fx,
                             Mtsls1State& state);

/// Halves every step; used after a sweep without improvement.
void halve_steps(Mtsls1State& state);

/// Resets to the initial range every step that has dropped below the floor.
void reset_exhausted_steps(Mtsls1State& state, std::span<const double> x);

class Mtsls1Searcher final : public LocalSearcher {
public:
    explicit Mtsls1Searcher(SearchConfig config = {}) : LocalSearcher(config) {}
    SearcherKind kind() const noexcept override { return SearcherKind::Mtsls1; }

    /// Step state persists across calls; it is (re)built for a new problem.
    Mtsls1State& state() noexcept { return state_; }
    void reset_state() { state_ = {}; }

    /// Builds the state for `problem` unless it already matches.
    void prepare(const BoundedProblem& problem);

    /// Replaces the current steps before the next call. Non-positive or
    /// non-finite entries fall back to the initial range.
    void seed_steps(const BoundedProblem& problem, std::span<const double> steps);

protected:
    void run(BudgetedEvaluator& ev, Incumbent& best, std::uint64_t& iterations) override;

private:
    Mtsls1State state_;
};

// --- Quasi-Newton (BFGS with finite-difference gradients) ----------------

struct LineSearchConfig {
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 20;
};

class QuasiNewtonSearcher final : public LocalSearcher {
public:
    explicit QuasiNewtonSearcher(SearchConfig config = {}, LineSearchConfig line = {})
        : LocalSearcher(config), line_(line) {}
    SearcherKind kind() const noexcept override { return SearcherKind::QuasiNewton; }

    /// Direction chosen at the first iteration of the last call, kept for
    /// the descent-direction property checks.
    const std::vector<double>& first_direction() const noexcept { return first_direction_; }

protected:
    void run(BudgetedEvaluator& ev, Incumbent& best, std::uint64_t& iterations) override;

private:
    LineSearchConfig line_;
    std::vector<double> first_direction_;
};

// --- Nelder-Mead ----------------------------------------------------------

class NelderMeadSearcher final : public LocalSearcher {
public:
    explicit NelderMeadSearcher(SearchConfig config = {}) : LocalSearcher(config) {}
    SearcherKind kind() const noexcept override { return SearcherKind::NelderMead; }

protected:
    void run(BudgetedEvaluator& ev, Incumbent& best, std::uint64_t& iterations) override;
};

std::unique_ptr<LocalSearcher> make_searcher(SearcherKind kind, SearchConfig config = {});

}  // namespace hiacor::ls

#endif  // HIACOR_LOCAL_SEARCH_HPP
