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
#ifndef HIACOR_IACOR_HPP
#define HIACOR_IACOR_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "hiacor/local_search.hpp"
#include "hiacor/problem.hpp"
#include "hiacor/trial.hpp"

/// Incremental ant colony optimization for continuous domains with a
/// probabilistically switched hybrid local search.
namespace hiacor::iacor {

struct Params {
    double p = 0.4;                    ///< probability of sampling around the best solution
    double zeta = 0.85;                ///< kernel width multiplier
    std::size_t alpha0 = 14;           ///< initial archive size
    std::size_t gamma = 5;             ///< growth interval, in iterations
    std::size_t alpha_max = 50;
    double tau = 1e-10;                ///< improvement threshold
    std::size_t fail_max = 4;
    std::size_t siter_max = 20;        ///< stagnant iterations before a restart
    double p_nlopt = 0.6;              ///< probability of picking the secondary searcher
    std::size_t thresh_localsearch = 10;
    std::uint64_t termination = 0;     ///< evaluation budget

    /// Throws std::invalid_argument naming the first bad field.
    void validate() const;
};

struct ArchiveEntry {
    std::vector<double> x;
    double value = 0.0;
    std::size_t fail_count = 0;
};

/// Solution archive kept sorted ascending by value; entry 0 is the best.
/// Sorting is stable, so equal values keep insertion order.
class Archive {
public:
    Archive() = default;
    explicit Archive(std::vector<ArchiveEntry> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t dimension() const noexcept { return empty() ? 0 : entries_.front().x.size(); }

    ArchiveEntry& operator[](std::size_t i) { return entries_[i]; }
    const ArchiveEntry& operator[](std::size_t i) const { return entries_[i]; }
    const ArchiveEntry& best() const { return entries_.front(); }
    const std::vector<ArchiveEntry>& entries() const noexcept { return entries_; }

    /// Inserts after every entry with an equal or smaller value.
    void insert(ArchiveEntry entry);
    void sort();
    bool is_sorted() const;

private:
    std::vector<ArchiveEntry> entries_;
};

/// Per-trial random source. All draws of a run go through one instance.
class Random {
public:
    explicit Random(std::uint64_t seed);

    double uniform();  ///< [0, 1)
    double normal();
    std::size_t index(std::size_t n);  ///< uniform in [0, n)
    std::vector<double> uniform_point(const BoundedProblem& problem);

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

enum class Choice { Mtsls1, Secondary };

std::string_view to_string(Choice c);

/// Chooses the local searcher for each dispatch.
struct HybridPolicy {
    double p_nlopt = 0.6;
    std::size_t ctr_localsearch = 0;
    std::size_t thresh = 10;
    Choice last_used = Choice::Mtsls1;
    bool last_forced = false;  ///< the previous selection was a stagnation switch

    /**
     * p_nlopt == 0 selects Mtsls1 and p_nlopt == 1 the secondary searcher.
     * Otherwise, below the stagnation threshold the secondary is picked iff
     * u < p_nlopt; at or above it the choice is the complement of the last
     * one. Updates last_used.
     */
    Choice select(double u);

    /// Counter bookkeeping after a local search: reset on a global
    /// improvement or after a forced switch, increment otherwise.
    void record_outcome(bool improved_global);
};

/// Kernel width of archive entry `i` in every dimension:
/// zeta * sum_{e != i} |x_e[j] - x_i[j]| / (size - 1), zero for one entry.
std::vector<double> kernel_widths(const Archive& archive, std::size_t i, double zeta);

/// Gaussian draw around entry `i`, clamped to the box.
std::vector<double> sample_around(const Archive& archive, std::size_t i, double zeta,
                                  const BoundedProblem& problem, Random& rng);

inline std::vector<double> sample_best_gaussian(const Archive& archive, double zeta,
                                                const BoundedProblem& problem, Random& rng) {
    return sample_around(archive, 0, zeta, problem, rng);
}

/// One Gaussian draw per entry; an entry is replaced when its draw is better.
/// Re-sorts afterwards. BudgetExhausted propagates once the archive has been
/// re-sorted, keeping the substitutions made so far. Returns the number of
/// substitutions.
std::size_t explore_archive(Archive& archive, double zeta, BudgetedEvaluator& ev, Random& rng);

/// Per-dimension |x_j - x_i| to a uniformly drawn other entry j != i; used
/// as the opening Mtsls1 steps of a call started from entry i. Zero entries
/// (coinciding coordinates) fall back to the initial range in the searcher.
std::vector<double> partner_steps(const Archive& archive, std::size_t i, Random& rng);

/// (1 - r_j) * s_new_j + r_j * s_best_j per coordinate, the move of a fresh
/// solution toward the best one.
std::vector<double> blend_toward_best(std::span<const double> s_new,
                                      std::span<const double> s_best,
                                      std::span<const double> r);

/// Adds one solution when `iteration` is a multiple of gamma and the
/// archive is below alpha_max. Returns false (no growth) when the guard
/// fails or the budget is exhausted.
bool grow_archive(Archive& archive, const Params& params, std::size_t iteration,
                  BudgetedEvaluator& ev, Random& rng);

/// When ctr_global == siter_max, redraws every entry but the best, resets
/// all failure counters and ctr_global. On budget exhaustion the entries
/// redrawn so far are kept. Returns whether a restart happened.
bool restart_if_stagnant(Archive& archive, std::size_t& ctr_global, std::size_t siter_max,
                         BudgetedEvaluator& ev, Random& rng);

/// One outer iteration, as written to the run log.
struct IterationLog {
    std::size_t iteration = 0;
    std::uint64_t evals = 0;
    double best_error = 0.0;
    std::optional<Choice> searcher;   ///< nullopt: no local search this iteration
    bool forced_switch = false;
    std::size_t ctr_localsearch = 0;  ///< value seen at dispatch
    std::uint64_t ls_evals = 0;
    std::size_t archive_size = 0;
    bool restarted = false;
};

/// Writes one JSON object per line.
void write_run_log(std::ostream& out, std::span<const IterationLog> log);

struct RunOptions {
    ls::SearchConfig search;                 ///< shared by both searchers
    bool record_log = false;
    BudgetedEvaluator::Observer observer;    ///< sees every evaluated point
    /// Overrides the Mtsls1 step-floor rule (see Mtsls1State).
    std::optional<bool> resolution_aware_reset;
    /// Open every Mtsls1 call with partner_steps() from the start entry.
    /// When false the steps carry over between calls unchanged.
    bool archive_seeded_steps = true;
};

struct RunResult {
    TrialRecord record;
    std::vector<double> best_x;
    double best_value = 0.0;
    std::vector<IterationLog> log;
    Archive archive;
};

/**
 * Runs hybrid IACO_R on `problem` with a budget of params.termination
 * evaluations (at least alpha0, so the initial archive is always complete).
 *
 * `secondary` is the searcher mixed with Mtsls1; it may be empty only when
 * p_nlopt == 0. Deterministic for a fixed seed.
 */
RunResult run(const BoundedProblem& problem, const Params& params,
              std::optional<ls::SearcherKind> secondary, std::uint64_t seed,
              const RunOptions& options = {});

}  // namespace hiacor::iacor

#endif  // HIACOR_IACOR_HPP
