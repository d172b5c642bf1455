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
#ifndef HIACOR_STATS_HPP
#define HIACOR_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hiacor/trial.hpp"

namespace hiacor::stats {

class EmptyInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class MismatchedFunctionSets : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Errors below this are reported as 0 on the SOCO suite.
inline constexpr double kSocoThreshold = 1e-14;

/// `error` if it is at least `threshold`, otherwise 0.
double apply_threshold(double error, double threshold) noexcept;

/// Median; an even count gives the mean of the two central values.
double median(std::vector<double> values);

struct Summary {
    double avg = 0.0;
    double med = 0.0;
};

/// Thresholds every error, then averages. Throws EmptyInput on no data and
/// std::invalid_argument for a non-positive threshold.
Summary summarize(std::span<const double> errors, double threshold = kSocoThreshold);
Summary summarize(std::span<const TrialRecord> runs, double threshold = kSocoThreshold);

// --- Wilcoxon signed-rank test -------------------------------------------

struct WilcoxonOptions {
    /// The exact null distribution is used up to this many nonzero
    /// differences, provided there are no tied magnitudes.
    std::size_t exact_max_n = 12;
    /// 0.5 continuity correction in the normal approximation.
    bool continuity_correction = true;
};

struct WilcoxonResult {
    double w_plus = 0.0;
    double w_minus = 0.0;
    std::size_t n = 0;     ///< nonzero paired differences
    double p_value = 1.0;  ///< two-sided
    bool exact = false;

    friend bool operator==(const WilcoxonResult&, const WilcoxonResult&) = default;
};

/**
 * Paired test on d_i = a_i - b_i. Zero differences are dropped, tied
 * magnitudes get mean ranks. W+ collects the ranks of positive d_i.
 * Identical inputs give (0, 0, 0, 1). Throws std::invalid_argument on
 * length mismatch or empty input.
 */
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    const WilcoxonOptions& options = {});

/// Two-sided exact p for a tie-free sample of size n with statistic
/// min(W+, W-) == t: 2 * #{sign patterns with W+ <= t} / 2^n, capped at 1.
double exact_signed_rank_p(std::size_t n, double t);

// --- Tables and ranking ----------------------------------------------------

enum class Metric { Avg, Med };

std::string_view to_string(Metric m);
/// "avg"/"average" or "med"/"median"; throws std::invalid_argument.
Metric parse_metric(std::string_view text);

struct SummaryRow {
    std::string function;
    double avg_error = 0.0;
    double med_error = 0.0;
    std::size_t runs = 0;

    double get(Metric m) const noexcept { return m == Metric::Avg ? avg_error : med_error; }
    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

/// One algorithm's per-function statistics, rows in suite order.
struct SummaryTable {
    std::string algorithm;
    std::vector<SummaryRow> rows;

    const SummaryRow* find(std::string_view function) const noexcept;
    friend bool operator==(const SummaryTable&, const SummaryTable&) = default;
};

/// Number of functions whose statistic is 0 after thresholding.
std::size_t count_optima(const SummaryTable& table, Metric metric,
                         double threshold = kSocoThreshold);

/// Pairs the two tables by function name (order of `a`) and runs the test
/// on the chosen statistic. Throws MismatchedFunctionSets.
WilcoxonResult compare_tables(const SummaryTable& a, const SummaryTable& b, Metric metric,
                              const WilcoxonOptions& options = {});

struct RankEntry {
    std::size_t rank = 0;
    std::string algorithm;
    double score = 0.0;               ///< sum over functions of avg + med
    std::size_t zero_median_count = 0;

    friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

/**
 * Ascending by score; equal scores share the smaller rank and the next rank
 * is skipped (1, 1, 3). Ties are listed by algorithm name, so the result
 * does not depend on input order. Throws MismatchedFunctionSets when the
 * tables cover different functions, std::invalid_argument on duplicate
 * algorithm names.
 */
std::vector<RankEntry> rank_algorithms(std::span<const SummaryTable> tables,
                                       double threshold = kSocoThreshold);

}  // namespace hiacor::stats

#endif  // HIACOR_STATS_HPP
