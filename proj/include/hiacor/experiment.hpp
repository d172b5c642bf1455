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
#ifndef HIACOR_EXPERIMENT_HPP
#define HIACOR_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hiacor/iacor.hpp"
#include "hiacor/soco.hpp"
#include "hiacor/stats.hpp"
#include "hiacor/trial.hpp"

namespace hiacor::experiment {

/// A named problem; shared read-only across worker threads.
struct ExperimentProblem {
    std::string label;
    std::shared_ptr<const BoundedProblem> problem;
};

std::vector<ExperimentProblem> problems_from_suite(std::span<const soco::SuiteEntry> entries);

struct AlgorithmConfig {
    std::string name = "hiacor";
    iacor::Params params;                   ///< params.termination is ignored
    std::uint64_t budget_multiplier = 5000; ///< budget = multiplier * D
    std::optional<ls::SearcherKind> secondary = ls::SearcherKind::QuasiNewton;
    iacor::RunOptions run_options;          ///< observer and record_log are overridden
};

struct TrialFailure {
    std::uint64_t seed = 0;
    std::string message;
};

struct FunctionResult {
    std::string function;
    std::vector<TrialRecord> records;  ///< successful trials, ascending seed
    std::vector<TrialFailure> failures;
    /// Per-record run logs, parallel to `records`; empty unless requested.
    std::vector<std::vector<iacor::IterationLog>> logs;
};

struct ExperimentResult {
    std::string algorithm;
    std::vector<FunctionResult> functions;  ///< input order

    /// Functions with no successful trial are left out.
    stats::SummaryTable summary(double threshold = stats::kSocoThreshold) const;
};

struct ExperimentOptions {
    std::size_t runs = 25;
    std::uint64_t seed0 = 0;  ///< trial k uses seed0 + k
    std::size_t threads = 1;
    bool keep_logs = false;
};

/**
 * Runs `runs` trials on every problem. Trials execute on a pool of
 * options.threads workers but each one owns its generator, and results are
 * stored by (function, seed) slot, so the output does not depend on the
 * thread count. An exception inside a trial becomes a TrialFailure.
 */
ExperimentResult run_experiment(std::span<const ExperimentProblem> problems,
                                const AlgorithmConfig& algorithm,
                                const ExperimentOptions& options);

// --- CSV I/O -----------------------------------------------------------------

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "%.6E".
std::string format_error(double value);

/// Header `function,seed,final_error,evals_used`, one row per record.
void write_raw_csv(std::ostream& out, std::span<const FunctionResult> functions);

/// Header `function,avg_error,med_error`.
void write_summary_csv(std::ostream& out, const stats::SummaryTable& table);
stats::SummaryTable read_summary_csv(std::istream& in, std::string algorithm);

/// Header `pair,metric,wp,wn,n,p`.
struct WilcoxonRow {
    std::string pair;
    stats::Metric metric = stats::Metric::Avg;
    stats::WilcoxonResult result;
};
void write_wilcoxon_csv(std::ostream& out, std::span<const WilcoxonRow> rows);

/// Header `rank,algorithm,score,zero_median_count`.
void write_ranking_csv(std::ostream& out, std::span<const stats::RankEntry> ranking);

}  // namespace hiacor::experiment

#endif  // HIACOR_EXPERIMENT_HPP
