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
#ifndef HIACOR_CLI_HPP
#define HIACOR_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hiacor::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kConfigError = 2 };

/// Environment variable consulted when --out-dir is not given.
inline constexpr const char* kOutDirEnv = "ACOR_BENCH_OUT";
inline constexpr const char* kDefaultOutDir = "results";

struct RunConfig {
    std::string suite = "soco";   ///< "soco" or a JSON manifest path
    std::size_t dims = 50;
    std::size_t runs = 25;
    std::uint64_t budget_multiplier = 5000;
    double threshold = 1e-14;
    std::string searcher = "bfgs";  ///< mtsls1 | none | bfgs | neldermead
    std::optional<double> p_nlopt;  ///< default 0.6, or 0 without a secondary searcher
    std::size_t thresh_localsearch = 10;
    std::uint64_t seed = 0;
    std::uint64_t shift_seed = 1;
    std::vector<std::string> functions;  ///< subset of the suite; empty means all
    std::string mtsls1_steps = "seeded"; ///< seeded | persistent
    std::optional<std::string> out_dir;
    std::optional<std::string> name;     ///< algorithm label used in file names
    std::size_t threads = 0;             ///< 0: available parallelism
    bool log_runs = false;
};

/// Empty when valid; otherwise one line naming the offending flag.
std::string validate(const RunConfig& cfg);

/// Label used for output files: --name, else "hiacor-<searcher>".
std::string algorithm_name(const RunConfig& cfg);

struct CompareConfig {
    std::string a;
    std::string b;
    std::string metric = "avg";  ///< avg | med | both
    std::size_t exact_max_n = 12;
    bool continuity_correction = true;
    std::optional<std::string> out_dir;
};

struct RankConfig {
    std::vector<std::string> summaries;
    double threshold = 1e-14;
    std::optional<std::string> out_dir;
};

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_rank(const RankConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Algorithm label of a summary file: its stem without a "summary_" prefix.
std::string label_from_path(const std::string& path);

}  // namespace hiacor::cli

#endif  // HIACOR_CLI_HPP
