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
#include "hiacor/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace hiacor::experiment {

std::vector<ExperimentProblem> problems_from_suite(std::span<const soco::SuiteEntry> entries) {
    std::vector<ExperimentProblem> out;
    out.reserve(entries.size());
    for (const soco::SuiteEntry& e : entries) {
        auto p = std::make_shared<const BoundedProblem>(soco::make_problem(e.id, e.dim, e.shift, e.options));
        out.push_back({soco::to_string(e.id), std::move(p)});
    }
    return out;
}

stats::SummaryTable ExperimentResult::summary(double threshold) const {
    stats::SummaryTable table;
    table.algorithm = algorithm;
    for (const FunctionResult& f : functions) {
        if (f.records.empty()) continue;
        const stats::Summary s = stats::summarize(std::span<const TrialRecord>(f.records), threshold);
        table.rows.push_back({f.function, s.avg, s.med, f.records.size()});
    }
    return table;
}

namespace {

struct Slot {
    std::optional<TrialRecord> record;
    std::vector<iacor::IterationLog> log;
    std::string failure;
};

}  // namespace

ExperimentResult run_experiment(std::span<const ExperimentProblem> problems,
                                const AlgorithmConfig& algorithm,
                                const ExperimentOptions& options) {
    if (options.runs == 0) throw std::invalid_argument("runs must be positive");
    if (algorithm.budget_multiplier == 0) throw std::invalid_argument("budget_multiplier must be positive");
    algorithm.params.validate();

    const std::size_t total = problems.size() * options.runs;
    std::vector<Slot> slots(total);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t k = next++; k < total; k = next++) {
            const ExperimentProblem& ep = problems[k / options.runs];
            const std::uint64_t seed = options.seed0 + k % options.runs;
            Slot& slot = slots[k];
            try {
                iacor::Params params = algorithm.params;
                params.termination = algorithm.budget_multiplier * ep.problem->dimension();
                iacor::RunOptions ro = algorithm.run_options;
                ro.observer = nullptr;
                ro.record_log = options.keep_logs;
                iacor::RunResult r = iacor::run(*ep.problem, params, algorithm.secondary, seed, ro);
                r.record.problem_label = ep.label;
                slot.record = std::move(r.record);
                slot.log = std::move(r.log);
            } catch (const std::exception& e) {
                slot.failure = e.what();
            } catch (...) {
                slot.failure = "unknown error";
            }
        }
    };

    const std::size_t n_threads = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(total, 1));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    ExperimentResult result;
    result.algorithm = algorithm.name;
    for (std::size_t f = 0; f < problems.size(); ++f) {
        FunctionResult fr;
        fr.function = problems[f].label;
        for (std::size_t r = 0; r < options.runs; ++r) {
            Slot& slot = slots[f * options.runs + r];
            if (slot.record) {
                fr.records.push_back(std::move(*slot.record));
                if (options.keep_logs) fr.logs.push_back(std::move(slot.log));
            } else {
                fr.failures.push_back({options.seed0 + r, std::move(slot.failure)});
            }
        }
        result.functions.push_back(std::move(fr));
    }
    return result;
}

// --- CSV -----------------------------------------------------------------------

std::string format_error(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6E", value);
    return buf;
}

void write_raw_csv(std::ostream& out, std::span<const FunctionResult> functions) {
    out << "function,seed,final_error,evals_used\n";
    for (const FunctionResult& f : functions)
        for (const TrialRecord& r : f.records)
            out << f.function << ',' << r.seed << ',' << format_error(r.final_error) << ','
                << r.evals_used << '\n';
}

void write_summary_csv(std::ostream& out, const stats::SummaryTable& table) {
    out << "function,avg_error,med_error\n";
    for (const stats::SummaryRow& r : table.rows)
        out << r.function << ',' << format_error(r.avg_error) << ',' << format_error(r.med_error) << '\n';
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(cur);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, std::size_t line_no) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ParseError("line " + std::to_string(line_no) + ": '" + text + "' is not a number");
    return v;
}

}  // namespace

stats::SummaryTable read_summary_csv(std::istream& in, std::string algorithm) {
    stats::SummaryTable table;
    table.algorithm = std::move(algorithm);
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (!header) {
            if (f.size() != 3 || f[0] != "function" || f[1] != "avg_error" || f[2] != "med_error")
                throw ParseError("line 1: expected header function,avg_error,med_error");
            header = true;
            continue;
        }
        if (f.size() != 3) throw ParseError("line " + std::to_string(line_no) + ": expected 3 fields");
        if (table.find(f[0])) throw ParseError("line " + std::to_string(line_no) + ": duplicate " + f[0]);
        table.rows.push_back({f[0], parse_double(f[1], line_no), parse_double(f[2], line_no), 0});
    }
    if (!header) throw ParseError("empty summary file");
    return table;
}

void write_wilcoxon_csv(std::ostream& out, std::span<const WilcoxonRow> rows) {
    out << "pair,metric,wp,wn,n,p\n";
    for (const WilcoxonRow& r : rows)
        out << r.pair << ',' << stats::to_string(r.metric) << ',' << r.result.w_plus << ','
            << r.result.w_minus << ',' << r.result.n << ',' << format_error(r.result.p_value) << '\n';
}

void write_ranking_csv(std::ostream& out, std::span<const stats::RankEntry> ranking) {
    out << "rank,algorithm,score,zero_median_count\n";
    for (const stats::RankEntry& e : ranking)
        out << e.rank << ',' << e.algorithm << ',' << format_error(e.score) << ',' << e.zero_median_count << '\n';
}

}  // namespace hiacor::experiment
