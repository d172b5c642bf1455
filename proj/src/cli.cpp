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
#include "hiacor/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "hiacor/experiment.hpp"
#include "hiacor/soco.hpp"
#include "hiacor/stats.hpp"

namespace fs = std::filesystem;

namespace hiacor::cli {

namespace {

/// A failure that maps to an exit code, with a one-line message.
struct CliError {
    int code;
    std::string message;
};

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

int report(std::ostream& err, const CliError& e) {
    err << "error: " << one_line(e.message) << '\n';
    return e.code;
}

std::string resolve_out_dir(const std::optional<std::string>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return kDefaultOutDir;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw CliError{kIoError, "cannot create output directory '" + dir + "'"};
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw CliError{kIoError, "cannot open '" + path.string() + "' for writing"};
    writer(f);
    f.flush();
    if (!f) throw CliError{kIoError, "write to '" + path.string() + "' failed"};
}

bool no_secondary(const std::string& searcher) { return searcher == "mtsls1" || searcher == "none"; }

std::optional<ls::SearcherKind> secondary_kind(const std::string& searcher) {
    if (searcher == "bfgs") return ls::SearcherKind::QuasiNewton;
    if (searcher == "neldermead") return ls::SearcherKind::NelderMead;
    return std::nullopt;
}

double effective_p_nlopt(const RunConfig& cfg) {
    if (cfg.p_nlopt) return *cfg.p_nlopt;
    return no_secondary(cfg.searcher) ? 0.0 : 0.6;
}

std::size_t effective_threads(const RunConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<soco::SuiteEntry> load_suite(const RunConfig& cfg) {
    std::vector<soco::SuiteEntry> suite;
    if (cfg.suite == "soco") {
        suite = soco::builtin_suite(cfg.dims, cfg.shift_seed);
    } else {
        if (!fs::exists(cfg.suite))
            throw CliError{kConfigError, "--suite: '" + cfg.suite + "' is neither 'soco' nor an existing file"};
        try {
            suite = soco::load_suite_manifest(cfg.suite);
        } catch (const std::invalid_argument& e) {
            throw CliError{kConfigError, std::string("--suite: ") + e.what()};
        } catch (const std::exception& e) {
            throw CliError{kIoError, std::string("--suite: ") + e.what()};
        }
    }
    if (!cfg.functions.empty()) {
        std::vector<soco::FunctionId> wanted;
        for (const std::string& f : cfg.functions) {
            try {
                wanted.push_back(soco::parse_function_id(f));
            } catch (const std::exception& e) {
                throw CliError{kConfigError, std::string("--functions: ") + e.what()};
            }
        }
        std::erase_if(suite, [&](const soco::SuiteEntry& e) {
            return std::find(wanted.begin(), wanted.end(), e.id) == wanted.end();
        });
        if (suite.empty()) throw CliError{kConfigError, "--functions: no listed function is in the suite"};
    }
    return suite;
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["suite"] = cfg.suite;
    j["dims"] = cfg.dims;
    j["runs"] = cfg.runs;
    j["budget_multiplier"] = cfg.budget_multiplier;
    j["threshold"] = cfg.threshold;
    j["searcher"] = cfg.searcher;
    j["p_nlopt"] = effective_p_nlopt(cfg);
    j["thresh_localsearch"] = cfg.thresh_localsearch;
    j["seed"] = cfg.seed;
    j["shift_seed"] = cfg.shift_seed;
    j["functions"] = cfg.functions;
    j["mtsls1_steps"] = cfg.mtsls1_steps;
    j["threads"] = effective_threads(cfg);
    j["log_runs"] = cfg.log_runs;
    return j;
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    return s.str();
}

}  // namespace

std::string validate(const RunConfig& cfg) {
    if (cfg.suite.empty()) return "--suite: must not be empty";
    if (cfg.dims < 2) return "--dims: must be at least 2";
    if (cfg.runs == 0) return "--runs: must be a positive integer";
    if (cfg.budget_multiplier == 0) return "--budget-multiplier: must be a positive integer";
    if (!(cfg.threshold > 0.0) || !std::isfinite(cfg.threshold)) return "--threshold: must be a positive number";
    if (cfg.searcher != "mtsls1" && cfg.searcher != "none" && cfg.searcher != "bfgs" &&
        cfg.searcher != "neldermead")
        return "--searcher: must be one of mtsls1, none, bfgs, neldermead";
    if (cfg.p_nlopt) {
        const double p = *cfg.p_nlopt;
        if (!(p >= 0.0 && p <= 1.0)) return "--p-nlopt: must lie in [0, 1]";
        if (no_secondary(cfg.searcher) && p != 0.0)
            return "--p-nlopt: must be 0 when --searcher is " + cfg.searcher;
    }
    if (cfg.thresh_localsearch == 0) return "--thresh-localsearch: must be a positive integer";
    if (cfg.mtsls1_steps != "seeded" && cfg.mtsls1_steps != "persistent")
        return "--mtsls1-steps: must be seeded or persistent";
    if (cfg.out_dir && cfg.out_dir->empty()) return "--out-dir: must not be empty";
    if (cfg.name && (cfg.name->empty() || cfg.name->find_first_of("/\\,") != std::string::npos))
        return "--name: must be non-empty without '/', '\\' or ','";
    return {};
}

std::string algorithm_name(const RunConfig& cfg) {
    if (cfg.name) return *cfg.name;
    return "hiacor-" + std::string(no_secondary(cfg.searcher) ? "mtsls1" : cfg.searcher);
}

std::string label_from_path(const std::string& path) {
    std::string stem = fs::path(path).stem().string();
    constexpr std::string_view prefix = "summary_";
    if (stem.size() > prefix.size() && stem.starts_with(prefix)) stem.erase(0, prefix.size());
    return stem;
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (std::string msg = validate(cfg); !msg.empty()) throw CliError{kConfigError, msg};
        const std::vector<soco::SuiteEntry> suite = load_suite(cfg);
        const std::string out_dir = resolve_out_dir(cfg.out_dir);

        std::vector<experiment::ExperimentProblem> problems;
        try {
            problems = experiment::problems_from_suite(suite);
        } catch (const std::invalid_argument& e) {
            throw CliError{kConfigError, std::string("--suite: ") + e.what()};
        } catch (const std::exception& e) {
            throw CliError{kIoError, e.what()};
        }

        experiment::AlgorithmConfig algo;
        algo.name = algorithm_name(cfg);
        algo.params.p_nlopt = effective_p_nlopt(cfg);
        algo.params.thresh_localsearch = cfg.thresh_localsearch;
        algo.budget_multiplier = cfg.budget_multiplier;
        algo.secondary = secondary_kind(cfg.searcher);
        algo.run_options.archive_seeded_steps = cfg.mtsls1_steps == "seeded";
        if (!algo.secondary && algo.params.p_nlopt > 0.0)
            throw CliError{kConfigError, "--p-nlopt: must be 0 when --searcher is " + cfg.searcher};

        experiment::ExperimentOptions opts;
        opts.runs = cfg.runs;
        opts.seed0 = cfg.seed;
        opts.threads = effective_threads(cfg);
        opts.keep_logs = cfg.log_runs;

        ensure_dir(out_dir);
        const auto t0 = std::chrono::steady_clock::now();
        const experiment::ExperimentResult result = experiment::run_experiment(problems, algo, opts);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        bool every_function_ok = true;
        nlohmann::ordered_json failures = nlohmann::ordered_json::array();
        std::size_t trials = 0;
        for (const experiment::FunctionResult& f : result.functions) {
            trials += f.records.size();
            if (f.records.empty()) every_function_ok = false;
            for (const experiment::TrialFailure& tf : f.failures) {
                err << "warning: " << f.function << " seed " << tf.seed << " failed: " << one_line(tf.message) << '\n';
                failures.push_back({{"function", f.function}, {"seed", tf.seed}, {"message", tf.message}});
            }
        }

        const stats::SummaryTable summary = result.summary(cfg.threshold);
        const fs::path dir(out_dir);
        write_file(dir / ("raw_" + algo.name + ".csv"),
                   [&](std::ostream& o) { experiment::write_raw_csv(o, result.functions); });
        write_file(dir / ("summary_" + algo.name + ".csv"),
                   [&](std::ostream& o) { experiment::write_summary_csv(o, summary); });
        if (cfg.log_runs) {
            write_file(dir / ("runlog_" + algo.name + ".jsonl"), [&](std::ostream& o) {
                for (const experiment::FunctionResult& f : result.functions) {
                    for (std::size_t r = 0; r < f.records.size(); ++r) {
                        std::ostringstream lines;
                        iacor::write_run_log(lines, f.logs[r]);
                        std::istringstream in(lines.str());
                        for (std::string line; std::getline(in, line);) {
                            nlohmann::ordered_json j;
                            j["function"] = f.function;
                            j["seed"] = f.records[r].seed;
                            const auto fields = nlohmann::ordered_json::parse(line);
                            for (const auto& [k, v] : fields.items()) j[k] = v;
                            o << j.dump() << '\n';
                        }
                    }
                }
            });
        }
        write_file(dir / ("manifest_" + algo.name + ".json"), [&](std::ostream& o) {
            nlohmann::ordered_json m;
            m["tool"] = "hiacor_bench";
            m["version"] = HIACOR_VERSION;
            m["command"] = "run";
            m["algorithm"] = algo.name;
            m["config"] = config_json(cfg);
            m["trials_succeeded"] = trials;
            m["failures"] = failures;
            m["wall_time_seconds"] = wall;
            o << m.dump(2) << '\n';
        });

        out << "algorithm " << algo.name << ": " << trials << " trials, "
            << stats::count_optima(summary, stats::Metric::Med, cfg.threshold) << "/" << summary.rows.size()
            << " functions with zero median, " << fixed(wall, 3) << " s\n";
        for (const stats::SummaryRow& r : summary.rows)
            out << "  " << r.function << "  avg " << experiment::format_error(r.avg_error) << "  med "
                << experiment::format_error(r.med_error) << '\n';
        out << "wrote " << (dir / ("summary_" + algo.name + ".csv")).string() << '\n';
        if (!every_function_ok) {
            err << "error: at least one function has no successful trial\n";
            return kIoError;
        }
        return kOk;
    } catch (const CliError& e) {
        return report(err, e);
    } catch (const std::exception& e) {
        return report(err, {kIoError, e.what()});
    }
}

namespace {

stats::SummaryTable load_summary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError{kIoError, "cannot open summary '" + path + "'"};
    try {
        return experiment::read_summary_csv(in, label_from_path(path));
    } catch (const experiment::ParseError& e) {
        throw CliError{kConfigError, path + ": " + e.what()};
    }
}

}  // namespace

int cmd_compare(const CompareConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        std::vector<stats::Metric> metrics;
        if (cfg.metric == "both") {
            metrics = {stats::Metric::Avg, stats::Metric::Med};
        } else {
            try {
                metrics = {stats::parse_metric(cfg.metric)};
            } catch (const std::invalid_argument&) {
                throw CliError{kConfigError, "--metric: must be avg, med or both"};
            }
        }
        stats::SummaryTable a = load_summary(cfg.a);
        stats::SummaryTable b = load_summary(cfg.b);
        if (a.algorithm == b.algorithm && cfg.a != cfg.b) {
            a.algorithm = fs::path(cfg.a).stem().string() + "(a)";
            b.algorithm = fs::path(cfg.b).stem().string() + "(b)";
        }
        const std::string pair = a.algorithm + " vs " + b.algorithm;
        const stats::WilcoxonOptions wopt{cfg.exact_max_n, cfg.continuity_correction};

        std::vector<experiment::WilcoxonRow> rows;
        for (stats::Metric m : metrics) {
            stats::WilcoxonResult r;
            try {
                r = stats::compare_tables(a, b, m, wopt);
            } catch (const stats::MismatchedFunctionSets& e) {
                throw CliError{kConfigError, e.what()};
            } catch (const std::invalid_argument& e) {
                throw CliError{kConfigError, e.what()};
            }
            rows.push_back({pair, m, r});
            out << pair << " [" << stats::to_string(m) << "]: Wp=" << r.w_plus << " Wn=" << r.w_minus
                << " n=" << r.n << " p=" << experiment::format_error(r.p_value) << '\n';
            out << (r.p_value < 0.05 ? "significant" : "not significant") << '\n';
        }

        const std::string out_dir = resolve_out_dir(cfg.out_dir);
        ensure_dir(out_dir);
        const std::string file = "wilcoxon_" + a.algorithm + "_vs_" + b.algorithm + ".csv";
        write_file(fs::path(out_dir) / file, [&](std::ostream& o) { experiment::write_wilcoxon_csv(o, rows); });
        return kOk;
    } catch (const CliError& e) {
        return report(err, e);
    } catch (const std::exception& e) {
        return report(err, {kIoError, e.what()});
    }
}

int cmd_rank(const RankConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.summaries.empty()) throw CliError{kConfigError, "rank: at least one summary file is required"};
        if (!(cfg.threshold > 0.0) || !std::isfinite(cfg.threshold))
            throw CliError{kConfigError, "--threshold: must be a positive number"};
        std::vector<stats::SummaryTable> tables;
        for (const std::string& p : cfg.summaries) tables.push_back(load_summary(p));
        std::vector<stats::RankEntry> ranking;
        try {
            ranking = stats::rank_algorithms(tables, cfg.threshold);
        } catch (const std::invalid_argument& e) {
            throw CliError{kConfigError, e.what()};
        }

        std::size_t width = 9;
        for (const stats::RankEntry& e : ranking) width = std::max(width, e.algorithm.size());
        out << std::left << std::setw(6) << "rank" << std::setw(static_cast<int>(width + 2)) << "algorithm"
            << std::setw(16) << "score" << "zero_medians\n";
        for (const stats::RankEntry& e : ranking)
            out << std::left << std::setw(6) << e.rank << std::setw(static_cast<int>(width + 2)) << e.algorithm
                << std::setw(16) << experiment::format_error(e.score) << e.zero_median_count << '\n';

        const std::string out_dir = resolve_out_dir(cfg.out_dir);
        ensure_dir(out_dir);
        write_file(fs::path(out_dir) / "ranking.csv",
                   [&](std::ostream& o) { experiment::write_ranking_csv(o, ranking); });
        return kOk;
    } catch (const CliError& e) {
        return report(err, e);
    } catch (const std::exception& e) {
        return report(err, {kIoError, e.what()});
    }
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hybrid IACO_R benchmark harness", "hiacor_bench"};
    app.set_version_flag("--version", std::string(HIACOR_VERSION));
    app.require_subcommand(1);

    RunConfig run;
    std::string p_nlopt_text, out_dir_run, name;
    CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment and write raw, summary and manifest files");
    run_cmd->add_option("--suite", run.suite, "'soco' or a JSON suite manifest")->capture_default_str();
    run_cmd->add_option("--dims", run.dims, "Dimension of the builtin suite")->capture_default_str();
    run_cmd->add_option("--runs", run.runs, "Trials per function")->capture_default_str();
    run_cmd->add_option("--budget-multiplier", run.budget_multiplier, "Evaluations per trial = multiplier * D")
        ->capture_default_str();
    run_cmd->add_option("--threshold", run.threshold, "Errors below this count as 0")->capture_default_str();
    run_cmd->add_option("--searcher", run.searcher, "mtsls1 | none | bfgs | neldermead")->capture_default_str();
    run_cmd->add_option("--p-nlopt", p_nlopt_text, "Probability of the secondary searcher (default 0.6)");
    run_cmd->add_option("--thresh-localsearch", run.thresh_localsearch, "Stagnation switch threshold")
        ->capture_default_str();
    run_cmd->add_option("--seed", run.seed, "Trial k uses seed + k")->capture_default_str();
    run_cmd->add_option("--shift-seed", run.shift_seed, "Seed of the builtin shift vectors")->capture_default_str();
    run_cmd->add_option("--functions", run.functions, "Subset of the suite, e.g. F1 F9")->delimiter(',');
    run_cmd->add_option("--mtsls1-steps", run.mtsls1_steps, "seeded | persistent")->capture_default_str();
    run_cmd->add_option("--out-dir", out_dir_run, "Output directory (else $ACOR_BENCH_OUT, else ./results)");
    run_cmd->add_option("--name", name, "Algorithm label for output files");
    run_cmd->add_option("--threads", run.threads, "Worker threads (0: all cores)")->capture_default_str();
    run_cmd->add_flag("--log-runs", run.log_runs, "Write a JSONL log of every iteration");

    CompareConfig cmp;
    std::string out_dir_cmp;
    CLI::App* cmp_cmd = app.add_subcommand("compare", "Wilcoxon signed-rank test between two summaries");
    cmp_cmd->add_option("a", cmp.a, "First summary CSV")->required();
    cmp_cmd->add_option("b", cmp.b, "Second summary CSV")->required();
    cmp_cmd->add_option("--metric", cmp.metric, "avg | med | both")->capture_default_str();
    cmp_cmd->add_option("--exact-max-n", cmp.exact_max_n, "Largest n for the exact distribution")
        ->capture_default_str();
    cmp_cmd->add_flag("!--no-continuity-correction", cmp.continuity_correction,
                      "Drop the 0.5 correction in the normal approximation");
    cmp_cmd->add_option("--out-dir", out_dir_cmp, "Output directory");

    RankConfig rank;
    std::string out_dir_rank;
    CLI::App* rank_cmd = app.add_subcommand("rank", "Rank algorithms by the sum of average and median errors");
    rank_cmd->add_option("summaries", rank.summaries, "Summary CSV files")->required();
    rank_cmd->add_option("--threshold", rank.threshold, "Errors below this count as 0")->capture_default_str();
    rank_cmd->add_option("--out-dir", out_dir_rank, "Output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << HIACOR_VERSION << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return kConfigError;
    }

    if (run_cmd->parsed()) {
        if (!p_nlopt_text.empty()) {
            char* end = nullptr;
            const double p = std::strtod(p_nlopt_text.c_str(), &end);
            if (end == p_nlopt_text.c_str() || *end != '\0') {
                err << "error: --p-nlopt: '" << p_nlopt_text << "' is not a number\n";
                return kConfigError;
            }
            run.p_nlopt = p;
        }
        if (run_cmd->count("--out-dir")) run.out_dir = out_dir_run;
        if (run_cmd->count("--name")) run.name = name;
        return cmd_run(run, out, err);
    }
    if (cmp_cmd->parsed()) {
        if (cmp_cmd->count("--out-dir")) cmp.out_dir = out_dir_cmp;
        return cmd_compare(cmp, out, err);
    }
    if (rank_cmd->count("--out-dir")) rank.out_dir = out_dir_rank;
    return cmd_rank(rank, out, err);
}

}  // namespace hiacor::cli
