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
#include "hiacor/iacor.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace hiacor::iacor {
namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid IACO_R parameter: ") + what);
}

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void Params::validate() const {
    require(is_probability(p), "p must lie in [0, 1]");
    require(zeta > 0.0 && std::isfinite(zeta), "zeta must be positive");
    require(alpha0 >= 1, "alpha0 must be positive");
    require(gamma >= 1, "gamma must be positive");
    require(alpha_max >= alpha0, "alpha_max must be >= alpha0");
    require(tau >= 0.0 && std::isfinite(tau), "tau must be non-negative");
    require(fail_max >= 1, "fail_max must be positive");
    require(siter_max >= 1, "siter_max must be positive");
    require(is_probability(p_nlopt), "p_nlopt must lie in [0, 1]");
    require(thresh_localsearch >= 1, "thresh_localsearch must be positive");
}

// --- Archive ----------------------------------------------------------------

Archive::Archive(std::vector<ArchiveEntry> entries) : entries_(std::move(entries)) { sort(); }

void Archive::insert(ArchiveEntry entry) {
    auto pos = std::upper_bound(entries_.begin(), entries_.end(), entry.value,
                                [](double v, const ArchiveEntry& e) { return v < e.value; });
    entries_.insert(pos, std::move(entry));
}

void Archive::sort() {
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const ArchiveEntry& a, const ArchiveEntry& b) { return a.value < b.value; });
}

bool Archive::is_sorted() const {
    return std::is_sorted(entries_.begin(), entries_.end(),
                          [](const ArchiveEntry& a, const ArchiveEntry& b) { return a.value < b.value; });
}

// --- Random -----------------------------------------------------------------

Random::Random(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    engine_.seed(seq);
}

double Random::uniform() { return unit_(engine_); }

double Random::normal() { return gauss_(engine_); }

std::size_t Random::index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Random::index on an empty range");
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

std::vector<double> Random::uniform_point(const BoundedProblem& problem) {
    const std::size_t d = problem.dimension();
    std::vector<double> x(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double lo = problem.lower()[i];
        const double hi = problem.upper()[i];
        x[i] = std::min(lo + (hi - lo) * uniform(), hi);
    }
    return x;
}

// --- Policy -----------------------------------------------------------------

std::string_view to_string(Choice c) { return c == Choice::Mtsls1 ? "mtsls1" : "secondary"; }

Choice HybridPolicy::select(double u) {
    Choice c;
    last_forced = false;
    if (p_nlopt <= 0.0) {
        c = Choice::Mtsls1;
    } else if (p_nlopt >= 1.0) {
        c = Choice::Secondary;
    } else if (ctr_localsearch < thresh) {
        c = u < p_nlopt ? Choice::Secondary : Choice::Mtsls1;
    } else {
        c = last_used == Choice::Mtsls1 ? Choice::Secondary : Choice::Mtsls1;
        last_forced = true;
    }
    last_used = c;
    return c;
}

void HybridPolicy::record_outcome(bool improved_global) {
    if (improved_global || last_forced)
        ctr_localsearch = 0;
    else
        ++ctr_localsearch;
}

// --- Sampling ---------------------------------------------------------------

std::vector<double> kernel_widths(const Archive& archive, std::size_t i, double zeta) {
    const std::size_t d = archive.dimension();
    std::vector<double> sigma(d, 0.0);
    const std::size_t k = archive.size();
    if (k < 2) return sigma;
    const auto& xi = archive[i].x;
    for (std::size_t e = 0; e < k; ++e) {
        if (e == i) continue;
        const auto& xe = archive[e].x;
        for (std::size_t j = 0; j < d; ++j) sigma[j] += std::abs(xe[j] - xi[j]);
    }
    const double scale = zeta / static_cast<double>(k - 1);
    for (double& s : sigma) s *= scale;
    return sigma;
}

std::vector<double> sample_around(const Archive& archive, std::size_t i, double zeta,
                                  const BoundedProblem& problem, Random& rng) {
    if (archive.empty()) throw std::invalid_argument("cannot sample from an empty archive");
    const std::vector<double> sigma = kernel_widths(archive, i, zeta);
    std::vector<double> x = archive[i].x;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double n = rng.normal();
        if (sigma[j] > 0.0) x[j] += sigma[j] * n;
    }
    clamp_in_place(x, problem);
    return x;
}

std::size_t explore_archive(Archive& archive, double zeta, BudgetedEvaluator& ev, Random& rng) {
    if (archive.empty()) throw std::invalid_argument("cannot explore an empty archive");
    const BoundedProblem& problem = ev.problem();
    std::size_t substituted = 0;
    // Kernels are built from the archive as it was at the start of the sweep.
    const Archive snapshot = archive;
    try {
        for (std::size_t j = 0; j < snapshot.size(); ++j) {
            std::vector<double> x = sample_around(snapshot, j, zeta, problem, rng);
            const double v = ev(x);
            if (v < archive[j].value) {
                archive[j] = ArchiveEntry{std::move(x), v, 0};
                ++substituted;
            }
        }
    } catch (const BudgetExhausted&) {
        archive.sort();
        throw;
    }
    archive.sort();
    return substituted;
}

std::vector<double> partner_steps(const Archive& archive, std::size_t i, Random& rng) {
    if (archive.size() < 2) throw std::invalid_argument("partner_steps needs two archive entries");
    std::size_t j = rng.index(archive.size() - 1);
    if (j >= i) ++j;
    const auto& a = archive[i].x;
    const auto& b = archive[j].x;
    std::vector<double> steps(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) steps[k] = std::abs(b[k] - a[k]);
    return steps;
}

std::vector<double> blend_toward_best(std::span<const double> s_new,
                                      std::span<const double> s_best,
                                      std::span<const double> r) {
    std::vector<double> out(s_new.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = (1.0 - r[j]) * s_new[j] + r[j] * s_best[j];
    return out;
}

bool grow_archive(Archive& archive, const Params& params, std::size_t iteration,
                  BudgetedEvaluator& ev, Random& rng) {
    if (iteration == 0 || iteration % params.gamma != 0) return false;
    if (archive.size() >= params.alpha_max || archive.empty()) return false;
    const BoundedProblem& problem = ev.problem();
    const std::vector<double> fresh = rng.uniform_point(problem);
    std::vector<double> r(fresh.size());
    for (double& v : r) v = rng.uniform();
    std::vector<double> x = blend_toward_best(fresh, archive.best().x, r);
    clamp_in_place(x, problem);
    double v = 0.0;
    try {
        v = ev(x);
    } catch (const BudgetExhausted&) {
        return false;
    }
    archive.insert(ArchiveEntry{std::move(x), v, 0});
    return true;
}

bool restart_if_stagnant(Archive& archive, std::size_t& ctr_global, std::size_t siter_max,
                         BudgetedEvaluator& ev, Random& rng) {
    if (ctr_global != siter_max) return false;
    ctr_global = 0;
    for (std::size_t i = 0; i < archive.size(); ++i) archive[i].fail_count = 0;
    const BoundedProblem& problem = ev.problem();
    // Entry 0 is kept verbatim; the others are redrawn in place and the
    // archive re-sorted once at the end.
    try {
        for (std::size_t i = 1; i < archive.size(); ++i) {
            std::vector<double> x = rng.uniform_point(problem);
            const double v = ev(x);
            archive[i] = ArchiveEntry{std::move(x), v, 0};
        }
    } catch (const BudgetExhausted&) {
    }
    // A redrawn point can tie or beat the old best only by chance; stable
    // sorting keeps the old best first on ties.
    archive.sort();
    return true;
}

// --- Run log ----------------------------------------------------------------

void write_run_log(std::ostream& out, std::span<const IterationLog> log) {
    for (const IterationLog& it : log) {
        nlohmann::ordered_json j;
        j["iteration"] = it.iteration;
        j["evals"] = it.evals;
        j["best_error"] = it.best_error;
        j["searcher"] = it.searcher ? std::string(to_string(*it.searcher)) : std::string("none");
        j["forced_switch"] = it.forced_switch;
        j["ctr_localsearch"] = it.ctr_localsearch;
        j["ls_evals"] = it.ls_evals;
        j["alpha"] = it.archive_size;
        j["restarted"] = it.restarted;
        out << j.dump() << '\n';
    }
}

// --- Driver -----------------------------------------------------------------

namespace {

/// Keeps a thinned best-error trace: a point is stored when the error at
/// least halves; the last improvement is always appended at the end.
class TraceRecorder {
public:
    explicit TraceRecorder(const BoundedProblem& problem) : problem_(problem) {}

    void on_improvement(std::uint64_t evals, double value) {
        last_ = TracePoint{evals, problem_.error(value)};
        if (trace_.empty() || last_.best_error <= 0.5 * trace_.back().best_error) {
            if (trace_.empty() || last_.best_error < trace_.back().best_error) trace_.push_back(last_);
        }
    }

    std::vector<TracePoint> finish() {
        if (!trace_.empty() && trace_.back().evals != last_.evals &&
            last_.best_error < trace_.back().best_error)
            trace_.push_back(last_);
        return std::move(trace_);
    }

private:
    const BoundedProblem& problem_;
    std::vector<TracePoint> trace_;
    TracePoint last_;
};

}  // namespace

RunResult run(const BoundedProblem& problem, const Params& params,
              std::optional<ls::SearcherKind> secondary, std::uint64_t seed,
              const RunOptions& options) {
    params.validate();
    if (!secondary && params.p_nlopt > 0.0)
        throw std::invalid_argument("a secondary searcher is required when p_nlopt > 0");

    Random rng(seed);
    const std::uint64_t cap = std::max<std::uint64_t>(params.termination, params.alpha0);
    BudgetedEvaluator ev(problem, cap);
    TraceRecorder trace(problem);
    ev.set_improvement_hook([&](std::uint64_t n, double v) { trace.on_improvement(n, v); });
    if (options.observer) ev.set_observer(options.observer);

    ls::Mtsls1Searcher mtsls1(options.search);
    if (options.resolution_aware_reset) mtsls1.state().resolution_aware_reset = *options.resolution_aware_reset;
    std::unique_ptr<ls::LocalSearcher> other =
        secondary ? ls::make_searcher(*secondary, options.search) : nullptr;

    RunResult result;
    Archive& archive = result.archive;
    for (std::size_t k = 0; k < params.alpha0; ++k) {
        std::vector<double> x = rng.uniform_point(problem);
        const double v = ev(x);
        archive.insert(ArchiveEntry{std::move(x), v, 0});
    }

    HybridPolicy policy{params.p_nlopt, 0, params.thresh_localsearch};
    std::size_t ctr_global = 0;
    std::size_t iteration = 0;

    while (ev.used() < params.termination) {
        ++iteration;
        IterationLog entry;
        entry.iteration = iteration;
        const double best_before = archive.best().value;
        bool out_of_budget = false;
        try {
            // Local search start: the best entry while it still has credit,
            // otherwise a random entry that does; none left means no search.
            std::optional<std::size_t> start;
            if (archive[0].fail_count < params.fail_max) {
                start = 0;
            } else {
                std::vector<std::size_t> eligible;
                for (std::size_t i = 1; i < archive.size(); ++i)
                    if (archive[i].fail_count < params.fail_max) eligible.push_back(i);
                if (!eligible.empty()) start = eligible[rng.index(eligible.size())];
            }

            if (start) {
                entry.ctr_localsearch = policy.ctr_localsearch;
                const Choice choice = policy.select(rng.uniform());
                entry.searcher = choice;
                entry.forced_switch = policy.last_forced;
                ls::LocalSearcher& searcher =
                    choice == Choice::Secondary && other ? *other : static_cast<ls::LocalSearcher&>(mtsls1);

                if (choice == Choice::Mtsls1 && options.archive_seeded_steps && archive.size() > 1)
                    mtsls1.seed_steps(problem, partner_steps(archive, *start, rng));
                ArchiveEntry& origin = archive[*start];
                const double global_before = archive.best().value;
                ls::SearchResult found = searcher.search(ev, origin.x, origin.value);
                entry.ls_evals = found.evaluations;

                if (found.value < origin.value - params.tau) {
                    origin.x = std::move(found.x);
                    origin.value = found.value;
                    origin.fail_count = 0;
                } else {
                    if (found.value < origin.value) {
                        origin.x = std::move(found.x);
                        origin.value = found.value;
                    }
                    ++origin.fail_count;
                }
                archive.sort();
                policy.record_outcome(archive.best().value < global_before - params.tau);
                if (ev.exhausted()) throw BudgetExhausted(false);
            }

            if (rng.uniform() < params.p) {
                std::vector<double> x = sample_best_gaussian(archive, params.zeta, problem, rng);
                const double v = ev(x);
                if (v < archive[0].value) archive[0] = ArchiveEntry{std::move(x), v, 0};
            } else {
                explore_archive(archive, params.zeta, ev, rng);
            }

            grow_archive(archive, params, iteration, ev, rng);

            if (archive.best().value < best_before - params.tau)
                ctr_global = 0;
            else
                ++ctr_global;
            entry.restarted = restart_if_stagnant(archive, ctr_global, params.siter_max, ev, rng);
        } catch (const BudgetExhausted&) {
            out_of_budget = true;
        }

        if (options.record_log) {
            entry.evals = ev.used();
            entry.best_error = problem.error(ev.best_value());
            entry.archive_size = archive.size();
            result.log.push_back(entry);
        }
        if (out_of_budget || ev.exhausted()) break;
    }

    result.best_x = ev.best_x();
    result.best_value = ev.best_value();
    result.record.problem_label = problem.label();
    result.record.seed = seed;
    result.record.final_error = problem.error(ev.best_value());
    result.record.evals_used = ev.used();
    result.record.trace = trace.finish();
    return result;
}

}  // namespace hiacor::iacor
