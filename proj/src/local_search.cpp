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
#include "hiacor/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hiacor::ls {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Distance to the next representable double above |v|.
double spacing(double v) {
    const double a = std::abs(v);
    return std::nextafter(a, std::numeric_limits<double>::infinity()) - a;
}

}  // namespace

std::string_view to_string(SearcherKind kind) {
    switch (kind) {
        case SearcherKind::Mtsls1: return "mtsls1";
        case SearcherKind::QuasiNewton: return "bfgs";
        case SearcherKind::NelderMead: return "neldermead";
    }
    return "unknown";
}

std::uint64_t evaluation_cap(std::size_t dim, std::uint64_t call_cap) noexcept {
    return (2 * static_cast<std::uint64_t>(dim) + 1) * call_cap;
}

SearchResult LocalSearcher::search(BudgetedEvaluator& ev, std::span<const double> x0,
                                   std::optional<double> f0) {
    if (x0.size() != ev.dimension()) throw DimensionMismatch(ev.dimension(), x0.size());
    LocalCallScope scope(ev, evaluation_cap(ev.dimension(), config_.call_cap));

    SearchResult result;
    Incumbent best;
    best.x.assign(x0.begin(), x0.end());
    try {
        best.value = f0 ? *f0 : ev(x0);
    } catch (const BudgetExhausted&) {
        result.x = best.x;
        result.value = std::numeric_limits<double>::infinity();
        result.exhausted = true;
        return result;
    }

    try {
        run(ev, best, result.iterations);
    } catch (const BudgetExhausted&) {
        result.exhausted = true;
    }
    if (ev.remaining() == 0) result.exhausted = true;
    result.x = std::move(best.x);
    result.value = best.value;
    result.evaluations = scope.consumed();
    return result;
}

// --- Mtsls1 --------------------------------------------------------------

Mtsls1State make_mtsls1_state(const BoundedProblem& problem) {
    Mtsls1State s;
    const std::size_t d = problem.dimension();
    s.initial.resize(d);
    for (std::size_t i = 0; i < d; ++i) s.initial[i] = 0.4 * (problem.upper()[i] - problem.lower()[i]);
    s.step = s.initial;
    return s;
}

Mtsls1PassResult mtsls1_pass(BudgetedEvaluator& ev, std::span<const double> x, double fx,
                             Mtsls1State& state) {
    const BoundedProblem& problem = ev.problem();
    const std::size_t d = problem.dimension();
    if (x.size() != d) throw DimensionMismatch(d, x.size());
    if (state.step.size() != d) throw DimensionMismatch(d, state.step.size());

    Mtsls1PassResult r;
    r.x.assign(x.begin(), x.end());
    r.value = fx;
    state.improved_last_pass = false;

    // Tries coordinate i at `candidate`; keeps it only on a strict decrease.
    auto attempt = [&](std::size_t i, double candidate) {
        const double previous = r.x[i];
        candidate = std::clamp(candidate, problem.lower()[i], problem.upper()[i]);
        if (candidate == previous) return false;
        r.x[i] = candidate;
        double f = 0.0;
        try {
            f = ev(r.x);
        } catch (const BudgetExhausted&) {
            r.x[i] = previous;
            throw;
        }
        if (f < r.value) {
            r.value = f;
            return true;
        }
        r.x[i] = previous;
        return false;
    };

    try {
        for (std::size_t i = 0; i < d; ++i) {
            const double origin = r.x[i];
            const double s = state.step[i];
            if (attempt(i, origin + s) || attempt(i, origin - 0.5 * s)) state.improved_last_pass = true;
        }
    } catch (const BudgetExhausted&) {
        r.exhausted = true;
    }
    r.improved = state.improved_last_pass;
    return r;
}

void halve_steps(Mtsls1State& state) {
    for (double& s : state.step) s *= 0.5;
}

void reset_exhausted_steps(Mtsls1State& state, std::span<const double> x) {
    for (std::size_t i = 0; i < state.step.size(); ++i) {
        double floor = state.min_step;
        if (state.resolution_aware_reset && i < x.size())
            floor = std::min(floor, std::max(spacing(x[i]), 1e-30));
        if (state.step[i] < floor) state.step[i] = state.initial[i];
    }
}

void Mtsls1Searcher::prepare(const BoundedProblem& problem) {
    const std::size_t d = problem.dimension();
    bool fresh = state_.step.size() != d || state_.initial.size() != d;
    for (std::size_t i = 0; !fresh && i < d; ++i)
        fresh = state_.initial[i] != 0.4 * (problem.upper()[i] - problem.lower()[i]);
    if (!fresh) return;
    const double min_step = state_.min_step;
    const bool aware = state_.resolution_aware_reset;
    state_ = make_mtsls1_state(problem);
    state_.min_step = min_step;
    state_.resolution_aware_reset = aware;
}

void Mtsls1Searcher::seed_steps(const BoundedProblem& problem, std::span<const double> steps) {
    prepare(problem);
    if (steps.size() != state_.step.size()) throw DimensionMismatch(state_.step.size(), steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i)
        state_.step[i] = steps[i] > 0.0 && std::isfinite(steps[i]) ? steps[i] : state_.initial[i];
}

void Mtsls1Searcher::run(BudgetedEvaluator& ev, Incumbent& best, std::uint64_t& iterations) {
    prepare(ev.problem());
    for (; iterations < config().call_cap; ++iterations) {
        Mtsls1PassResult pass = mtsls1_pass(ev, best.x, best.value, state_);
        best.offer(pass.x, pass.value);
        if (pass.exhausted) throw BudgetExhausted(ev.remaining() == 0 && !ev.exhausted());
        if (!pass.improved) halve_steps(state_);
        reset_exhausted_steps(state_, best.x);
    }
}

// --- Quasi-Newton ---------------------------------------------------------

void QuasiNewtonSearcher::run(BudgetedEvaluator& ev, Incumbent& best, std::uint64_t& iterations) {
    const BoundedProblem& problem = ev.problem();
    const std::size_t d = problem.dimension();
    const SearchConfig& cfg = config();
    first_direction_.clear();

    std::vector<double> x = best.x;
    double fx = best.value;
    std::vector<double> g = central_difference_gradient(ev, x, cfg.gradient_step);

    // Dense inverse-Hessian approximation, row-major.
    std::vector<double> h(d * d, 0.0);
    auto set_identity = [&](double scale) {
        std::fill(h.begin(), h.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) h[i * d + i] = scale;
    };
    set_identity(1.0);
    bool scaled = false;

    std::vector<double> dir(d), xn(d), step(d), y(d), hy(d);
    for (; iterations < cfg.call_cap; ++iterations) {
        for (std::size_t i = 0; i < d; ++i) dir[i] = -dot(std::span(h).subspan(i * d, d), g);
        double slope = dot(g, dir);
        if (!(slope < 0.0)) {
            set_identity(1.0);
            scaled = false;
            for (std::size_t i = 0; i < d; ++i) dir[i] = -g[i];
            slope = -dot(g, g);
            if (!(slope < 0.0)) break;  // stationary point
        }
        if (iterations == 0) first_direction_ = dir;

        // Backtracking Armijo search on the projected path.
        double alpha = 1.0;
        double fn = fx;
        bool accepted = false;
        for (int k = 0; k <= line_.max_backtracks; ++k, alpha *= line_.backtrack) {
            bool moved = false;
            for (std::size_t i = 0; i < d; ++i) {
                xn[i] = std::clamp(x[i] + alpha * dir[i], problem.lower()[i], problem.upper()[i]);
                step[i] = xn[i] - x[i];
                moved = moved || step[i] != 0.0;
            }
            if (!moved) break;
            const double projected_slope = dot(g, step);
            if (!(projected_slope < 0.0)) continue;
            fn = ev(xn);
            best.offer(xn, fn);
            if (fn <= fx + line_.armijo_c * projected_slope && fn < fx) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;

        const double df = fx - fn;
        bool small_step = true;
        for (std::size_t i = 0; i < d; ++i)
            small_step = small_step && std::abs(step[i]) <= cfg.x_tol * std::max(1.0, std::abs(xn[i]));

        x = xn;
        fx = fn;
        if (std::abs(df) <= cfg.f_tol * std::max(1.0, std::abs(fx)) || small_step) {
            ++iterations;
            break;
        }

        std::vector<double> gn = central_difference_gradient(ev, x, cfg.gradient_step);
        for (std::size_t i = 0; i < d; ++i) y[i] = gn[i] - g[i];
        g = std::move(gn);
        const double sy = dot(step, y);
        if (sy > 1e-12) {
            if (!scaled) {
                set_identity(sy / dot(y, y));
                scaled = true;
            }
            for (std::size_t i = 0; i < d; ++i) hy[i] = dot(std::span(h).subspan(i * d, d), y);
            const double yhy = dot(y, hy);
            const double a = (sy + yhy) / (sy * sy);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    h[i * d + j] += a * step[i] * step[j] - (hy[i] * step[j] + step[i] * hy[j]) / sy;
                }
            }
        }
    }
}

// --- Nelder-Mead ------------------------------------------------------------

void NelderMeadSearcher::run(BudgetedEvaluator& ev, Incumbent& best, std::uint64_t& iterations) {
    const BoundedProblem& problem = ev.problem();
    const std::size_t d = problem.dimension();
    const SearchConfig& cfg = config();
    const auto& lo = problem.lower();
    const auto& hi = problem.upper();

    auto clamp = [&](std::vector<double>& v) {
        for (std::size_t i = 0; i < d; ++i) v[i] = std::clamp(v[i], lo[i], hi[i]);
    };

    std::vector<std::vector<double>> simplex(d + 1, best.x);
    std::vector<double> fv(d + 1, best.value);
    for (std::size_t i = 0; i < d; ++i) {
        const double edge = 0.05 * (hi[i] - lo[i]);
        auto& v = simplex[i + 1];
        v[i] = best.x[i] + edge > hi[i] ? best.x[i] - edge : best.x[i] + edge;
        clamp(v);
        fv[i + 1] = ev(v);
        best.offer(v, fv[i + 1]);
    }

    std::vector<std::size_t> order(d + 1);
    std::vector<double> centroid(d), xr(d), xe(d), xc(d);
    auto along = [&](std::vector<double>& out, const std::vector<double>& from, double t) {
        // out = centroid + t * (from - centroid)
        for (std::size_t i = 0; i < d; ++i) out[i] = centroid[i] + t * (from[i] - centroid[i]);
        clamp(out);
    };

    for (; iterations < cfg.call_cap; ++iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t lo_i = order.front();
        const std::size_t hi_i = order.back();
        const std::size_t next_i = order[d - 1];

        // Both spreads must be small: vertices can share a level set far
        // from the minimum, which makes the f-spread alone vanish.
        double spread = 0.0;
        for (std::size_t k = 0; k <= d; ++k)
            for (std::size_t i = 0; i < d; ++i)
                spread = std::max(spread, std::abs(simplex[k][i] - simplex[lo_i][i]) /
                                              std::max(1.0, std::abs(simplex[lo_i][i])));
        if (fv[hi_i] - fv[lo_i] <= cfg.f_tol * std::max(1.0, std::abs(fv[lo_i])) && spread <= cfg.x_tol) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k <= d; ++k) {
            if (k == hi_i) continue;
            for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[k][i];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        const auto& worst = simplex[hi_i];
        along(xr, worst, -1.0);
        const double fr = ev(xr);
        best.offer(xr, fr);

        if (fr < fv[lo_i]) {
            along(xe, worst, -2.0);
            const double fe = ev(xe);
            best.offer(xe, fe);
            if (fe < fr) {
                simplex[hi_i] = xe;
                fv[hi_i] = fe;
            } else {
                simplex[hi_i] = xr;
                fv[hi_i] = fr;
            }
            continue;
        }
        if (fr < fv[next_i]) {
            simplex[hi_i] = xr;
            fv[hi_i] = fr;
            continue;
        }

        bool contracted = false;
        if (fr < fv[hi_i]) {
            along(xc, xr, 0.5);  // outside contraction
            const double fc = ev(xc);
            best.offer(xc, fc);
            if (fc <= fr) {
                simplex[hi_i] = xc;
                fv[hi_i] = fc;
                contracted = true;
            }
        } else {
            along(xc, worst, 0.5);  // inside contraction
            const double fc = ev(xc);
            best.offer(xc, fc);
            if (fc < fv[hi_i]) {
                simplex[hi_i] = xc;
                fv[hi_i] = fc;
                contracted = true;
            }
        }
        if (contracted) continue;

        // Shrink toward the best vertex.
        const std::vector<double> anchor = simplex[lo_i];
        for (std::size_t k = 0; k <= d; ++k) {
            if (k == lo_i) continue;
            for (std::size_t i = 0; i < d; ++i)
                simplex[k][i] = anchor[i] + 0.5 * (simplex[k][i] - anchor[i]);
            clamp(simplex[k]);
            fv[k] = ev(simplex[k]);
            best.offer(simplex[k], fv[k]);
        }
    }
}

std::unique_ptr<LocalSearcher> make_searcher(SearcherKind kind, SearchConfig config) {
    switch (kind) {
        case SearcherKind::Mtsls1: return std::make_unique<Mtsls1Searcher>(config);
        case SearcherKind::QuasiNewton: return std::make_unique<QuasiNewtonSearcher>(config);
        case SearcherKind::NelderMead: return std::make_unique<NelderMeadSearcher>(config);
    }
    return nullptr;
}

}  // namespace hiacor::ls
