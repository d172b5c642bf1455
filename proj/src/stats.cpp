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
#include "hiacor/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace hiacor::stats {

double apply_threshold(double error, double threshold) noexcept {
    return error < threshold ? 0.0 : error;
}

double median(std::vector<double> values) {
    if (values.empty()) throw EmptyInput("median of an empty sample");
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return lower + (upper - lower) / 2.0;
}

Summary summarize(std::span<const double> errors, double threshold) {
    if (errors.empty()) throw EmptyInput("summarize needs at least one run");
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
    std::vector<double> v(errors.size());
    std::transform(errors.begin(), errors.end(), v.begin(),
                   [&](double e) { return apply_threshold(e, threshold); });
    Summary s;
    s.avg = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    s.med = median(std::move(v));
    return s;
}

Summary summarize(std::span<const TrialRecord> runs, double threshold) {
    std::vector<double> errors;
    errors.reserve(runs.size());
    for (const TrialRecord& r : runs) errors.push_back(r.final_error);
    return summarize(errors, threshold);
}

// --- Wilcoxon ----------------------------------------------------------------

double exact_signed_rank_p(std::size_t n, double t) {
    if (n == 0) return 1.0;
    if (n > 62) throw std::invalid_argument("exact signed-rank distribution limited to n <= 62");
    // counts[w] = number of subsets of {1..n} with rank sum w.
    const std::size_t total = n * (n + 1) / 2;
    std::vector<double> counts(total + 1, 0.0);
    counts[0] = 1.0;
    for (std::size_t r = 1; r <= n; ++r)
        for (std::size_t w = total; w >= r; --w) counts[w] += counts[w - r];
    const double limit = std::floor(t + 1e-9);
    double tail = 0.0;
    for (std::size_t w = 0; w <= total && static_cast<double>(w) <= limit; ++w) tail += counts[w];
    return std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(n)));
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    const WilcoxonOptions& options) {
    if (a.size() != b.size())
        throw std::invalid_argument("wilcoxon_signed_rank: samples differ in length");
    if (a.empty()) throw std::invalid_argument("wilcoxon_signed_rank: empty samples");

    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double v = a[i] - b[i];
        if (v != 0.0) d.push_back(v);
    }
    WilcoxonResult r;
    r.n = d.size();
    if (r.n == 0) return r;

    std::vector<std::size_t> order(r.n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return std::abs(d[x]) < std::abs(d[y]); });

    std::vector<double> rank(r.n);
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
    for (std::size_t i = 0; i < r.n;) {
        std::size_t j = i + 1;
        while (j < r.n && std::abs(d[order[j]]) == std::abs(d[order[i]])) ++j;
        const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) rank[order[k]] = mean_rank;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    for (std::size_t i = 0; i < r.n; ++i) (d[i] > 0.0 ? r.w_plus : r.w_minus) += rank[i];

    const double n = static_cast<double>(r.n);
    if (r.n <= options.exact_max_n && tie_term == 0.0) {
        r.exact = true;
        r.p_value = exact_signed_rank_p(r.n, std::min(r.w_plus, r.w_minus));
        return r;
    }
    const double mean = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if (!(var > 0.0)) {
        r.p_value = 1.0;
        return r;
    }
    double dev = std::abs(r.w_plus - mean);
    if (options.continuity_correction) dev = std::max(0.0, dev - 0.5);
    const double z = dev / std::sqrt(var);
    r.p_value = std::clamp(std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
    return r;
}

// --- Tables --------------------------------------------------------------------

std::string_view to_string(Metric m) { return m == Metric::Avg ? "avg" : "med"; }

Metric parse_metric(std::string_view text) {
    if (text == "avg" || text == "average") return Metric::Avg;
    if (text == "med" || text == "median") return Metric::Med;
    throw std::invalid_argument("unknown metric '" + std::string(text) + "' (expected avg or med)");
}

const SummaryRow* SummaryTable::find(std::string_view function) const noexcept {
    for (const SummaryRow& r : rows)
        if (r.function == function) return &r;
    return nullptr;
}

std::size_t count_optima(const SummaryTable& table, Metric metric, double threshold) {
    return static_cast<std::size_t>(std::count_if(table.rows.begin(), table.rows.end(), [&](const SummaryRow& r) {
        return apply_threshold(r.get(metric), threshold) == 0.0;
    }));
}

namespace {

std::set<std::string> function_set(const SummaryTable& t) {
    std::set<std::string> s;
    for (const SummaryRow& r : t.rows) {
        if (!s.insert(r.function).second)
            throw std::invalid_argument("summary '" + t.algorithm + "' lists " + r.function + " twice");
    }
    return s;
}

void require_same_functions(const SummaryTable& a, const SummaryTable& b) {
    if (function_set(a) != function_set(b))
        throw MismatchedFunctionSets("summaries '" + a.algorithm + "' and '" + b.algorithm +
                                     "' cover different functions");
}

}  // namespace

WilcoxonResult compare_tables(const SummaryTable& a, const SummaryTable& b, Metric metric,
                              const WilcoxonOptions& options) {
    require_same_functions(a, b);
    if (a.rows.empty()) throw EmptyInput("cannot compare empty summaries");
    std::vector<double> xa, xb;
    for (const SummaryRow& r : a.rows) {
        xa.push_back(r.get(metric));
        xb.push_back(b.find(r.function)->get(metric));
    }
    return wilcoxon_signed_rank(xa, xb, options);
}

std::vector<RankEntry> rank_algorithms(std::span<const SummaryTable> tables, double threshold) {
    std::vector<RankEntry> out;
    if (tables.empty()) return out;
    std::set<std::string> names;
    for (const SummaryTable& t : tables) {
        require_same_functions(tables.front(), t);
        if (!names.insert(t.algorithm).second)
            throw std::invalid_argument("duplicate algorithm '" + t.algorithm + "' in ranking");
    }
    for (const SummaryTable& t : tables) {
        // Sum in function-name order so the score does not depend on row order.
        std::vector<const SummaryRow*> rows;
        for (const SummaryRow& r : t.rows) rows.push_back(&r);
        std::sort(rows.begin(), rows.end(),
                  [](const SummaryRow* x, const SummaryRow* y) { return x->function < y->function; });
        RankEntry e;
        e.algorithm = t.algorithm;
        for (const SummaryRow* r : rows) e.score += r->avg_error + r->med_error;
        e.zero_median_count = count_optima(t, Metric::Med, threshold);
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const RankEntry& x, const RankEntry& y) {
        return x.score != y.score ? x.score < y.score : x.algorithm < y.algorithm;
    });
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].rank = i > 0 && out[i].score == out[i - 1].score ? out[i - 1].rank : i + 1;
    return out;
}

}  // namespace hiacor::stats
