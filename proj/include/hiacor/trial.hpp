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
#ifndef HIACOR_TRIAL_HPP
#define HIACOR_TRIAL_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace hiacor {

struct TracePoint {
    std::uint64_t evals = 0;
    double best_error = 0.0;

    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

/// Outcome of one optimizer run on one problem.
struct TrialRecord {
    std::string problem_label;
    std::uint64_t seed = 0;
    double final_error = 0.0;  ///< f(x) - f(x*) of the best point, not thresholded
    std::uint64_t evals_used = 0;
    std::vector<TracePoint> trace;  ///< best-so-far error, non-increasing

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

}  // namespace hiacor

#endif  // HIACOR_TRIAL_HPP
