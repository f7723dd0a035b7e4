// Copyright 2026 The partonloop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARTONLOOP_STATS_H
#define PARTONLOOP_STATS_H

#include <cstddef>
#include <string>
#include <vector>

namespace partonloop {

struct Estimate {
    double mean = 0;
    double std_error = 0;
    size_t samples = 0;
};

/// Mean with a batch-means standard error over `batches` contiguous batches.
/// With fewer samples than batches the standard error of the mean is used.
Estimate batch_means(const std::vector<double> &values, size_t batches = 32);

enum class FitModel { log_growth, exp_decay, crossing_point };

FitModel parse_fit_model(const std::string &name);
std::string fit_model_name(FitModel m);

struct FitPoint {
    double x;
    double y;
    double err;
    /// Curve label (system size) for crossing_point; ignored otherwise.
    double group = 0;
};

struct FitResult {
    FitModel model;
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<double> errors;
    double chi2 = 0;
    size_t points = 0;
};

/// log_growth: y = a (ln x + ln ln x) + b.
/// exp_decay:  y = A exp(-x / xi), fitted on ln y.
/// crossing_point: x where curves of successive groups intersect (linear interpolation),
///     averaged over successive group pairs.
/// Throws std::invalid_argument when there are too few points or the design is degenerate.
FitResult fit_scaling(const std::vector<FitPoint> &points, FitModel model);

/// Weighted linear least squares y ~ X beta. Returns beta and fills parameter errors and chi^2.
std::vector<double> linear_least_squares(
    const std::vector<std::vector<double>> &design,
    const std::vector<double> &y,
    const std::vector<double> &err,
    std::vector<double> *param_err,
    double *chi2);

}  // namespace partonloop

#endif
