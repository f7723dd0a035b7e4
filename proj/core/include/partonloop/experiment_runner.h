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


#ifndef PARTONLOOP_EXPERIMENT_RUNNER_H
#define PARTONLOOP_EXPERIMENT_RUNNER_H

#include <cstdint>
#include <string>
#include <vector>

#include "partonloop/config.h"
#include "partonloop/loop_engine.h"
#include "partonloop/stats.h"

namespace partonloop {

/// Bumped whenever a CSV column is added, removed or reinterpreted.
inline constexpr int kCsvSchemaVersion = 1;

/// One aggregated estimator at one sweep point.
///
/// Crosscheck identities appear as rows whose estimator starts with "xc_"; their mean is the
/// fraction of trajectories on which the identity held and pass is 1 only if it held on all.
/// Ordinary rows have pass = -1. wall_time is kept out of the CSV so reruns are byte-identical.
struct ResultRow {
    std::string config_hash;
    std::string engine;
    uint32_t lx = 0;
    uint32_t ly = 0;
    double p = 0;
    double q = 0;
    std::string estimator;
    /// Interval length for entropy rows, -1 where it does not apply.
    int64_t ell = -1;
    double mean = 0;
    double std_error = 0;
    uint64_t samples = 0;
    int pass = -1;
    double wall_time = 0;
};

struct RunReport {
    std::vector<ResultRow> rows;
    double wall_time = 0;
    unsigned threads = 1;
};

/// Interval lengths reported by entropy_profile: 1, 2, 3 and then roughly 1.5x steps up to lx/2.
std::vector<uint32_t> profile_lengths(uint32_t lx);
/// Interval start columns averaged over by the entropy estimators (at most 8, evenly spaced).
std::vector<uint32_t> cut_starts(uint32_t lx);

/// Signed (1/L) sum over top-row pairs of <Z_i Z_j>, read from the tracked pairing.
double signed_linear_order(const PairingState &state);

/// Runs every sweep point of a validated config. Results do not depend on the thread count.
RunReport run_experiment(const ExperimentConfig &config, unsigned threads = 1);

std::string csv_header();
std::string to_csv(const std::vector<ResultRow> &rows);
/// Parses to_csv output. Rejects other schema versions.
std::vector<ResultRow> parse_csv(const std::string &text);

/// Metadata sidecar: config echo, hash, seed, rng family, git hash, threads, wall times.
std::string sidecar_json(const ExperimentConfig &config, const RunReport &report, const std::string &git_hash);

enum class FitAxis { l, p, q, ell };
FitAxis parse_fit_axis(const std::string &name);

/// How row means are turned into fit ordinates.
///   none: the mean itself.
///   per_site: mean / lx.
///   size_ratio: mean(2L) / mean(L) at equal x, grouped by L. At a scale-invariant point the ratio
///       is L independent, so crossing_point on it locates the transition without an exponent.
enum class FitTransform { none, per_site, size_ratio };
FitTransform parse_fit_transform(const std::string &name);

/// Fits one estimator's rows against the chosen axis. crossing_point groups rows by lx.
FitResult fit_rows(
    const std::vector<ResultRow> &rows,
    FitModel model,
    const std::string &estimator,
    FitAxis x,
    FitTransform transform = FitTransform::none);

}  // namespace partonloop

#endif
