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


#ifndef PARTONLOOP_GAUSSIAN_ENGINE_H
#define PARTONLOOP_GAUSSIAN_ENGINE_H

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "partonloop/lattice.h"
#include "partonloop/rng.h"

namespace partonloop {

/// M_ab = <i gamma_a gamma_b> for a != b. Pure states satisfy M * M = -1.
using Covariance = Eigen::MatrixXd;

/// Unit measurement axis in Wen labels: x is the bond parity, z the identity, y the swap.
struct MeasureAxis {
    double nx;
    double ny;
    double nz;

    static MeasureAxis from_angles(double theta, double phi);
    MeasureAxis operator-() const {
        return {-nx, -ny, -nz};
    }
    /// Throws std::invalid_argument unless |n| = 1 within 1e-12.
    void validate() const;
};

struct KrausParams {
    double re_alpha;
    double im_alpha;
    double prefactor;
    bool projective;
};

/// Covariance of the four legs of a site after measuring along n with the + outcome.
Eigen::Matrix4d tensor_covariance(const MeasureAxis &n);

/// Parameters of K_n = prefactor * exp(-alpha * i gamma_i gamma_{i+1}).
/// |n_x| >= 1 - 1e-9 sets the projective flag and leaves re_alpha at +-infinity.
KrausParams kraus_params(const MeasureAxis &n);

struct KrausResult {
    int outcome;
    double born_prob;
    double other_prob;
};

/// Applies K_{+n} or K_{-n} to modes (i, i+1 mod 2N). forced = +-1 postselects; 0 samples.
KrausResult apply_kraus(Covariance &m, uint32_t i, const MeasureAxis &n, CounterRng *rng, int forced = 0);

/// Initial dimer covariance of the chain below the bottom row of a cylinder.
Covariance initial_chain_covariance(const Lattice &lattice);

double gaussian_entropy(const Covariance &m, const std::vector<uint32_t> &modes);

/// Entropy of chain sites [start, start + length) on the ring, i.e. of their 2 * length modes.
double chain_cut_entropy(const Covariance &m, uint32_t start, uint32_t length);

/// max |M M + 1|.
double purity_drift(const Covariance &m);

/// Throws std::logic_error unless M is antisymmetric (1e-12) with singular values <= 1 + 1e-10.
void check_physical(const Covariance &m);

/// Newton-Schulz step back onto M * M = -1, followed by antisymmetrization.
void reorthogonalize(Covariance &m);

struct WeightedAxis {
    MeasureAxis n;
    double weight;
};

/// Distribution over unoriented axes in toric-code labels. Every atom needs an antipode of
/// equal weight. A nonzero spread tilts each sampled axis toward +-y by a uniform angle in
/// [-spread, spread].
struct AxisDistribution {
    std::vector<WeightedAxis> atoms;
    double spread = 0;

    static AxisDistribution pauli_pq(double p, double q);
    static AxisDistribution smeared(double p, double q, double spread);

    /// Throws std::invalid_argument for negative weights, zero total, or missing antipodes.
    void validate() const;
    MeasureAxis sample(CounterRng &rng) const;
};

/// Toric-label axis rewritten in Wen labels: Hadamard (x <-> z) on B sites.
MeasureAxis wen_axis(const MeasureAxis &toric, Sublattice sublattice);

struct GaussianRun {
    Covariance m;
    std::vector<int8_t> outcomes;
    double max_drift;
    uint64_t reorthogonalizations;
};

/// Processes the bulk of a top-open cylinder in raster order with the given toric axes
/// (one per measured site).
GaussianRun run_axes(const Lattice &lattice, const std::vector<MeasureAxis> &toric_axes, CounterRng &outcome_rng);

/// Samples axes from the distribution on the axis stream, then calls run_axes.
GaussianRun run_general_protocol(
    const LatticeSpec &spec, const AxisDistribution &w, CounterRng &axis_rng, CounterRng &outcome_rng);

}  // namespace partonloop

#endif
