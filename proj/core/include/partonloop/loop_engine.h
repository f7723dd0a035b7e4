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

#ifndef PARTONLOOP_LOOP_ENGINE_H
#define PARTONLOOP_LOOP_ENGINE_H

#include <cstdint>
#include <memory>
#include <vector>

#include "partonloop/lattice.h"
#include "partonloop/majorana.h"
#include "partonloop/record.h"
#include "partonloop/rng.h"
#include "partonloop/stats.h"

namespace partonloop {

/// Whether a sweep simulates outcomes and pair signs, or only strand connectivity.
enum class SignMode : uint8_t { tracked, connectivity_only };

/// Perfect matching of all Majorana legs with orientation signs.
///
/// sign[a] = <i g_a g_partner[a]>, so sign[partner[a]] = -sign[a]. Legs of
/// unmeasured sites are the frontier: they stay paired with whatever strand
/// ends there but may not be measured.
struct PairingState {
    std::shared_ptr<const Lattice> lattice;
    std::vector<uint32_t> partner;
    std::vector<int8_t> sign;
    std::vector<uint8_t> measured;
    SignMode mode = SignMode::tracked;

    bool is_frontier(uint32_t majorana) const {
        return !lattice->is_measured(Lattice::site_of_majorana(majorana));
    }
    /// <i g_a g_b> for a matched pair; throws when a and b are not partners.
    int pair_sign(uint32_t a, uint32_t b) const;
    /// Throws std::logic_error unless partner is a fixed-point-free involution with antisymmetric signs.
    void check_invariants() const;
};

enum class TwoSiteClass : uint8_t { a, b, c };

struct ZZEdge {
    uint32_t i;
    uint32_t j;
    int8_t sign;
    bool operator==(const ZZEdge &other) const = default;
};

/// Per-trajectory loop observables, merged by summation.
struct LoopStats {
    uint64_t trajectories = 0;
    uint64_t g4_hits = 0;
    uint64_t spanning_count = 0;
    uint64_t cut_strands = 0;
    std::vector<uint64_t> loop_length_histogram;

    void merge(const LoopStats &other);
};

struct SweepResult {
    PairingState state;
    MeasurementRecord record;
};

PairingState build_initial_matching(std::shared_ptr<const Lattice> lattice, SignMode mode = SignMode::tracked);
PairingState build_initial_matching(const LatticeSpec &spec, SignMode mode = SignMode::tracked);

/// Measures i g_a g_b with a uniformly random outcome unless already determined by the pairing.
int measure_bilinear(PairingState &state, uint32_t a, uint32_t b, CounterRng &rng);

/// As measure_bilinear but postselected on outcome m; a determined pair must already carry m.
void measure_bilinear_postselected(PairingState &state, uint32_t a, uint32_t b, int m);

/// Expectation in the gauge-projected state of a product of Wen-model Paulis.
/// Returns +1 or -1 when determined, 0 when the outcome would be random.
int physical_expectation(const PairingState &state, const std::vector<SitePauli> &wen_paulis);

/// Expectation of a Majorana monomial whose modes are closed under the pairing (0 otherwise).
int monomial_expectation(const PairingState &state, const MajoranaMonomial &m);

struct TileResult {
    int outcome;
    bool forced;
};

/// Measures the Wen-model Pauli `wen` on `site`. In connectivity-only mode
/// outcome is 0 and no randomness is consumed.
TileResult apply_tile(PairingState &state, uint32_t site, Basis wen, CounterRng &outcome_rng);

Basis sample_basis(const BasisDistribution &d, CounterRng &rng);

/// Samples toric-code bases per translate_protocol and applies tiles in raster order.
SweepResult run_bulk_sweep(
    std::shared_ptr<const Lattice> lattice,
    const Protocol &protocol,
    CounterRng &basis_rng,
    CounterRng &outcome_rng,
    SignMode mode = SignMode::tracked);

/// Applies a fixed toric-code basis per measured site (in measured_sites() order).
SweepResult run_fixed_sweep(
    std::shared_ptr<const Lattice> lattice,
    const std::vector<Basis> &toric_bases,
    CounterRng &outcome_rng,
    SignMode mode = SignMode::tracked);

TwoSiteClass classify_two_site(const PairingState &state);
double two_site_mie(TwoSiteClass c);

Estimate watermelon_g4(const LatticeSpec &spec, const Protocol &protocol, uint64_t samples, uint64_t seed);

uint32_t spanning_number(const PairingState &state);
double two_boundary_mie(const PairingState &state);

/// Strand-counting entropy of top-boundary sites [start, start + length) on the ring.
double boundary_cut_entropy(const PairingState &state, uint32_t start, uint32_t length);

/// correlated[i * L + j] is 1 when Z_i Z_j is (up to sign) a stabilizer of the boundary.
std::vector<uint8_t> zz_correlation_matrix(const PairingState &state);

std::vector<ZZEdge> zz_stabilizer_set(const PairingState &state);
double ea_order(const PairingState &state);

/// Sizes of the clusters of mutually ZZ-correlated boundary qubits.
std::vector<uint32_t> zz_cluster_sizes(const PairingState &state);

}  // namespace partonloop

#endif
