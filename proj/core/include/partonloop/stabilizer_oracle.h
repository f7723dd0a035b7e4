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

#ifndef PARTONLOOP_STABILIZER_ORACLE_H
#define PARTONLOOP_STABILIZER_ORACLE_H

#include <cstdint>
#include <vector>

#include "partonloop/lattice.h"
#include "partonloop/pauli_string.h"
#include "partonloop/record.h"
#include "partonloop/rng.h"

namespace partonloop {

using Region = std::vector<uint32_t>;

struct MeasureResult {
    int outcome;
    bool random;
};

/// Clifford given by the images of X_q and Z_q for each target, in local coordinates.
struct CliffordImages {
    std::vector<PauliString> x_images;
    std::vector<PauliString> z_images;
};

/// Signed stabilizer state with destabilizers (Aaronson-Gottesman layout).
class StabilizerTableau {
   public:
    explicit StabilizerTableau(size_t num_qubits);

    size_t num_qubits() const {
        return n_;
    }
    const std::vector<PauliString> &stabilizers() const {
        return stab_;
    }
    const std::vector<PauliString> &destabilizers() const {
        return destab_;
    }

    /// +1 or -1 when +-P is in the stabilizer group, 0 otherwise. P must be Hermitian.
    int expectation(const PauliString &p) const;

    /// Projective measurement of a Hermitian Pauli string.
    /// A nonzero `forced` value postselects a random outcome and must agree with a determined one.
    MeasureResult measure(const PauliString &p, CounterRng *rng, int forced = 0);

    /// Makes `sign * p` a stabilizer while keeping every earlier imposed term.
    /// Random outcomes are postselected; a determined wrong sign is repaired with a
    /// Pauli correction. Throws std::logic_error if p contradicts the imposed terms.
    void impose(const PauliString &p, int sign);

    /// Conjugates the state by a Pauli operator.
    void apply_pauli(const PauliString &p);

    void apply_x(size_t q);
    void apply_z(size_t q);
    void apply_h(size_t q);
    void apply_clifford(const std::vector<uint32_t> &targets, const CliffordImages &images);

    /// Throws std::logic_error if commutation relations or independence are broken.
    void check_invariants() const;

   private:
    size_t n_;
    std::vector<PauliString> stab_;
    std::vector<PauliString> destab_;
    std::vector<uint8_t> imposed_;
};

/// Rank over GF(2) of the Pauli letters (phases ignored).
size_t gf2_rank(const std::vector<PauliString> &rows);

/// Toric-code ground state on one qubit per lattice site (qubit index = site index).
/// All star and plaquette terms are +1; torus logicals take the configured sector.
StabilizerTableau prepare_toric_ground(const LatticeSpec &spec);

/// The Hadamard image of the toric ground state on the B sublattice.
StabilizerTableau prepare_wen_ground(const LatticeSpec &spec);

PauliString term_to_pauli(const PauliTerm &term, size_t num_qubits);

MeasureResult measure_pauli(StabilizerTableau &t, uint32_t site, Basis basis, CounterRng *rng, int forced = 0);

/// Replays a trajectory on the tableau. Outcomes the tableau finds random are
/// postselected to the recorded value; determined ones must agree with the record,
/// including its forced flag. Throws std::logic_error on any disagreement.
void replay_record(StabilizerTableau &t, const MeasurementRecord &record);

/// Entanglement entropy of a region in nats.
double entropy(const StabilizerTableau &t, const Region &region);

/// <Z_i Z_j> in {-1, 0, +1}.
int zz_expectation(const StabilizerTableau &t, uint32_t i, uint32_t j);

}  // namespace partonloop

#endif
