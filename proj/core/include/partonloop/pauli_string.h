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

#ifndef PARTONLOOP_PAULI_STRING_H
#define PARTONLOOP_PAULI_STRING_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "partonloop/lattice.h"

namespace partonloop {

/// i^phase * prod_q X_q^x_q Z_q^z_q, bit-packed 64 qubits per word.
///
/// The per-qubit X factor is ordered before the Z factor, so Y = i X Z has
/// x = z = 1 and contributes one unit of phase.
struct PauliString {
    size_t num_qubits = 0;
    std::vector<uint64_t> xs;
    std::vector<uint64_t> zs;
    uint8_t phase = 0;

    PauliString() = default;
    explicit PauliString(size_t n);

    /// Parses "+XYZ_", "-IZZ", "iXX" style text ('_' and 'I' are identity).
    static PauliString from_str(const std::string &text);

    size_t num_words() const {
        return xs.size();
    }
    bool x(size_t q) const {
        return (xs[q >> 6] >> (q & 63)) & 1;
    }
    bool z(size_t q) const {
        return (zs[q >> 6] >> (q & 63)) & 1;
    }
    /// 'I', 'X', 'Y' or 'Z' ignoring phase.
    char at(size_t q) const;

    /// Multiplies a Hermitian Pauli on qubit q into this string (from the right).
    void mul_site(size_t q, Basis b);

    bool commutes(const PauliString &other) const;
    bool is_identity() const;
    size_t weight() const;

    /// this <- this * other.
    PauliString &operator*=(const PauliString &other);
    PauliString operator*(const PauliString &other) const;
    bool operator==(const PauliString &other) const;
    bool operator!=(const PauliString &other) const {
        return !(*this == other);
    }

    /// True when the operator is Hermitian (overall sign is real).
    bool is_hermitian() const;
    /// +1 or -1 for a Hermitian string.
    int sign() const;
    void negate() {
        phase = (phase + 2) & 3;
    }
    /// Same Pauli letters, compared ignoring phase.
    bool same_letters(const PauliString &other) const;

    std::string str() const;
};

}  // namespace partonloop

#endif
