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

#ifndef PARTONLOOP_MAJORANA_H
#define PARTONLOOP_MAJORANA_H

#include <cstdint>
#include <string>
#include <vector>

#include "partonloop/pauli_string.h"

namespace partonloop {

/// i^phase * g_{m_1} g_{m_2} ... with strictly increasing indices.
struct MajoranaMonomial {
    uint8_t phase = 0;
    std::vector<uint32_t> modes;

    /// i g_a g_b.
    static MajoranaMonomial bilinear(uint32_t a, uint32_t b);

    /// this <- this * other, using g^2 = 1 and anticommutation.
    MajoranaMonomial &operator*=(const MajoranaMonomial &other);
    MajoranaMonomial operator*(const MajoranaMonomial &other) const;
    bool operator==(const MajoranaMonomial &other) const = default;

    bool is_even() const {
        return (modes.size() & 1) == 0;
    }
    std::string str() const;
};

/// Jordan-Wigner image on num_modes/2 qubits: g_{2k} = Z..Z X_k, g_{2k+1} = Z..Z Y_k.
PauliString jordan_wigner(const MajoranaMonomial &m, size_t num_qubits);

/// Four-bit local algebra for one site: legs encoded as bits 0..3 of a mask.
/// Returns the phase exponent picked up when left-multiplying `mask_a` by `mask_b`
/// as ordered monomials, and writes the product mask.
uint8_t local_product_phase(uint8_t mask_a, uint8_t mask_b, uint8_t *out_mask);

}  // namespace partonloop

#endif
