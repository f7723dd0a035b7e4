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

#include "partonloop/majorana.h"

#include <algorithm>
#include <stdexcept>

using namespace partonloop;

MajoranaMonomial MajoranaMonomial::bilinear(uint32_t a, uint32_t b) {
    if (a == b) {
        throw std::invalid_argument("bilinear needs distinct modes");
    }
    MajoranaMonomial m;
    m.phase = a < b ? 1 : 3;
    m.modes = {std::min(a, b), std::max(a, b)};
    return m;
}

MajoranaMonomial &MajoranaMonomial::operator*=(const MajoranaMonomial &other) {
    std::vector<uint32_t> out;
    out.reserve(modes.size() + other.modes.size());
    // Sign = (-1)^(number of pairs (i in this, j in other) with i > j).
    size_t swaps = 0;
    size_t ia = 0;
    for (uint32_t j : other.modes) {
        while (ia < modes.size() && modes[ia] < j) {
            ia++;
        }
        size_t greater = modes.size() - ia;
        if (ia < modes.size() && modes[ia] == j) {
            greater--;
        }
        swaps += greater;
    }
    std::set_symmetric_difference(
        modes.begin(), modes.end(), other.modes.begin(), other.modes.end(), std::back_inserter(out));
    modes = std::move(out);
    phase = (uint8_t)((phase + other.phase + 2 * (swaps & 1)) & 3);
    return *this;
}

MajoranaMonomial MajoranaMonomial::operator*(const MajoranaMonomial &other) const {
    MajoranaMonomial r = *this;
    r *= other;
    return r;
}

std::string MajoranaMonomial::str() const {
    static const char *prefixes[4] = {"+", "+i", "-", "-i"};
    std::string s = prefixes[phase & 3];
    for (uint32_t m : modes) {
        s += " g" + std::to_string(m);
    }
    return s;
}

PauliString partonloop::jordan_wigner(const MajoranaMonomial &m, size_t num_qubits) {
    PauliString p(num_qubits);
    for (uint32_t mode : m.modes) {
        size_t k = mode >> 1;
        if (k >= num_qubits) {
            throw std::out_of_range("Majorana mode outside the Jordan-Wigner chain");
        }
        PauliString g(num_qubits);
        for (size_t t = 0; t < k; t++) {
            g.mul_site(t, Basis::Z);
        }
        g.mul_site(k, (mode & 1) ? Basis::Y : Basis::X);
        p *= g;
    }
    p.phase = (uint8_t)((p.phase + m.phase) & 3);
    return p;
}

uint8_t partonloop::local_product_phase(uint8_t mask_a, uint8_t mask_b, uint8_t *out_mask) {
    unsigned swaps = 0;
    for (int j = 0; j < 4; j++) {
        if (mask_b & (1 << j)) {
            for (int i = j + 1; i < 4; i++) {
                swaps += (mask_a >> i) & 1;
            }
        }
    }
    *out_mask = mask_a ^ mask_b;
    return (uint8_t)(2 * (swaps & 1));
}
