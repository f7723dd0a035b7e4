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

#include "partonloop/pauli_string.h"

#include <bit>
#include <stdexcept>

using namespace partonloop;

PauliString::PauliString(size_t n) : num_qubits(n), xs((n + 63) / 64, 0), zs((n + 63) / 64, 0), phase(0) {
}

PauliString PauliString::from_str(const std::string &text) {
    size_t k = 0;
    uint8_t ph = 0;
    if (k < text.size() && (text[k] == '+' || text[k] == '-')) {
        ph = text[k] == '-' ? 2 : 0;
        k++;
    }
    if (k < text.size() && text[k] == 'i') {
        ph = (ph + 1) & 3;
        k++;
    }
    PauliString p(text.size() - k);
    for (size_t q = 0; k < text.size(); k++, q++) {
        char c = text[k];
        if (c == '_' || c == 'I') {
            continue;
        }
        p.mul_site(q, parse_basis(c));
    }
    p.phase = (p.phase + ph) & 3;
    return p;
}

char PauliString::at(size_t q) const {
    return "IXZY"[(int)x(q) + 2 * (int)z(q)];
}

void PauliString::mul_site(size_t q, Basis b) {
    uint64_t bit = uint64_t{1} << (q & 63);
    size_t w = q >> 6;
    bool bx = b != Basis::Z;
    bool bz = b != Basis::X;
    uint8_t r = b == Basis::Y ? 1 : 0;
    if (bx && (zs[w] & bit)) {
        r += 2;
    }
    phase = (phase + r) & 3;
    if (bx) {
        xs[w] ^= bit;
    }
    if (bz) {
        zs[w] ^= bit;
    }
}

bool PauliString::commutes(const PauliString &other) const {
    uint64_t acc = 0;
    for (size_t w = 0; w < xs.size(); w++) {
        acc ^= (xs[w] & other.zs[w]) ^ (zs[w] & other.xs[w]);
    }
    return (std::popcount(acc) & 1) == 0;
}

bool PauliString::is_identity() const {
    for (size_t w = 0; w < xs.size(); w++) {
        if (xs[w] | zs[w]) {
            return false;
        }
    }
    return true;
}

size_t PauliString::weight() const {
    size_t t = 0;
    for (size_t w = 0; w < xs.size(); w++) {
        t += std::popcount(xs[w] | zs[w]);
    }
    return t;
}

PauliString &PauliString::operator*=(const PauliString &other) {
    if (other.num_qubits != num_qubits) {
        throw std::invalid_argument("Pauli string size mismatch");
    }
    unsigned twists = 0;
    for (size_t w = 0; w < xs.size(); w++) {
        twists += std::popcount(zs[w] & other.xs[w]);
        xs[w] ^= other.xs[w];
        zs[w] ^= other.zs[w];
    }
    phase = (uint8_t)((phase + other.phase + 2 * twists) & 3);
    return *this;
}

PauliString PauliString::operator*(const PauliString &other) const {
    PauliString r = *this;
    r *= other;
    return r;
}

bool PauliString::operator==(const PauliString &other) const {
    return phase == other.phase && same_letters(other);
}

bool PauliString::same_letters(const PauliString &other) const {
    return num_qubits == other.num_qubits && xs == other.xs && zs == other.zs;
}

static unsigned y_count(const PauliString &p) {
    unsigned t = 0;
    for (size_t w = 0; w < p.xs.size(); w++) {
        t += std::popcount(p.xs[w] & p.zs[w]);
    }
    return t;
}

bool PauliString::is_hermitian() const {
    return ((phase + 4 - (y_count(*this) & 3)) & 1) == 0;
}

int PauliString::sign() const {
    unsigned r = (phase + 4 - (y_count(*this) & 3)) & 3;
    if (r & 1) {
        throw std::logic_error("sign() of a non-Hermitian Pauli string");
    }
    return r == 0 ? +1 : -1;
}

std::string PauliString::str() const {
    static const char *prefixes[4] = {"+", "i", "-", "-i"};
    std::string out = prefixes[(phase + 4 - (y_count(*this) & 3)) & 3];
    for (size_t q = 0; q < num_qubits; q++) {
        char c = at(q);
        out.push_back(c == 'I' ? '_' : c);
    }
    return out;
}
