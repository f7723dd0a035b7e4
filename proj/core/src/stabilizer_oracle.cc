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

#include "partonloop/stabilizer_oracle.h"

#include <bit>
#include <cmath>
#include <stdexcept>

using namespace partonloop;

StabilizerTableau::StabilizerTableau(size_t num_qubits) : n_(num_qubits), imposed_(num_qubits, 0) {
    stab_.reserve(n_);
    destab_.reserve(n_);
    for (size_t q = 0; q < n_; q++) {
        PauliString z(n_);
        z.mul_site(q, Basis::Z);
        stab_.push_back(std::move(z));
        PauliString x(n_);
        x.mul_site(q, Basis::X);
        destab_.push_back(std::move(x));
    }
}

int StabilizerTableau::expectation(const PauliString &p) const {
    for (const auto &s : stab_) {
        if (!s.commutes(p)) {
            return 0;
        }
    }
    PauliString acc(n_);
    for (size_t k = 0; k < n_; k++) {
        if (!destab_[k].commutes(p)) {
            acc *= stab_[k];
        }
    }
    if (!acc.same_letters(p)) {
        throw std::logic_error("stabilizer decomposition failed; tableau is corrupt");
    }
    int d = (p.phase - acc.phase + 4) & 3;
    if (d & 1) {
        throw std::invalid_argument("expectation of a non-Hermitian Pauli string");
    }
    return d == 0 ? +1 : -1;
}

MeasureResult StabilizerTableau::measure(const PauliString &p, CounterRng *rng, int forced) {
    if (p.num_qubits != n_ || !p.is_hermitian()) {
        throw std::invalid_argument("measured operator must be a Hermitian Pauli string on the tableau's qubits");
    }
    size_t pivot = n_;
    for (size_t k = 0; k < n_; k++) {
        if (!stab_[k].commutes(p)) {
            pivot = k;
            break;
        }
    }
    if (pivot == n_) {
        int v = expectation(p);
        if (forced != 0 && forced != v) {
            throw std::logic_error("postselected outcome contradicts a determined measurement");
        }
        return {v, false};
    }
    int outcome = forced;
    if (outcome == 0) {
        if (rng == nullptr) {
            throw std::invalid_argument("random measurement without an rng");
        }
        outcome = rng->coin();
    }
    for (size_t k = 0; k < n_; k++) {
        if (k != pivot && !stab_[k].commutes(p)) {
            stab_[k] *= stab_[pivot];
            imposed_[k] = 0;
        }
        if (k != pivot && !destab_[k].commutes(p)) {
            destab_[k] *= stab_[pivot];
        }
    }
    destab_[pivot] = stab_[pivot];
    stab_[pivot] = p;
    imposed_[pivot] = 0;
    if (outcome < 0) {
        stab_[pivot].negate();
    }
    return {outcome, true};
}

void StabilizerTableau::impose(const PauliString &p, int sign) {
    PauliString target = p;
    if (sign < 0) {
        target.negate();
    }
    for (size_t k = 0; k < n_; k++) {
        if (!stab_[k].commutes(target)) {
            MeasureResult r = measure(target, nullptr, +1);
            (void)r;
            for (size_t j = 0; j < n_; j++) {
                if (stab_[j] == target) {
                    imposed_[j] = 1;
                }
            }
            return;
        }
    }
    if (expectation(target) == +1) {
        return;
    }
    // target = -prod_{i in S} stab_i. Rebase so that the product is a single row j,
    // then flip that row alone with its destabilizer.
    std::vector<size_t> support;
    for (size_t k = 0; k < n_; k++) {
        if (!destab_[k].commutes(target)) {
            support.push_back(k);
        }
    }
    size_t j = n_;
    for (size_t k : support) {
        if (!imposed_[k]) {
            j = k;
            break;
        }
    }
    if (j == n_) {
        throw std::logic_error("imposed term contradicts earlier imposed terms");
    }
    PauliString row(n_);
    for (size_t k : support) {
        row *= stab_[k];
        if (k != j) {
            destab_[k] *= destab_[j];
        }
    }
    stab_[j] = row;
    apply_pauli(destab_[j]);
    imposed_[j] = 1;
}

void StabilizerTableau::apply_pauli(const PauliString &p) {
    for (auto *rows : {&stab_, &destab_}) {
        for (auto &r : *rows) {
            if (!r.commutes(p)) {
                r.negate();
            }
        }
    }
}

void StabilizerTableau::apply_x(size_t q) {
    for (auto *rows : {&stab_, &destab_}) {
        for (auto &r : *rows) {
            if (r.z(q)) {
                r.negate();
            }
        }
    }
}

void StabilizerTableau::apply_z(size_t q) {
    for (auto *rows : {&stab_, &destab_}) {
        for (auto &r : *rows) {
            if (r.x(q)) {
                r.negate();
            }
        }
    }
}

void StabilizerTableau::apply_h(size_t q) {
    uint64_t bit = uint64_t{1} << (q & 63);
    size_t w = q >> 6;
    for (auto *rows : {&stab_, &destab_}) {
        for (auto &r : *rows) {
            bool x = r.xs[w] & bit;
            bool z = r.zs[w] & bit;
            if (x && z) {
                r.negate();
            }
            if (x != z) {
                r.xs[w] ^= bit;
                r.zs[w] ^= bit;
            }
        }
    }
}

void StabilizerTableau::apply_clifford(const std::vector<uint32_t> &targets, const CliffordImages &images) {
    size_t k = targets.size();
    if (images.x_images.size() != k || images.z_images.size() != k) {
        throw std::invalid_argument("Clifford needs one X and one Z image per target");
    }
    auto embed = [&](const PauliString &local) {
        if (local.num_qubits != k) {
            throw std::invalid_argument("Clifford image has the wrong width");
        }
        // Both strings use the X-before-Z layout, so copying bits and phase is exact.
        PauliString out(n_);
        for (size_t t = 0; t < k; t++) {
            uint32_t q = targets[t];
            if (local.x(t)) {
                out.xs[q >> 6] |= uint64_t{1} << (q & 63);
            }
            if (local.z(t)) {
                out.zs[q >> 6] |= uint64_t{1} << (q & 63);
            }
        }
        out.phase = local.phase;
        return out;
    };
    std::vector<PauliString> xi;
    std::vector<PauliString> zi;
    for (size_t t = 0; t < k; t++) {
        xi.push_back(embed(images.x_images[t]));
        zi.push_back(embed(images.z_images[t]));
    }
    for (auto *rows : {&stab_, &destab_}) {
        for (auto &r : *rows) {
            PauliString image(n_);
            bool touched = false;
            for (size_t t = 0; t < k; t++) {
                uint32_t q = targets[t];
                uint64_t bit = uint64_t{1} << (q & 63);
                size_t w = q >> 6;
                if (r.xs[w] & bit) {
                    image *= xi[t];
                    r.xs[w] ^= bit;
                    touched = true;
                }
                if (r.zs[w] & bit) {
                    image *= zi[t];
                    r.zs[w] ^= bit;
                    touched = true;
                }
            }
            if (touched) {
                r *= image;
            }
        }
    }
}

void StabilizerTableau::check_invariants() const {
    for (size_t a = 0; a < n_; a++) {
        if (!stab_[a].is_hermitian() || !destab_[a].is_hermitian()) {
            throw std::logic_error("non-Hermitian tableau row");
        }
        for (size_t b = 0; b < n_; b++) {
            if (!stab_[a].commutes(stab_[b])) {
                throw std::logic_error("stabilizers do not commute");
            }
            if (!destab_[a].commutes(destab_[b])) {
                throw std::logic_error("destabilizers do not commute");
            }
            if (stab_[a].commutes(destab_[b]) != (a != b)) {
                throw std::logic_error("destabilizer pairing broken");
            }
        }
    }
    if (gf2_rank(stab_) != n_) {
        throw std::logic_error("stabilizers are not independent");
    }
}

static size_t rank_of_bit_rows(std::vector<std::vector<uint64_t>> &m, size_t num_bits) {
    size_t rank = 0;
    for (size_t col = 0; col < num_bits && rank < m.size(); col++) {
        size_t w = col >> 6;
        uint64_t bit = uint64_t{1} << (col & 63);
        size_t pivot = rank;
        while (pivot < m.size() && !(m[pivot][w] & bit)) {
            pivot++;
        }
        if (pivot == m.size()) {
            continue;
        }
        std::swap(m[rank], m[pivot]);
        for (size_t r = 0; r < m.size(); r++) {
            if (r != rank && (m[r][w] & bit)) {
                for (size_t k = 0; k < m[r].size(); k++) {
                    m[r][k] ^= m[rank][k];
                }
            }
        }
        rank++;
    }
    return rank;
}

size_t partonloop::gf2_rank(const std::vector<PauliString> &rows) {
    if (rows.empty()) {
        return 0;
    }
    size_t words = rows[0].num_words();
    std::vector<std::vector<uint64_t>> m;
    m.reserve(rows.size());
    for (const auto &r : rows) {
        std::vector<uint64_t> v(2 * words);
        for (size_t w = 0; w < words; w++) {
            v[w] = r.xs[w];
            v[words + w] = r.zs[w];
        }
        m.push_back(std::move(v));
    }
    return rank_of_bit_rows(m, 128 * words);
}

PauliString partonloop::term_to_pauli(const PauliTerm &term, size_t num_qubits) {
    PauliString p(num_qubits);
    for (const auto &f : term.factors) {
        p.mul_site(f.site, f.basis);
    }
    if (term.sign < 0) {
        p.negate();
    }
    return p;
}

StabilizerTableau partonloop::prepare_toric_ground(const LatticeSpec &spec) {
    Lattice lat(spec);
    size_t n = lat.num_sites();
    std::vector<PauliString> terms;
    for (const auto &t : lat.stabilizer_terms()) {
        terms.push_back(term_to_pauli(t, n));
    }
    for (const auto &t : lat.logical_terms()) {
        terms.push_back(term_to_pauli(t, n));
    }
    if (gf2_rank(terms) != n) {
        throw std::logic_error("stabilizer and logical terms do not fix a unique state");
    }
    StabilizerTableau tab(n);
    for (const auto &p : terms) {
        tab.impose(p, +1);
        if (tab.expectation(p) != +1) {
            throw std::logic_error("prepared state violates a stabilizer term");
        }
    }
    return tab;
}

StabilizerTableau partonloop::prepare_wen_ground(const LatticeSpec &spec) {
    StabilizerTableau tab = prepare_toric_ground(spec);
    Lattice lat(spec);
    for (uint32_t s = 0; s < lat.num_sites(); s++) {
        if (lat.sublattice_of(s) == Sublattice::B) {
            tab.apply_h(s);
        }
    }
    return tab;
}

MeasureResult partonloop::measure_pauli(StabilizerTableau &t, uint32_t site, Basis basis, CounterRng *rng, int forced) {
    PauliString p(t.num_qubits());
    p.mul_site(site, basis);
    return t.measure(p, rng, forced);
}

double partonloop::entropy(const StabilizerTableau &t, const Region &region) {
    size_t a = region.size();
    if (a == 0) {
        return 0;
    }
    size_t words = (2 * a + 63) / 64;
    std::vector<std::vector<uint64_t>> m;
    m.reserve(t.num_qubits());
    for (const auto &s : t.stabilizers()) {
        std::vector<uint64_t> v(words, 0);
        bool any = false;
        for (size_t r = 0; r < a; r++) {
            uint32_t q = region[r];
            if (q >= t.num_qubits()) {
                throw std::out_of_range("region qubit outside the tableau");
            }
            if (s.x(q)) {
                v[(2 * r) >> 6] |= uint64_t{1} << ((2 * r) & 63);
                any = true;
            }
            if (s.z(q)) {
                v[(2 * r + 1) >> 6] |= uint64_t{1} << ((2 * r + 1) & 63);
                any = true;
            }
        }
        if (any) {
            m.push_back(std::move(v));
        }
    }
    size_t rank = rank_of_bit_rows(m, 2 * a);
    return (double)(rank - a) * std::log(2.0);
}

int partonloop::zz_expectation(const StabilizerTableau &t, uint32_t i, uint32_t j) {
    if (i == j) {
        return +1;
    }
    PauliString p(t.num_qubits());
    p.mul_site(i, Basis::Z);
    p.mul_site(j, Basis::Z);
    return t.expectation(p);
}

void partonloop::replay_record(StabilizerTableau &t, const MeasurementRecord &record) {
    for (const auto &e : record.entries) {
        if (e.outcome == 0) {
            throw std::invalid_argument("cannot replay a record without outcomes");
        }
        PauliString p(t.num_qubits());
        p.mul_site(e.site, e.basis);
        int v = t.expectation(p);
        if (v != 0 && v != e.outcome) {
            throw std::logic_error(
                "replay mismatch at site " + std::to_string(e.site) + ": determined outcome differs from record");
        }
        if ((v != 0) != e.forced) {
            throw std::logic_error(
                "replay mismatch at site " + std::to_string(e.site) + ": forced flag disagrees with the oracle");
        }
        t.measure(p, nullptr, e.outcome);
    }
}
