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

#include "partonloop/lattice.h"

#include <stdexcept>

using namespace partonloop;

UnmeasuredRegion UnmeasuredRegion::none() {
    return {RegionKind::none, 0, 0};
}
UnmeasuredRegion UnmeasuredRegion::two_sites(uint32_t i, uint32_t j) {
    return {RegionKind::two_sites, i, j};
}
UnmeasuredRegion UnmeasuredRegion::top_boundary() {
    return {RegionKind::top_boundary, 0, 0};
}
UnmeasuredRegion UnmeasuredRegion::both_boundaries() {
    return {RegionKind::both_boundaries, 0, 0};
}

void LatticeSpec::validate() const {
    if (lx < 2 || ly < 2) {
        throw std::invalid_argument("lattice needs lx >= 2 and ly >= 2");
    }
    if (topology == Topology::torus && (ly & 1)) {
        throw std::invalid_argument("a torus needs an even number of rows so sublattices alternate across the wrap");
    }
    if (flip_sector && topology != Topology::torus) {
        throw std::invalid_argument("flip_sector only applies to the torus");
    }
    switch (region.kind) {
        case RegionKind::none:
            break;
        case RegionKind::two_sites:
            if (region.site_i == region.site_j) {
                throw std::invalid_argument("two_sites region needs distinct sites");
            }
            if (region.site_i >= lx * ly || region.site_j >= lx * ly) {
                throw std::invalid_argument("two_sites region index outside the lattice");
            }
            break;
        case RegionKind::top_boundary:
        case RegionKind::both_boundaries:
            if (topology != Topology::cylinder) {
                throw std::invalid_argument("boundary regions require a cylinder");
            }
            if (region.kind == RegionKind::both_boundaries && ly < 3) {
                throw std::invalid_argument("both_boundaries needs at least one measured row");
            }
            break;
    }
}

char partonloop::basis_name(Basis b) {
    return "XYZ"[(int)b];
}

Basis partonloop::parse_basis(char c) {
    switch (c) {
        case 'X':
        case 'x':
            return Basis::X;
        case 'Y':
        case 'y':
            return Basis::Y;
        case 'Z':
        case 'z':
            return Basis::Z;
    }
    throw std::invalid_argument(std::string("not a Pauli basis: ") + c);
}

std::string partonloop::topology_name(Topology t) {
    return t == Topology::torus ? "torus" : "cylinder";
}

std::string partonloop::region_name(RegionKind k) {
    switch (k) {
        case RegionKind::none:
            return "none";
        case RegionKind::two_sites:
            return "two_sites";
        case RegionKind::top_boundary:
            return "top_boundary";
        case RegionKind::both_boundaries:
            return "both_boundaries";
    }
    return "?";
}

BasisDistribution partonloop::translate_protocol(const Protocol &protocol, Model model, Sublattice sublattice) {
    if (protocol.mode != ProtocolMode::pauli_pq) {
        throw std::invalid_argument(
            "general axis protocols are translated per axis (see gaussian_engine), not as a Pauli distribution");
    }
    double p = protocol.p;
    double q = protocol.q;
    if (!(p >= 0 && p <= 1 && q >= 0 && q <= 1)) {
        throw std::invalid_argument("protocol probabilities must lie in [0, 1]");
    }
    BasisDistribution d{q * (1 - p), p, (1 - q) * (1 - p)};
    if (model == Model::wen_plaquette && sublattice == Sublattice::B) {
        std::swap(d.px, d.pz);
    }
    return d;
}

Basis partonloop::wen_basis(Basis toric, Sublattice sublattice) {
    if (sublattice == Sublattice::A || toric == Basis::Y) {
        return toric;
    }
    return toric == Basis::X ? Basis::Z : Basis::X;
}

int partonloop::wen_outcome_factor(Basis toric, Sublattice sublattice) {
    return (sublattice == Sublattice::B && toric == Basis::Y) ? -1 : +1;
}

const LegPair *partonloop::dictionary_pairs(Basis b) {
    static const LegPair table[3][2] = {
        {{1, 2}, {4, 3}},
        {{2, 3}, {4, 1}},
        {{1, 3}, {2, 4}},
    };
    return table[(int)b];
}

Lattice::Lattice(const LatticeSpec &spec) : spec_(spec) {
    spec_.validate();
    uint32_t n = num_sites();
    measured_.assign(n, 1);
    uint32_t top = spec_.ly - 1;
    for (uint32_t x = 0; x < spec_.lx; x++) {
        if (spec_.region.kind == RegionKind::top_boundary || spec_.region.kind == RegionKind::both_boundaries) {
            measured_[site_index(x, top)] = 0;
        }
        if (spec_.region.kind == RegionKind::both_boundaries) {
            measured_[site_index(x, 0)] = 0;
        }
    }
    if (spec_.region.kind == RegionKind::two_sites) {
        measured_[spec_.region.site_i] = 0;
        measured_[spec_.region.site_j] = 0;
    }
    for (uint32_t s = 0; s < n; s++) {
        if (measured_[s]) {
            sweep_order_.push_back(s);
        } else {
            frontier_.push_back(s);
        }
    }
}

uint32_t Lattice::site_index(Site s) const {
    if (s.x >= spec_.lx || s.y >= spec_.ly) {
        throw std::out_of_range("site outside the lattice");
    }
    return s.y * spec_.lx + s.x;
}

Site Lattice::site(uint32_t index) const {
    if (index >= num_sites()) {
        throw std::out_of_range("site index outside the lattice");
    }
    return {index % spec_.lx, index / spec_.lx};
}

Sublattice Lattice::sublattice_of(Site s) const {
    if (s.x >= spec_.lx || s.y >= spec_.ly) {
        throw std::out_of_range("site outside the lattice");
    }
    return offset(s.y) == 0 ? Sublattice::A : Sublattice::B;
}

uint32_t Lattice::chain_position(uint32_t s, uint32_t leg) const {
    Site p = site(s);
    uint32_t right = (leg == 2 || leg == 4) ? 1 : 0;
    return (2 * p.x + right + offset(p.y)) % (2 * spec_.lx);
}

std::vector<uint32_t> Lattice::row_sites(uint32_t y) const {
    std::vector<uint32_t> out;
    for (uint32_t x = 0; x < spec_.lx; x++) {
        out.push_back(site_index(x, y));
    }
    return out;
}

std::vector<Dimer> Lattice::initial_dimers() const {
    std::vector<Dimer> out;
    uint32_t lx = spec_.lx;
    uint32_t ly = spec_.ly;
    bool torus = spec_.topology == Topology::torus;
    uint32_t rows = torus ? ly : ly - 1;
    for (uint32_t y = 0; y < rows; y++) {
        uint32_t up = (y + 1) % ly;
        int8_t sign = (torus && spec_.flip_sector && up == 0) ? -1 : +1;
        for (uint32_t x = 0; x < lx; x++) {
            uint32_t lower = site_index(x, y);
            uint32_t ne = site_index((x + offset(y)) % lx, up);
            uint32_t nw = site_index((x + offset(y) + lx - 1) % lx, up);
            out.push_back({majorana(lower, 4), majorana(ne, 1), sign});
            out.push_back({majorana(lower, 3), majorana(nw, 2), sign});
        }
    }
    if (!torus) {
        for (uint32_t x = 0; x < lx; x++) {
            uint32_t t0 = site_index(x, ly - 1);
            uint32_t t1 = site_index((x + 1) % lx, ly - 1);
            out.push_back({majorana(t1, 3), majorana(t0, 4), +1});
            uint32_t b0 = site_index(x, 0);
            uint32_t b1 = site_index((x + 1) % lx, 0);
            out.push_back({majorana(b0, 2), majorana(b1, 1), (int8_t)(bottom_twist() && x + 1 == lx ? -1 : +1)});
        }
    }
    return out;
}

bool Lattice::bottom_twist() const {
    // With a B bottom row the untwisted boundary has odd total parity and the projection vanishes.
    // One twisted wrap dimer fixes it, at the price of one bottom face with eigenvalue -1.
    return spec_.topology == Topology::cylinder && sublattice_of(Site{0, 0}) == Sublattice::B;
}

std::vector<PauliTerm> Lattice::stabilizer_terms() const {
    std::vector<PauliTerm> out;
    uint32_t lx = spec_.lx;
    uint32_t ly = spec_.ly;
    bool torus = spec_.topology == Topology::torus;
    for (uint32_t y = 0; y < ly; y++) {
        Basis b = sublattice_of(Site{0, y}) == Sublattice::A ? Basis::Z : Basis::X;
        for (uint32_t x = 0; x < lx; x++) {
            PauliTerm t;
            uint32_t mid = (x + offset(y)) % lx;
            t.factors.push_back({site_index(x, y), b});
            t.factors.push_back({site_index((x + 1) % lx, y), b});
            if (y > 0 || torus) {
                t.factors.push_back({site_index(mid, (y + ly - 1) % ly), b});
            }
            if (y + 1 < ly || torus) {
                t.factors.push_back({site_index(mid, (y + 1) % ly), b});
            }
            // On a torus with two rows the top and bottom corner coincide and cancel.
            if (t.factors.size() == 4 && t.factors[2].site == t.factors[3].site) {
                t.factors.resize(2);
            }
            if (y == 0 && x + 1 == lx && bottom_twist()) {
                t.sign = -1;
            }
            out.push_back(std::move(t));
        }
    }
    return out;
}

PauliTerm Lattice::vertical_string() const {
    // Legs 1 -> 3 then 2 -> 4: a Z loop in the Wen basis that winds once vertically.
    uint32_t lx = spec_.lx;
    PauliTerm t;
    uint32_t x = 0;
    uint32_t y = 0;
    do {
        uint32_t s = site_index(x, y);
        t.factors.push_back({s, sublattice_of(s) == Sublattice::A ? Basis::Z : Basis::X});
        x = (y & 1) ? (x + offset(y)) % lx : (x + offset(y) + lx - 1) % lx;
        y = (y + 1) % spec_.ly;
    } while (x != 0 || y != 0);
    t.sign = spec_.flip_sector ? +1 : -1;
    return t;
}

PauliTerm Lattice::zigzag_string() const {
    // Legs 3 -> 4 on row 0 and 1 -> 2 on row 1: an X loop in the Wen basis winding once horizontally.
    PauliTerm t;
    for (uint32_t y = 0; y < 2; y++) {
        for (uint32_t x = 0; x < spec_.lx; x++) {
            uint32_t s = site_index(x, y);
            t.factors.push_back({s, sublattice_of(s) == Sublattice::A ? Basis::X : Basis::Z});
        }
    }
    t.sign = -1;
    return t;
}

std::vector<PauliTerm> Lattice::logical_terms() const {
    if (spec_.topology != Topology::torus) {
        return {zigzag_string()};
    }
    return {zigzag_string(), vertical_string()};
}
