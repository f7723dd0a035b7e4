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

#ifndef PARTONLOOP_LATTICE_H
#define PARTONLOOP_LATTICE_H

#include <cstdint>
#include <string>
#include <vector>

namespace partonloop {

/// Geometry conventions.
///
/// The square lattice of toric-code spins is drawn rotated by 45 degrees, so
/// sites form a brickwork of rows. Site (x, y) has x = 0..lx-1 along the
/// periodic row direction and y = 0..ly-1 from the bottom row to the top row.
/// Every row belongs to a single sublattice; the top row is always A.
///
/// Each site carries four Majorana legs: 1 = south-west, 2 = south-east,
/// 3 = north-west, 4 = north-east. With the on-site dictionary
///     X = i g1 g2,  Y = i g2 g3,  Z = i g1 g3
/// a Z tile passes strands vertically, a Y tile crosses them, and an X tile
/// caps them in pairs.
///
/// Between two rows the legs line up as a chain of 2*lx Majorana positions.
/// Row y is shifted by offset(y) = (ly - 1 - y) mod 2 half-sites.

enum class Topology : uint8_t { torus, cylinder };
enum class RegionKind : uint8_t { none, two_sites, top_boundary, both_boundaries };
enum class Sublattice : uint8_t { A, B };
enum class Basis : uint8_t { X, Y, Z };
enum class Model : uint8_t { toric_code, wen_plaquette };
enum class ProtocolMode : uint8_t { pauli_pq, general };

struct Site {
    uint32_t x;
    uint32_t y;
    bool operator==(const Site &other) const = default;
};

struct UnmeasuredRegion {
    RegionKind kind = RegionKind::none;
    uint32_t site_i = 0;
    uint32_t site_j = 0;

    static UnmeasuredRegion none();
    static UnmeasuredRegion two_sites(uint32_t i, uint32_t j);
    static UnmeasuredRegion top_boundary();
    static UnmeasuredRegion both_boundaries();
};

struct LatticeSpec {
    uint32_t lx = 4;
    uint32_t ly = 4;
    Topology topology = Topology::cylinder;
    UnmeasuredRegion region;
    /// Reverses the dimers crossing the torus wrap between the top and bottom row.
    bool flip_sector = false;

    /// Throws std::invalid_argument when the spec is inconsistent.
    void validate() const;
};

struct Protocol {
    ProtocolMode mode = ProtocolMode::pauli_pq;
    double p = 0;
    double q = 0;
};

struct BasisDistribution {
    double px = 0;
    double py = 0;
    double pz = 0;
};

/// One signed Majorana dimer: <i g_a g_b> = sign.
struct Dimer {
    uint32_t a;
    uint32_t b;
    int8_t sign;
};

/// One factor of a Pauli product on lattice sites.
struct SitePauli {
    uint32_t site;
    Basis basis;
};

/// A signed Pauli product, all factors on distinct sites.
struct PauliTerm {
    std::vector<SitePauli> factors;
    int8_t sign = +1;
};

char basis_name(Basis b);
Basis parse_basis(char c);
std::string topology_name(Topology t);
std::string region_name(RegionKind k);

/// Per-site basis probabilities for the requested model.
BasisDistribution translate_protocol(const Protocol &protocol, Model model, Sublattice sublattice);

/// The Wen-plaquette basis measured when the toric code is measured in `toric`.
Basis wen_basis(Basis toric, Sublattice sublattice);

/// Relation between toric and Wen outcomes (-1 only for Y on B).
int wen_outcome_factor(Basis toric, Sublattice sublattice);

/// On-site leg pairs (1-based) realizing the Wen Pauli `b` as i g_first g_second.
/// Index 0 is the primary bilinear, index 1 its D-partner.
struct LegPair {
    uint8_t first;
    uint8_t second;
};
const LegPair *dictionary_pairs(Basis b);

class Lattice {
   public:
    explicit Lattice(const LatticeSpec &spec);

    const LatticeSpec &spec() const {
        return spec_;
    }
    uint32_t lx() const {
        return spec_.lx;
    }
    uint32_t ly() const {
        return spec_.ly;
    }
    uint32_t num_sites() const {
        return spec_.lx * spec_.ly;
    }
    uint32_t num_majoranas() const {
        return 4 * num_sites();
    }

    uint32_t site_index(Site s) const;
    uint32_t site_index(uint32_t x, uint32_t y) const {
        return site_index(Site{x, y});
    }
    Site site(uint32_t index) const;
    Sublattice sublattice_of(Site s) const;
    Sublattice sublattice_of(uint32_t index) const {
        return sublattice_of(site(index));
    }
    uint32_t offset(uint32_t row) const {
        return (spec_.ly - 1 - row) & 1;
    }

    static uint32_t majorana(uint32_t site, uint32_t leg) {
        return 4 * site + leg - 1;
    }
    static uint32_t site_of_majorana(uint32_t m) {
        return m >> 2;
    }
    static uint32_t leg_of_majorana(uint32_t m) {
        return (m & 3) + 1;
    }

    /// Chain position (0..2*lx-1) of a leg. Legs 1,3 sit left of legs 2,4.
    uint32_t chain_position(uint32_t site, uint32_t leg) const;

    bool is_measured(uint32_t site) const {
        return measured_[site];
    }
    /// Sites left unmeasured, in increasing index order.
    const std::vector<uint32_t> &frontier_sites() const {
        return frontier_;
    }
    /// Measured sites in raster order (row by row from the bottom).
    const std::vector<uint32_t> &measured_sites() const {
        return sweep_order_;
    }

    /// Signed dimers of the unmeasured parton state.
    std::vector<Dimer> initial_dimers() const;

    /// Toric-code star and plaquette terms (truncated on cylinder boundaries) with their signs.
    std::vector<PauliTerm> stabilizer_terms() const;

    /// True when the bottom wrap dimer carries sign -1 (cylinders whose bottom row is B).
    bool bottom_twist() const;

    /// Noncontractible loop operators with their expected signs: a horizontal loop, plus a
    /// vertical one on the torus. Together with stabilizer_terms they fix a unique state.
    std::vector<PauliTerm> logical_terms() const;

    /// Sites of row y ordered by x.
    std::vector<uint32_t> row_sites(uint32_t y) const;

   private:
    LatticeSpec spec_;
    std::vector<uint8_t> measured_;
    std::vector<uint32_t> frontier_;
    std::vector<uint32_t> sweep_order_;

    PauliTerm vertical_string() const;
    PauliTerm zigzag_string() const;
};

}  // namespace partonloop

#endif
