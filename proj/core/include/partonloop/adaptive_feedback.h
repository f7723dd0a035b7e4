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


#ifndef PARTONLOOP_ADAPTIVE_FEEDBACK_H
#define PARTONLOOP_ADAPTIVE_FEEDBACK_H

#include <cstdint>
#include <string>
#include <vector>

#include "partonloop/loop_engine.h"
#include "partonloop/stabilizer_oracle.h"

namespace partonloop {

/// Signed Z_i Z_j generators of the top boundary, as a forest on sites 0..L-1.
struct ZZGraph {
    uint32_t num_nodes = 0;
    std::vector<ZZEdge> edges;
};

/// Boundary sites that receive one X each.
struct FlipSet {
    std::vector<uint8_t> flip;

    size_t count() const;
    /// One character per site, '1' for flipped.
    std::string str() const;
    static FlipSet from_str(const std::string &text);
};

/// Strand generators from zz_stabilizer_set, plus edges between consecutive members of a
/// correlated cluster wherever the strands alone leave it disconnected. Signs come from the
/// tracked pairing. Throws std::logic_error on a cycle.
ZZGraph build_graph(const PairingState &state);

/// Roots every tree at its smallest site and flips each node whose root path has an odd
/// number of negative edges.
FlipSet solve_flips(const ZZGraph &graph);

/// True when every edge sign becomes +1 after the flips.
bool flips_fix_signs(const ZZGraph &graph, const FlipSet &flips);

/// Applies X on the flipped top-row sites of the oracle state, checks every boundary
/// <Z_i Z_j> is 0 or +1, and returns (1/L) sum_{i,j} <Z_i Z_j>.
/// Throws std::logic_error if a -1 correlation survives.
double apply_and_certify(StabilizerTableau &tableau, const Lattice &lattice, const FlipSet &flips);

}  // namespace partonloop

#endif
