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

#ifndef PARTONLOOP_CIRCUIT_COMPILER_H
#define PARTONLOOP_CIRCUIT_COMPILER_H

#include <cstdint>
#include <string>
#include <vector>

#include "partonloop/lattice.h"
#include "partonloop/rng.h"
#include "partonloop/stabilizer_oracle.h"

namespace partonloop {

enum class OpKind : uint8_t { Id, U1, U2, M1, M2 };

const char *op_kind_name(OpKind kind);
OpKind parse_op_kind(const std::string &text);

/// One gate of the chain circuit. Two-qubit kinds act on (k, k+1 mod Lx).
struct CircuitOp {
    OpKind kind;
    uint32_t step;
    uint32_t k;

    bool operator==(const CircuitOp &other) const = default;
};

/// Layer-ordered circuit for a cylinder whose top row is left unmeasured.
///
/// Bulk row r becomes time step r + offset(0), so B rows always land on odd steps
/// (two-qubit ops) and A rows on even steps (single-qubit ops).
struct CircuitSchedule {
    uint32_t lx = 0;
    uint32_t first_step = 0;
    uint32_t depth = 0;
    std::vector<CircuitOp> ops;

    /// Throws std::invalid_argument unless there is exactly one op per chain position per
    /// step, with kinds matching the step parity.
    void validate() const;

    /// One op per line: "step kind k", preceded by a "chain lx first_step depth" header.
    std::string str() const;
    static CircuitSchedule from_str(const std::string &text);

    bool operator==(const CircuitSchedule &other) const = default;
};

struct ChainRun {
    StabilizerTableau chain;
    /// One entry per M1/M2 op in schedule order.
    std::vector<int8_t> outcome_log;
};

/// Maps toric-label bases of every bulk site to the chain circuit.
/// B rows: Y -> U1, X -> Id, Z -> M1. A rows: Y -> U2, X -> M2, Z -> Id.
CircuitSchedule compile(const Lattice &lattice, const std::vector<SitePauli> &config);

/// Chain state before the first layer, fixed by the bottom boundary.
StabilizerTableau initial_chain_state(const Lattice &lattice);

/// U1 = exp(-i pi/4 Z Z) and U2 = exp(-i pi/4 X) as conjugation tables.
const CliffordImages &u1_images();
const CliffordImages &u2_images();

/// Runs the schedule. Random outcomes draw from rng; `forced`, when given, postselects every
/// measurement to the listed outcomes instead.
ChainRun run_schedule(
    const CircuitSchedule &schedule,
    StabilizerTableau initial,
    CounterRng *rng,
    const std::vector<int8_t> *forced = nullptr);

}  // namespace partonloop

#endif
