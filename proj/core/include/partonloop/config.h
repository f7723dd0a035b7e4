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


#ifndef PARTONLOOP_CONFIG_H
#define PARTONLOOP_CONFIG_H

#include <cstdint>
#include <string>
#include <vector>

#include "partonloop/lattice.h"

namespace partonloop {

enum class Engine { loop, oracle, circuit, gaussian, crosscheck };

enum class Estimator { g4, spanning, cut_entropy, mie2boundary, ea_order, linear_order, entropy_profile };

std::string engine_name(Engine e);
Engine parse_engine(const std::string &name);
std::string estimator_name(Estimator e);
Estimator parse_estimator(const std::string &name);

struct SweepGrid {
    std::vector<double> p;
    std::vector<double> q;
    std::vector<uint32_t> l;

    bool empty() const {
        return p.empty() && q.empty() && l.empty();
    }
};

/// One point of a sweep: the lattice and protocol actually simulated.
struct SweepPoint {
    LatticeSpec lattice;
    Protocol protocol;
};

/// Parsed experiment description. See README for the file grammar.
struct ExperimentConfig {
    LatticeSpec lattice{8, 8, Topology::cylinder, UnmeasuredRegion::top_boundary(), false};
    /// ly = round(aspect * L) for swept sizes (rounded up to even on a torus).
    double aspect = 1;
    Protocol protocol{ProtocolMode::pauli_pq, 0, 0.5};
    /// Y-plane tilt of general-protocol axes, in radians.
    double spread = 0;
    Engine engine = Engine::loop;
    std::vector<Estimator> estimators{Estimator::cut_entropy};
    uint64_t samples = 1000;
    uint64_t seed = 1;
    uint32_t oracle_qubit_limit = 64;
    SweepGrid sweep;

    /// Parses the key-value text. Throws std::invalid_argument with a line number on errors.
    static ExperimentConfig parse(const std::string &text);
    static ExperimentConfig load(const std::string &path);

    /// Deterministic re-serialization, parseable by parse().
    std::string canonical() const;
    /// FNV-1a 64 of canonical(), as 16 hex digits.
    std::string hash() const;

    /// Sweep points in output order: L outermost, then p, then q. Without a sweep, the base point.
    std::vector<SweepPoint> points() const;

    /// Checks every point for estimator/geometry/engine compatibility. Throws std::invalid_argument.
    void validate() const;
};

}  // namespace partonloop

#endif
