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


#include "partonloop/circuit_compiler.h"

#include <sstream>
#include <stdexcept>

using namespace partonloop;

const char *partonloop::op_kind_name(OpKind kind) {
    switch (kind) {
        case OpKind::Id:
            return "Id";
        case OpKind::U1:
            return "U1";
        case OpKind::U2:
            return "U2";
        case OpKind::M1:
            return "M1";
        case OpKind::M2:
            return "M2";
    }
    return "?";
}

OpKind partonloop::parse_op_kind(const std::string &text) {
    for (OpKind k : {OpKind::Id, OpKind::U1, OpKind::U2, OpKind::M1, OpKind::M2}) {
        if (text == op_kind_name(k)) {
            return k;
        }
    }
    throw std::invalid_argument("unknown circuit op: " + text);
}

static bool is_two_qubit_step(uint32_t step) {
    return step & 1;
}

static bool is_two_qubit_kind(OpKind kind) {
    return kind == OpKind::U1 || kind == OpKind::M1;
}

void CircuitSchedule::validate() const {
    if (lx < 2 || first_step > 1) {
        throw std::invalid_argument("schedule needs lx >= 2 and first_step in {0, 1}");
    }
    if (ops.size() != (size_t)lx * depth) {
        throw std::invalid_argument("schedule must hold exactly one op per chain position per step");
    }
    for (size_t i = 0; i < ops.size(); i++) {
        const CircuitOp &op = ops[i];
        uint32_t step = first_step + (uint32_t)(i / lx);
        if (op.step != step || op.k != i % lx) {
            throw std::invalid_argument("schedule ops are not in step-major order");
        }
        if (op.kind != OpKind::Id && is_two_qubit_kind(op.kind) != is_two_qubit_step(step)) {
            throw std::invalid_argument(
                std::string("op ") + op_kind_name(op.kind) + " on a step of the wrong parity");
        }
    }
}

std::string CircuitSchedule::str() const {
    std::ostringstream out;
    out << "chain " << lx << " " << first_step << " " << depth << "\n";
    for (const CircuitOp &op : ops) {
        out << op.step << " " << op_kind_name(op.kind) << " " << op.k << "\n";
    }
    return out.str();
}

CircuitSchedule CircuitSchedule::from_str(const std::string &text) {
    std::istringstream in(text);
    std::string word;
    CircuitSchedule s;
    if (!(in >> word >> s.lx >> s.first_step >> s.depth) || word != "chain") {
        throw std::invalid_argument("schedule text must start with 'chain lx first_step depth'");
    }
    CircuitOp op;
    while (in >> op.step >> word >> op.k) {
        op.kind = parse_op_kind(word);
        s.ops.push_back(op);
    }
    if (!in.eof()) {
        throw std::invalid_argument("malformed schedule line");
    }
    s.validate();
    return s;
}

CircuitSchedule partonloop::compile(const Lattice &lattice, const std::vector<SitePauli> &config) {
    const LatticeSpec &spec = lattice.spec();
    if (spec.topology != Topology::cylinder || spec.region.kind != RegionKind::top_boundary) {
        throw std::invalid_argument("circuit compilation needs a cylinder with an unmeasured top row");
    }
    uint32_t lx = spec.lx;
    std::vector<int> basis(lattice.num_sites(), -1);
    for (const SitePauli &f : config) {
        if (f.site >= lattice.num_sites()) {
            throw std::invalid_argument("config site outside the lattice");
        }
        if (!lattice.is_measured(f.site)) {
            throw std::invalid_argument("config assigns a basis to an unmeasured boundary site");
        }
        if (basis[f.site] != -1) {
            throw std::invalid_argument("config assigns two bases to one site");
        }
        basis[f.site] = (int)f.basis;
    }
    CircuitSchedule s;
    s.lx = lx;
    s.first_step = lattice.offset(0);
    s.depth = spec.ly - 1;
    for (uint32_t y = 0; y + 1 < spec.ly; y++) {
        bool b_row = lattice.sublattice_of(Site{0, y}) == Sublattice::B;
        for (uint32_t x = 0; x < lx; x++) {
            int b = basis[lattice.site_index(x, y)];
            if (b < 0) {
                throw std::invalid_argument("config leaves a bulk site without a basis");
            }
            OpKind kind;
            switch ((Basis)b) {
                case Basis::Y:
                    kind = b_row ? OpKind::U1 : OpKind::U2;
                    break;
                case Basis::X:
                    kind = b_row ? OpKind::Id : OpKind::M2;
                    break;
                default:
                    kind = b_row ? OpKind::M1 : OpKind::Id;
                    break;
            }
            s.ops.push_back({kind, s.first_step + y, x});
        }
    }
    s.validate();
    return s;
}

const CliffordImages &partonloop::u1_images() {
    static const CliffordImages images{
        {PauliString::from_str("YZ"), PauliString::from_str("ZY")},
        {PauliString::from_str("Z_"), PauliString::from_str("_Z")},
    };
    return images;
}

const CliffordImages &partonloop::u2_images() {
    static const CliffordImages images{{PauliString::from_str("X")}, {PauliString::from_str("-Y")}};
    return images;
}

StabilizerTableau partonloop::initial_chain_state(const Lattice &lattice) {
    uint32_t lx = lattice.spec().lx;
    StabilizerTableau t(lx);
    if (lattice.sublattice_of(Site{0, 0}) == Sublattice::B) {
        for (uint32_t k = 0; k < lx; k++) {
            t.apply_h(k);
        }
        return t;
    }
    PauliString all_x(lx);
    for (uint32_t k = 0; k < lx; k++) {
        all_x.mul_site(k, Basis::X);
    }
    t.impose(all_x, +1);
    for (uint32_t k = 0; k + 1 < lx; k++) {
        PauliString zz(lx);
        zz.mul_site(k, Basis::Z);
        zz.mul_site(k + 1, Basis::Z);
        t.impose(zz, +1);
    }
    return t;
}

ChainRun partonloop::run_schedule(
    const CircuitSchedule &schedule, StabilizerTableau initial, CounterRng *rng, const std::vector<int8_t> *forced) {
    schedule.validate();
    uint32_t lx = schedule.lx;
    if (initial.num_qubits() != lx) {
        throw std::invalid_argument("initial chain length differs from the schedule");
    }
    ChainRun run{std::move(initial), {}};
    for (const CircuitOp &op : schedule.ops) {
        uint32_t k2 = (op.k + 1) % lx;
        switch (op.kind) {
            case OpKind::Id:
                continue;
            case OpKind::U1:
                run.chain.apply_clifford({op.k, k2}, u1_images());
                continue;
            case OpKind::U2:
                run.chain.apply_clifford({op.k}, u2_images());
                continue;
            default:
                break;
        }
        PauliString p(lx);
        if (op.kind == OpKind::M1) {
            p.mul_site(op.k, Basis::Z);
            p.mul_site(k2, Basis::Z);
        } else {
            p.mul_site(op.k, Basis::X);
        }
        int want = 0;
        if (forced != nullptr) {
            if (run.outcome_log.size() >= forced->size()) {
                throw std::invalid_argument("forced outcome list is shorter than the schedule's measurements");
            }
            want = (*forced)[run.outcome_log.size()];
        }
        run.outcome_log.push_back((int8_t)run.chain.measure(p, rng, want).outcome);
    }
    return run;
}
