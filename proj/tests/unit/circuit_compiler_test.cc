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

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "gtest/gtest.h"
#include "partonloop/loop_engine.h"

using namespace partonloop;

namespace {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

Mat pauli_matrix(const PauliString &p) {
    Mat out = Mat::Identity(1, 1);
    for (size_t q = 0; q < p.num_qubits; q++) {
        // Stored as i^phase X^x Z^z, so build X^x Z^z and apply the phase once.
        Mat x(2, 2);
        Mat z(2, 2);
        x << 0, 1, 1, 0;
        z << 1, 0, 0, -1;
        Mat m = Mat::Identity(2, 2);
        if (p.x(q)) {
            m = m * x;
        }
        if (p.z(q)) {
            m = m * z;
        }
        Mat next(out.rows() * 2, out.cols() * 2);
        for (int i = 0; i < out.rows(); i++) {
            for (int j = 0; j < out.cols(); j++) {
                next.block(2 * i, 2 * j, 2, 2) = out(i, j) * m;
            }
        }
        out = next;
    }
    const cd phases[4] = {1, cd(0, 1), -1, cd(0, -1)};
    return phases[p.phase & 3] * out;
}

// exp(-i pi/4 P) for a Pauli P with P^2 = 1.
Mat quarter_rotation(const PauliString &p) {
    Mat m = pauli_matrix(p);
    double c = std::sqrt(0.5);
    return c * Mat::Identity(m.rows(), m.cols()) - cd(0, c) * m;
}

void expect_images(const Mat &u, const CliffordImages &images) {
    size_t n = images.x_images.size();
    for (size_t q = 0; q < n; q++) {
        for (int z = 0; z < 2; z++) {
            PauliString in(n);
            in.mul_site(q, z ? Basis::Z : Basis::X);
            const PauliString &out = z ? images.z_images[q] : images.x_images[q];
            Mat got = u * pauli_matrix(in) * u.adjoint();
            ASSERT_TRUE(got.isApprox(pauli_matrix(out), 1e-12)) << in.str() << " -> " << out.str();
        }
    }
}

LatticeSpec top_open(uint32_t lx, uint32_t ly) {
    return LatticeSpec{lx, ly, Topology::cylinder, UnmeasuredRegion::top_boundary(), false};
}

std::vector<SitePauli> uniform_config(const Lattice &lat, Basis b) {
    std::vector<SitePauli> out;
    for (uint32_t s : lat.measured_sites()) {
        out.push_back({s, b});
    }
    return out;
}

PauliString all_x(uint32_t n) {
    PauliString p(n);
    for (uint32_t k = 0; k < n; k++) {
        p.mul_site(k, Basis::X);
    }
    return p;
}

}  // namespace

TEST(circuit_compiler, gate_images_match_rotations) {
    expect_images(quarter_rotation(PauliString::from_str("ZZ")), u1_images());
    expect_images(quarter_rotation(PauliString::from_str("X")), u2_images());
}

TEST(circuit_compiler, u2_twice_is_identity_up_to_sign) {
    for (const char *s : {"X", "Y", "Z"}) {
        StabilizerTableau t(1);
        t.impose(PauliString::from_str(s), +1);
        t.apply_clifford({0}, u2_images());
        t.apply_clifford({0}, u2_images());
        PauliString p = PauliString::from_str(s);
        ASSERT_NE(t.expectation(p), 0) << s;
    }
}

TEST(circuit_compiler, uniform_configs) {
    Lattice lat(top_open(4, 5));
    auto z = compile(lat, uniform_config(lat, Basis::Z));
    auto x = compile(lat, uniform_config(lat, Basis::X));
    auto y = compile(lat, uniform_config(lat, Basis::Y));
    ASSERT_EQ(z.first_step, 0u);
    ASSERT_EQ(z.depth, 4u);
    for (size_t i = 0; i < z.ops.size(); i++) {
        bool odd = z.ops[i].step & 1;
        ASSERT_EQ(z.ops[i].kind, odd ? OpKind::M1 : OpKind::Id);
        ASSERT_EQ(x.ops[i].kind, odd ? OpKind::Id : OpKind::M2);
        ASSERT_EQ(y.ops[i].kind, odd ? OpKind::U1 : OpKind::U2);
    }
    CounterRng rng(3);
    ASSERT_TRUE(run_schedule(y, initial_chain_state(lat), &rng).outcome_log.empty());
    // Repeated X measurement ends in a product state.
    auto run = run_schedule(x, initial_chain_state(lat), &rng);
    ASSERT_EQ(run.outcome_log.size(), 8u);
    ASSERT_EQ(entropy(run.chain, {0, 1}), 0);
    // An even number of rows puts B at the bottom, so the first step is odd.
    Lattice even(top_open(4, 4));
    ASSERT_EQ(compile(even, uniform_config(even, Basis::Z)).first_step, 1u);
}

TEST(circuit_compiler, compile_errors) {
    Lattice lat(top_open(3, 4));
    auto config = uniform_config(lat, Basis::Z);
    auto with_top = config;
    with_top.push_back({lat.site_index(0, 3), Basis::X});
    ASSERT_THROW(compile(lat, with_top), std::invalid_argument);
    auto missing = config;
    missing.pop_back();
    ASSERT_THROW(compile(lat, missing), std::invalid_argument);
    auto twice = config;
    twice.push_back(config.front());
    ASSERT_THROW(compile(lat, twice), std::invalid_argument);
    Lattice closed(LatticeSpec{3, 4, Topology::cylinder, {}, false});
    ASSERT_THROW(compile(closed, uniform_config(closed, Basis::Z)), std::invalid_argument);
}

TEST(circuit_compiler, text_round_trip) {
    Lattice lat(top_open(3, 4));
    std::vector<SitePauli> config;
    for (uint32_t s : lat.measured_sites()) {
        config.push_back({s, (Basis)(s % 3)});
    }
    CircuitSchedule s = compile(lat, config);
    ASSERT_EQ(CircuitSchedule::from_str(s.str()), s);
    ASSERT_THROW(CircuitSchedule::from_str("chain 3 1 1\n1 U2 0\n1 Id 1\n1 Id 2\n"), std::invalid_argument);
    ASSERT_THROW(CircuitSchedule::from_str("chain 3 1 1\n1 M1 0\n1 Id 1\n"), std::invalid_argument);
    ASSERT_THROW(CircuitSchedule::from_str("chain 3 1 1\n1 M1 0\n1 Q 1\n1 Id 2\n"), std::invalid_argument);
    ASSERT_THROW(CircuitSchedule::from_str("loop 3 1 0\n"), std::invalid_argument);
}

TEST(circuit_compiler, ising_symmetry) {
    CounterRng rng(17);
    for (uint32_t ly : {4u, 5u}) {
        Lattice lat(top_open(5, ly));
        StabilizerTableau init = initial_chain_state(lat);
        ASSERT_EQ(init.expectation(all_x(5)), 1);
        for (int t = 0; t < 50; t++) {
            std::vector<SitePauli> config;
            for (uint32_t s : lat.measured_sites()) {
                config.push_back({s, (Basis)(rng() % 3)});
            }
            auto run = run_schedule(compile(lat, config), init, &rng);
            ASSERT_EQ(run.chain.expectation(all_x(5)), 1);
        }
    }
}

TEST(circuit_compiler, initial_state_is_the_bottom_boundary_fixed_point) {
    // With one bulk row measured in the identity-compiling basis, the chain is the initial state.
    for (uint32_t ly : {2u, 3u}) {
        LatticeSpec spec = top_open(4, ly);
        Lattice lat(spec);
        StabilizerTableau o = prepare_toric_ground(spec);
        Basis id_basis = lat.sublattice_of(Site{0, 0}) == Sublattice::B ? Basis::X : Basis::Z;
        ASSERT_EQ(ly - 1, 1u + (ly == 3));
        std::vector<SitePauli> config;
        for (uint32_t s : lat.measured_sites()) {
            Basis b = lat.site(s).y == 0 ? id_basis : Basis::X;
            config.push_back({s, b});
            measure_pauli(o, s, b, nullptr, +1);
        }
        CounterRng rng(1);
        auto run = run_schedule(compile(lat, config), initial_chain_state(lat), &rng);
        for (const PauliString &g : run.chain.stabilizers()) {
            PauliString p(lat.num_sites());
            for (uint32_t k = 0; k < 4; k++) {
                if (g.x(k) || g.z(k)) {
                    Basis b = g.x(k) ? (g.z(k) ? Basis::Y : Basis::X) : Basis::Z;
                    p.mul_site(lat.site_index(k, ly - 1), b);
                }
            }
            ASSERT_NE(o.expectation(p), 0) << g.str();
        }
    }
}

TEST(circuit_compiler, entropy_matches_both_engines) {
    LatticeSpec spec = top_open(4, 6);
    auto lat = std::make_shared<const Lattice>(spec);
    uint32_t lx = spec.lx;
    uint32_t top = spec.ly - 1;
    for (uint64_t t = 0; t < 500; t++) {
        CounterRng pick = CounterRng::stream(2026, t, kBasisStream);
        CounterRng outcomes = CounterRng::stream(2026, t, kOutcomeStream);
        std::vector<Basis> bases;
        std::vector<SitePauli> config;
        for (uint32_t s : lat->measured_sites()) {
            bases.push_back((Basis)(pick() % 3));
            config.push_back({s, bases.back()});
        }
        SweepResult loops = run_fixed_sweep(lat, bases, outcomes);
        StabilizerTableau oracle = prepare_toric_ground(spec);
        replay_record(oracle, loops.record);
        auto run = run_schedule(compile(*lat, config), initial_chain_state(*lat), &outcomes);
        for (uint32_t start = 0; start < lx; start++) {
            for (uint32_t len = 1; len < lx; len++) {
                Region chain;
                Region sites;
                for (uint32_t i = 0; i < len; i++) {
                    chain.push_back((start + i) % lx);
                    sites.push_back(lat->site_index((start + i) % lx, top));
                }
                double s_chain = entropy(run.chain, chain);
                ASSERT_EQ(s_chain, entropy(oracle, sites)) << t;
                ASSERT_NEAR(s_chain, boundary_cut_entropy(loops.state, start, len), 1e-12) << t;
            }
        }
    }
}
