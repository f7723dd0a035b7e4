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

#include "partonloop/loop_engine.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "gtest/gtest.h"
#include "partonloop/stabilizer_oracle.h"

using namespace partonloop;

namespace {

LatticeSpec cyl(uint32_t lx, uint32_t ly, UnmeasuredRegion r = UnmeasuredRegion::none()) {
    return LatticeSpec{lx, ly, Topology::cylinder, r, false};
}

// Majorana-level oracle: the fermion state as a qubit tableau via Jordan-Wigner.
StabilizerTableau jw_tableau(const PairingState &st) {
    size_t nq = st.partner.size() / 2;
    StabilizerTableau t(nq);
    for (uint32_t a = 0; a < st.partner.size(); a++) {
        uint32_t b = st.partner[a];
        if (a < b) {
            t.impose(jordan_wigner(MajoranaMonomial::bilinear(a, b), nq), st.sign[a]);
        }
    }
    return t;
}

void expect_matches_jw(const PairingState &st, const StabilizerTableau &t) {
    size_t nq = st.partner.size() / 2;
    for (uint32_t a = 0; a < st.partner.size(); a++) {
        uint32_t b = st.partner[a];
        ASSERT_EQ(t.expectation(jordan_wigner(MajoranaMonomial::bilinear(a, b), nq)), st.sign[a]);
    }
}

// Toric-code term rewritten in Wen-model labels (Hadamard on B).
std::pair<std::vector<SitePauli>, int> to_wen(const Lattice &lat, const PauliTerm &term) {
    std::vector<SitePauli> out;
    int sign = term.sign;
    for (const auto &f : term.factors) {
        Sublattice sub = lat.sublattice_of(f.site);
        out.push_back({f.site, wen_basis(f.basis, sub)});
        sign *= wen_outcome_factor(f.basis, sub);
    }
    return {out, sign};
}

}  // namespace

TEST(loop_engine, reconnection_sign_fixture) {
    // Exhaustive calibration: four legs of one site carry the pairs (k,a),(l,b); the other
    // legs of the lattice are irrelevant. Compare against the Jordan-Wigner qubit oracle.
    auto lat = std::make_shared<const Lattice>(LatticeSpec{2, 2, Topology::torus, {}, false});
    std::array<uint32_t, 4> legs = {0, 1, 2, 3};
    int cases = 0;
    do {
        uint32_t k = legs[0], a = legs[1], b = legs[2], l = legs[3];
        for (int s1 : {1, -1}) {
            for (int s2 : {1, -1}) {
                for (int m : {1, -1}) {
                    PairingState st = build_initial_matching(lat);
                    // Re-pair the site-0 legs as (k,a) and (l,b); leave the rest intact by
                    // pairing the displaced partners among themselves.
                    std::vector<uint32_t> outside;
                    for (uint32_t x : legs) {
                        outside.push_back(st.partner[x]);
                    }
                    st.partner[k] = a;
                    st.partner[a] = k;
                    st.partner[l] = b;
                    st.partner[b] = l;
                    st.sign[k] = (int8_t)s1;
                    st.sign[a] = (int8_t)-s1;
                    st.sign[l] = (int8_t)s2;
                    st.sign[b] = (int8_t)-s2;
                    std::sort(outside.begin(), outside.end());
                    for (size_t t = 0; t < 4; t += 2) {
                        st.partner[outside[t]] = outside[t + 1];
                        st.partner[outside[t + 1]] = outside[t];
                        st.sign[outside[t]] = 1;
                        st.sign[outside[t + 1]] = -1;
                    }
                    st.check_invariants();
                    StabilizerTableau jw = jw_tableau(st);
                    size_t nq = st.partner.size() / 2;
                    jw.measure(jordan_wigner(MajoranaMonomial::bilinear(a, b), nq), nullptr, m);
                    measure_bilinear_postselected(st, a, b, m);
                    ASSERT_EQ(st.partner[k], l);
                    expect_matches_jw(st, jw);
                    cases++;
                }
            }
        }
    } while (std::next_permutation(legs.begin(), legs.end()));
    ASSERT_EQ(cases, 24 * 8);
}

TEST(loop_engine, random_bilinears_track_jw_oracle) {
    auto lat = std::make_shared<const Lattice>(LatticeSpec{2, 2, Topology::torus, {}, false});
    CounterRng rng(17);
    for (int trial = 0; trial < 50; trial++) {
        PairingState st = build_initial_matching(lat);
        StabilizerTableau jw = jw_tableau(st);
        size_t nq = st.partner.size() / 2;
        for (int step = 0; step < 30; step++) {
            uint32_t a = rng() % 16;
            uint32_t b = rng() % 16;
            if (a == b) {
                continue;
            }
            int m = measure_bilinear(st, a, b, rng);
            auto r = jw.measure(jordan_wigner(MajoranaMonomial::bilinear(a, b), nq), nullptr, m);
            ASSERT_EQ(r.outcome, m);
        }
        st.check_invariants();
        expect_matches_jw(st, jw);
    }
}

TEST(loop_engine, measure_bilinear_examples) {
    auto lat = std::make_shared<const Lattice>(LatticeSpec{2, 2, Topology::torus, {}, false});
    PairingState st = build_initial_matching(lat);
    CounterRng rng(1);
    uint32_t a = 0;
    uint32_t b = st.partner[0];
    auto before = st.partner;
    ASSERT_EQ(measure_bilinear(st, a, b, rng), st.sign[a]);
    ASSERT_EQ(st.partner, before);
    ASSERT_EQ(rng.counter(), 0u);
    st.sign[a] = -1;
    st.sign[b] = 1;
    ASSERT_EQ(measure_bilinear(st, a, b, rng), -1);
    ASSERT_THROW(measure_bilinear(st, a, a, rng), std::invalid_argument);
    ASSERT_THROW(measure_bilinear_postselected(st, a, b, 1), std::logic_error);
}

TEST(loop_engine, frontier_legs_cannot_be_measured) {
    PairingState st = build_initial_matching(cyl(4, 4, UnmeasuredRegion::top_boundary()));
    CounterRng rng(1);
    uint32_t top = st.lattice->site_index(0, 3);
    ASSERT_THROW(measure_bilinear(st, Lattice::majorana(top, 1), Lattice::majorana(top, 2), rng),
                 std::invalid_argument);
    ASSERT_THROW(apply_tile(st, top, Basis::Z, rng), std::invalid_argument);
    uint32_t bulk = st.lattice->site_index(0, 1);
    apply_tile(st, bulk, Basis::Z, rng);
    ASSERT_THROW(apply_tile(st, bulk, Basis::Z, rng), std::invalid_argument);
}

TEST(loop_engine, initial_state_satisfies_toric_terms) {
    for (auto spec : {
             cyl(4, 4),
             cyl(3, 4),
             cyl(4, 3),
             cyl(5, 6),
             LatticeSpec{2, 2, Topology::torus, {}, false},
             LatticeSpec{4, 4, Topology::torus, {}, false},
             LatticeSpec{3, 4, Topology::torus, {}, false},
             LatticeSpec{4, 6, Topology::torus, {}, false},
             LatticeSpec{3, 4, Topology::torus, {}, true},
             LatticeSpec{4, 6, Topology::torus, {}, true},
         }) {
        PairingState st = build_initial_matching(spec);
        const Lattice &lat = *st.lattice;
        for (const auto &t : lat.stabilizer_terms()) {
            auto [w, sign] = to_wen(lat, t);
            ASSERT_EQ(physical_expectation(st, w), sign);
        }
        for (const auto &t : lat.logical_terms()) {
            auto [w, sign] = to_wen(lat, t);
            ASSERT_EQ(physical_expectation(st, w), sign);
        }
    }
}

TEST(loop_engine, evaluator_matches_projected_majorana_oracle) {
    // Project the Jordan-Wigner tableau onto D = +1 on every site, then compare random Pauli
    // products with the evaluator, before and part way through a sweep.
    for (auto spec : {
             cyl(3, 4),
             cyl(4, 3),
             cyl(3, 5, UnmeasuredRegion::top_boundary()),
             LatticeSpec{4, 4, Topology::torus, {}, false},
             LatticeSpec{3, 4, Topology::torus, UnmeasuredRegion::two_sites(1, 7), true},
         }) {
        auto lat = std::make_shared<const Lattice>(spec);
        uint32_t ns = lat->num_sites();
        CounterRng rng(spec.lx * 100 + spec.ly);
        for (size_t steps : {size_t{0}, lat->measured_sites().size() / 2, lat->measured_sites().size()}) {
            PairingState st = build_initial_matching(lat);
            for (size_t k = 0; k < steps; k++) {
                apply_tile(st, lat->measured_sites()[k], (Basis)(rng() % 3), rng);
            }
            StabilizerTableau t = jw_tableau(st);
            size_t nq = 2 * ns;
            for (uint32_t s = 0; s < ns; s++) {
                MajoranaMonomial d{0, {4 * s, 4 * s + 1, 4 * s + 2, 4 * s + 3}};
                ASSERT_NO_THROW(t.measure(jordan_wigner(d, nq), nullptr, +1));
            }
            for (int trial = 0; trial < 60; trial++) {
                std::vector<SitePauli> w;
                MajoranaMonomial m{0, {}};
                for (uint32_t s = 0; s < ns; s++) {
                    uint64_t r = rng() % 4;
                    if (r == 0) {
                        continue;
                    }
                    Basis b = (Basis)(r - 1);
                    w.push_back({s, b});
                    LegPair lp = dictionary_pairs(b)[0];
                    m = m * MajoranaMonomial::bilinear(4 * s + lp.first - 1, 4 * s + lp.second - 1);
                }
                ASSERT_EQ(physical_expectation(st, w), t.expectation(jordan_wigner(m, nq)));
            }
        }
    }
}

TEST(loop_engine, tile_pairings) {
    PairingState st = build_initial_matching(LatticeSpec{4, 4, Topology::torus, {}, false});
    CounterRng rng(3);
    apply_tile(st, 5, Basis::Z, rng);
    ASSERT_EQ(st.partner[Lattice::majorana(5, 1)], Lattice::majorana(5, 3));
    ASSERT_EQ(st.partner[Lattice::majorana(5, 2)], Lattice::majorana(5, 4));
    apply_tile(st, 6, Basis::Y, rng);
    ASSERT_EQ(st.partner[Lattice::majorana(6, 2)], Lattice::majorana(6, 3));
    ASSERT_EQ(st.partner[Lattice::majorana(6, 4)], Lattice::majorana(6, 1));
    apply_tile(st, 7, Basis::X, rng);
    ASSERT_EQ(st.partner[Lattice::majorana(7, 1)], Lattice::majorana(7, 2));
    ASSERT_EQ(st.partner[Lattice::majorana(7, 4)], Lattice::majorana(7, 3));
    st.check_invariants();
}

TEST(loop_engine, degenerate_protocols) {
    auto lat = std::make_shared<const Lattice>(cyl(4, 6, UnmeasuredRegion::top_boundary()));
    for (auto [p, q] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.4}}) {
        CounterRng br(1);
        CounterRng orng(2);
        SweepResult r = run_bulk_sweep(lat, Protocol{ProtocolMode::pauli_pq, p, q}, br, orng);
        ASSERT_EQ(r.record.entries.size(), lat->measured_sites().size());
        for (const auto &e : r.record.entries) {
            Basis want = p == 1 ? Basis::Y : Basis::Z;
            ASSERT_EQ(e.basis, want);
            ASSERT_TRUE(e.outcome == 1 || e.outcome == -1);
        }
        r.state.check_invariants();
    }
}

TEST(loop_engine, forced_outcomes_do_not_consume_randomness) {
    auto lat = std::make_shared<const Lattice>(cyl(4, 6, UnmeasuredRegion::top_boundary()));
    CounterRng br(4);
    CounterRng orng(5);
    SweepResult r = run_bulk_sweep(lat, Protocol{ProtocolMode::pauli_pq, 0.3, 0.3}, br, orng);
    uint64_t random = 0;
    for (const auto &e : r.record.entries) {
        random += !e.forced;
    }
    ASSERT_EQ(orng.counter(), random);
}

TEST(loop_engine, connectivity_mode_matches_tracked_connectivity) {
    auto lat = std::make_shared<const Lattice>(cyl(6, 8, UnmeasuredRegion::top_boundary()));
    for (uint64_t seed = 0; seed < 20; seed++) {
        Protocol pr{ProtocolMode::pauli_pq, 0.4, 0.5};
        CounterRng b1 = CounterRng::stream(seed, 0, kBasisStream);
        CounterRng o1 = CounterRng::stream(seed, 0, kOutcomeStream);
        CounterRng b2 = CounterRng::stream(seed, 0, kBasisStream);
        CounterRng o2 = CounterRng::stream(seed, 0, kOutcomeStream);
        auto tracked = run_bulk_sweep(lat, pr, b1, o1, SignMode::tracked);
        auto fast = run_bulk_sweep(lat, pr, b2, o2, SignMode::connectivity_only);
        ASSERT_EQ(tracked.state.partner, fast.state.partner);
    }
}

TEST(loop_engine, replay_on_oracle_and_physical_expectations) {
    // Every determined outcome of the loop engine is determined in the oracle, and random
    // Pauli products agree between the projected-parton evaluator and the oracle.
    for (auto spec : {
             cyl(3, 4, UnmeasuredRegion::top_boundary()),
             cyl(4, 4, UnmeasuredRegion::both_boundaries()),
             cyl(4, 5, UnmeasuredRegion::two_sites(5, 14)),
             LatticeSpec{4, 4, Topology::torus, UnmeasuredRegion::two_sites(0, 10), false},
             LatticeSpec{3, 4, Topology::torus, UnmeasuredRegion::none(), true},
         }) {
        auto lat = std::make_shared<const Lattice>(spec);
        for (uint64_t t = 0; t < 40; t++) {
            CounterRng br = CounterRng::stream(99, t, kBasisStream);
            CounterRng orng = CounterRng::stream(99, t, kOutcomeStream);
            double p = (t % 4) * 0.25;
            SweepResult r = run_bulk_sweep(lat, Protocol{ProtocolMode::pauli_pq, p, 0.5}, br, orng);
            StabilizerTableau oracle = prepare_toric_ground(spec);
            ASSERT_NO_THROW(replay_record(oracle, r.record));
            CounterRng pick(t + 1000);
            for (int k = 0; k < 30; k++) {
                PauliTerm term;
                for (uint32_t s = 0; s < lat->num_sites(); s++) {
                    uint64_t c = pick() % 8;
                    if (c < 3) {
                        term.factors.push_back({s, (Basis)c});
                    }
                }
                if (term.factors.empty()) {
                    continue;
                }
                PauliString ps = term_to_pauli(term, lat->num_sites());
                auto [w, sign] = to_wen(*lat, term);
                int want = oracle.expectation(ps) * ps.sign();
                ASSERT_EQ(physical_expectation(r.state, w) * sign, want);
            }
        }
    }
}

TEST(loop_engine, two_site_classes) {
    LatticeSpec spec{4, 4, Topology::torus, UnmeasuredRegion::two_sites(0, 1), false};
    auto lat = std::make_shared<const Lattice>(spec);
    int seen[3] = {0, 0, 0};
    for (uint64_t t = 0; t < 400; t++) {
        CounterRng br = CounterRng::stream(7, t, kBasisStream);
        CounterRng orng = CounterRng::stream(7, t, kOutcomeStream);
        auto r = run_bulk_sweep(lat, Protocol{ProtocolMode::pauli_pq, 0.5, 0.5}, br, orng);
        seen[(int)classify_two_site(r.state)]++;
    }
    ASSERT_GT(seen[0], 0);
    ASSERT_GT(seen[2], 0);
    ASSERT_EQ(two_site_mie(TwoSiteClass::c), std::log(2.0));
    ASSERT_EQ(two_site_mie(TwoSiteClass::b), 0);
    ASSERT_THROW(watermelon_g4(cyl(4, 4), Protocol{}, 10, 1), std::invalid_argument);
}

TEST(loop_engine, spanning_number_is_even) {
    auto lat = std::make_shared<const Lattice>(cyl(8, 10, UnmeasuredRegion::both_boundaries()));
    for (uint64_t t = 0; t < 200; t++) {
        CounterRng br = CounterRng::stream(3, t, kBasisStream);
        CounterRng orng = CounterRng::stream(3, t, kOutcomeStream);
        auto r = run_bulk_sweep(lat, Protocol{ProtocolMode::pauli_pq, 0.5, 0.5}, br, orng,
                                SignMode::connectivity_only);
        ASSERT_EQ(spanning_number(r.state) % 2, 0u);
    }
    CounterRng br(1);
    CounterRng orng(1);
    auto r = run_bulk_sweep(lat, Protocol{}, br, orng);
    ASSERT_EQ(spanning_number(r.state), 0u);
    ASSERT_EQ(two_boundary_mie(r.state), 0);
}

TEST(loop_engine, toric_limit_boundary_observables) {
    auto lat = std::make_shared<const Lattice>(cyl(6, 4, UnmeasuredRegion::top_boundary()));
    CounterRng br(1);
    CounterRng orng(2);
    auto r = run_bulk_sweep(lat, Protocol{}, br, orng);
    ASSERT_EQ(boundary_cut_entropy(r.state, 0, 6), 0);
    ASSERT_NEAR(boundary_cut_entropy(r.state, 2, 1), std::log(2.0), 1e-15);
    ASSERT_NEAR(ea_order(r.state), 6.0, 1e-12);
    auto edges = zz_stabilizer_set(r.state);
    ASSERT_EQ(edges.size(), 5u);
    for (uint32_t k = 0; k < 5; k++) {
        ASSERT_EQ(edges[k].i, k);
        ASSERT_EQ(edges[k].j, k + 1);
    }
    CounterRng br2(1);
    CounterRng orng2(2);
    auto para = run_bulk_sweep(lat, Protocol{ProtocolMode::pauli_pq, 0, 1}, br2, orng2);
    ASSERT_TRUE(zz_stabilizer_set(para.state).empty());
    ASSERT_NEAR(ea_order(para.state), 1.0, 1e-12);
}

TEST(loop_engine, mie_relations_match_oracle) {
    // With everything else measured the two regions form a pure state, so their entanglement is
    // half the mutual information.
    auto half_mi = [](const StabilizerTableau &t, const Region &a, const Region &b) {
        Region ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        return (entropy(t, a) + entropy(t, b) - entropy(t, ab)) / 2;
    };
    for (auto spec : {
             cyl(4, 6, UnmeasuredRegion::both_boundaries()),
             cyl(3, 5, UnmeasuredRegion::both_boundaries()),
             cyl(4, 6, UnmeasuredRegion::two_sites(5, 10)),
             LatticeSpec{4, 4, Topology::torus, UnmeasuredRegion::two_sites(1, 11), false},
         }) {
        auto lat = std::make_shared<const Lattice>(spec);
        for (uint64_t t = 0; t < 150; t++) {
            CounterRng br = CounterRng::stream(21, t, kBasisStream);
            CounterRng orng = CounterRng::stream(21, t, kOutcomeStream);
            double q = 0.2 + 0.1 * (t % 6);
            SweepResult r = run_bulk_sweep(lat, Protocol{ProtocolMode::pauli_pq, 0.4, q}, br, orng);
            StabilizerTableau oracle = prepare_toric_ground(spec);
            replay_record(oracle, r.record);
            if (spec.region.kind == RegionKind::both_boundaries) {
                Region top;
                Region bottom;
                for (uint32_t x = 0; x < spec.lx; x++) {
                    top.push_back(lat->site_index(x, spec.ly - 1));
                    bottom.push_back(lat->site_index(x, 0));
                }
                ASSERT_EQ(spanning_number(r.state) % 2, 0u);
                ASSERT_NEAR(half_mi(oracle, top, bottom), two_boundary_mie(r.state), 1e-12) << t;
            } else {
                double mie = half_mi(oracle, {spec.region.site_i}, {spec.region.site_j});
                ASSERT_NEAR(mie, two_site_mie(classify_two_site(r.state)), 1e-12) << t;
            }
        }
    }
}
