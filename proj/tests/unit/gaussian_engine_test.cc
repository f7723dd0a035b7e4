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


#include "partonloop/gaussian_engine.h"

#include <cmath>
#include <complex>

#include "gtest/gtest.h"
#include "partonloop/loop_engine.h"
#include "partonloop/stabilizer_oracle.h"
#include "support/dense_majorana.h"

using namespace partonloop;
using namespace partonloop_test;

TEST(gaussian_engine, tensor_covariance) {
    Eigen::Matrix4d z = tensor_covariance({0, 0, 1});
    ASSERT_EQ(z(0, 2), 1);
    ASSERT_EQ(z(1, 3), 1);
    ASSERT_EQ(z(0, 1), 0);
    Eigen::Matrix4d x = tensor_covariance({1, 0, 0});
    ASSERT_EQ(x(0, 1), 1);
    ASSERT_EQ(x(3, 2), 1);
    CounterRng rng(4);
    for (int t = 0; t < 50; t++) {
        MeasureAxis n = random_axis(rng);
        Eigen::Matrix4d m = tensor_covariance(n);
        ASSERT_LT((m + m.transpose()).cwiseAbs().maxCoeff(), 1e-15);
        ASSERT_LT((m * m + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
        // <F1> = n_x M_12 + n_y M_23 + n_z M_13 and the second-pair analogue are both 1.
        ASSERT_NEAR(n.nx * m(0, 1) + n.ny * m(1, 2) + n.nz * m(0, 2), 1, 1e-12);
        ASSERT_NEAR(n.nx * m(3, 2) + n.ny * m(3, 0) + n.nz * m(1, 3), 1, 1e-12);
    }
}

TEST(gaussian_engine, kraus_params) {
    KrausParams z = kraus_params({0, 0, 1});
    ASSERT_EQ(z.re_alpha, 0);
    ASSERT_EQ(z.im_alpha, 0);
    ASSERT_EQ(z.prefactor, 1);
    KrausParams y = kraus_params({0, 1, 0});
    ASSERT_EQ(y.re_alpha, 0);
    ASSERT_NEAR(y.im_alpha, M_PI / 4, 1e-15);
    ASSERT_TRUE(kraus_params({1, 0, 0}).projective);
    ASSERT_TRUE(kraus_params({-1, 0, 0}).projective);
    CounterRng rng(8);
    for (int t = 0; t < 100; t++) {
        MeasureAxis n = random_axis(rng);
        KrausParams k = kraus_params(n);
        ASSERT_NEAR(std::exp(-2 * k.re_alpha), std::sqrt((1 + n.nx) / (1 - n.nx)), 1e-12);
        cd phase = std::exp(cd(0, 2 * k.im_alpha));
        cd want = cd(n.nz, n.ny) / std::sqrt(n.ny * n.ny + n.nz * n.nz);
        ASSERT_LT(std::abs(phase - want), 1e-12);
    }
    ASSERT_THROW(kraus_params({1, 1, 0}), std::invalid_argument);
}

TEST(gaussian_engine, kraus_update_matches_dense_state) {
    const int nq = 3;
    auto g = dense_majoranas(nq);
    CounterRng rng(21);
    for (int t = 0; t < 200; t++) {
        CVec psi = random_gaussian_state(g, rng);
        Covariance m = dense_covariance(g, psi);
        uint32_t a = (uint32_t)(rng() % (2 * nq));
        uint32_t b = (a + 1) % (2 * nq);
        MeasureAxis n = t % 10 == 0 ? MeasureAxis{t % 20 ? 1.0 : -1.0, 0, 0} : random_axis(rng);
        int outcome = rng.coin();
        MeasureAxis signed_n = outcome > 0 ? n : -n;
        CVec next = dense_kraus(g, a, b, signed_n) * psi;
        double prob = 0.5 * next.squaredNorm();
        if (prob < 1e-9) {
            continue;
        }
        KrausResult r = apply_kraus(m, a, n, nullptr, outcome);
        ASSERT_NEAR(r.born_prob, prob, 1e-12) << t;
        ASSERT_NEAR(r.born_prob + r.other_prob, 1, 1e-12);
        Covariance want = dense_covariance(g, next.normalized());
        ASSERT_LT((m - want).cwiseAbs().maxCoeff(), 1e-10) << t << " bond " << a;
    }
}

TEST(gaussian_engine, weak_update_anchors) {
    CounterRng rng(31);
    Covariance m0 = pure_random_covariance(3, rng);
    // No parity component: a rotation, so entropies and purity are unchanged.
    Covariance m = m0;
    apply_kraus(m, 2, MeasureAxis::from_angles(0.7, M_PI / 2), nullptr, +1);
    ASSERT_LT(purity_drift(m), 1e-12);
    ASSERT_NEAR(gaussian_entropy(m, {2, 3}), gaussian_entropy(m0, {2, 3}), 1e-12);
    ASSERT_LT(std::abs(m(4, 5) - m0(4, 5)), 1e-12);
    // Two weak parity measurements with the same outcome compose into one stronger one.
    double l1 = 0.3, l2 = 0.5;
    double l12 = (l1 + l2) / (1 + l1 * l2);
    Covariance parity_only = m0;
    Covariance once = m0;
    auto weak = [](Covariance &c, double l) {
        // Pure parity factor: the axis (l, sqrt(1 - l^2), 0) rotates by pi/2; undo with -y.
        apply_kraus(c, 1, {l, std::sqrt(1 - l * l), 0}, nullptr, +1);
        apply_kraus(c, 1, {0, -1, 0}, nullptr, +1);
    };
    weak(parity_only, l1);
    weak(parity_only, l2);
    weak(once, l12);
    ASSERT_LT((parity_only - once).cwiseAbs().maxCoeff(), 1e-12);
    // Projective parity on a bond with zero parity: even odds and a definite result.
    Covariance d = Covariance::Zero(4, 4);
    d(0, 3) = 1;
    d(3, 0) = -1;
    d(1, 2) = 1;
    d(2, 1) = -1;
    Covariance e = d;
    KrausResult r = apply_kraus(e, 0, {1, 0, 0}, nullptr, -1);
    ASSERT_EQ(r.born_prob, 0.5);
    ASSERT_EQ(e(0, 1), -1);
    ASSERT_EQ(e(2, 3), -1);
    ASSERT_THROW(apply_kraus(e, 0, {1, 0, 0}, nullptr, +1), std::logic_error);
}

TEST(gaussian_engine, entropy) {
    Covariance d = Covariance::Zero(4, 4);
    d(0, 1) = 1;
    d(1, 0) = -1;
    d(2, 3) = 1;
    d(3, 2) = -1;
    ASSERT_EQ(gaussian_entropy(d, {0, 1}), 0);
    ASSERT_NEAR(gaussian_entropy(d, {1, 2}), std::log(2.0), 1e-15);
    CounterRng rng(41);
    Covariance m = pure_random_covariance(4, rng);
    check_physical(m);
    ASSERT_NEAR(gaussian_entropy(m, {0, 1, 2}), gaussian_entropy(m, {3, 4, 5, 6, 7}), 1e-8);
    ASSERT_NEAR(chain_cut_entropy(m, 3, 3), chain_cut_entropy(m, 2, 1), 1e-8);
    Covariance bad = m;
    bad(0, 1) += 1e-6;
    ASSERT_THROW(check_physical(bad), std::logic_error);
    Covariance big = 1.01 * m;
    ASSERT_THROW(check_physical(big), std::logic_error);
}

TEST(gaussian_engine, reorthogonalize_removes_drift) {
    CounterRng rng(43);
    Covariance m = pure_random_covariance(4, rng);
    Covariance noisy = m;
    for (int i = 0; i < 8; i++) {
        for (int j = i + 1; j < 8; j++) {
            double e = 1e-6 * (rng.uniform() - 0.5);
            noisy(i, j) += e;
            noisy(j, i) -= e;
        }
    }
    ASSERT_GT(purity_drift(noisy), 1e-9);
    reorthogonalize(noisy);
    reorthogonalize(noisy);
    ASSERT_LT(purity_drift(noisy), 1e-12);
    ASSERT_LT((noisy - m).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(gaussian_engine, axis_distributions) {
    AxisDistribution w = AxisDistribution::pauli_pq(0, 0.3);
    w.validate();
    CounterRng rng(5);
    int x = 0;
    for (int t = 0; t < 20000; t++) {
        MeasureAxis n = w.sample(rng);
        ASSERT_EQ(n.ny, 0);
        x += n.nx != 0;
    }
    ASSERT_NEAR(x / 20000.0, 0.3, 0.015);
    AxisDistribution lopsided = w;
    lopsided.atoms[0].weight += 0.1;
    ASSERT_THROW(lopsided.validate(), std::invalid_argument);
    AxisDistribution s = AxisDistribution::smeared(0.5, 0.5, 0.2);
    s.validate();
    for (int t = 0; t < 1000; t++) {
        ASSERT_NO_THROW(s.sample(rng).validate());
    }
    ASSERT_EQ(wen_axis({1, 0, 0}, Sublattice::B).nz, 1);
    ASSERT_EQ(wen_axis({1, 0, 0}, Sublattice::A).nx, 1);
}

TEST(gaussian_engine, pauli_axes_match_oracle_entropies) {
    LatticeSpec spec{4, 6, Topology::cylinder, UnmeasuredRegion::top_boundary(), false};
    auto lat = std::make_shared<const Lattice>(spec);
    for (uint64_t t = 0; t < 100; t++) {
        CounterRng br = CounterRng::stream(7, t, kBasisStream);
        CounterRng orng = CounterRng::stream(7, t, kOutcomeStream);
        std::vector<Basis> bases;
        std::vector<MeasureAxis> axes;
        for (size_t k = 0; k < lat->measured_sites().size(); k++) {
            Basis b = (Basis)(br() % 3);
            bases.push_back(b);
            axes.push_back({b == Basis::X ? 1.0 : 0.0, b == Basis::Y ? 1.0 : 0.0, b == Basis::Z ? 1.0 : 0.0});
        }
        SweepResult loops = run_fixed_sweep(lat, bases, orng);
        StabilizerTableau oracle = prepare_toric_ground(spec);
        replay_record(oracle, loops.record);
        GaussianRun g = run_axes(*lat, axes, orng);
        ASSERT_LT(g.max_drift, 1e-9);
        for (uint32_t start = 0; start < spec.lx; start++) {
            for (uint32_t len = 1; len < spec.lx; len++) {
                Region sites;
                for (uint32_t i = 0; i < len; i++) {
                    sites.push_back(lat->site_index((start + i) % spec.lx, spec.ly - 1));
                }
                ASSERT_NEAR(chain_cut_entropy(g.m, start, len), entropy(oracle, sites), 1e-8) << t;
            }
        }
    }
}

TEST(gaussian_engine, general_protocol_stays_pure) {
    LatticeSpec spec{6, 8, Topology::cylinder, UnmeasuredRegion::top_boundary(), false};
    CounterRng axes = CounterRng::stream(3, 0, kAxisStream);
    CounterRng outcomes = CounterRng::stream(3, 0, kOutcomeStream);
    GaussianRun g = run_general_protocol(spec, AxisDistribution::smeared(0.5, 0.5, 0.3), axes, outcomes);
    ASSERT_LT(g.max_drift, 1e-9);
    check_physical(g.m);
    AxisDistribution bad;
    bad.atoms.push_back({{1, 0, 0}, 1});
    ASSERT_THROW(run_general_protocol(spec, bad, axes, outcomes), std::invalid_argument);
}
