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

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace partonloop;

namespace {

constexpr double kProjectiveCut = 1e-9;
constexpr double kImpossible = 1e-12;

double binary_entropy(double p) {
    double out = 0;
    if (p > 0) {
        out -= p * std::log(p);
    }
    if (p < 1) {
        out -= (1 - p) * std::log(1 - p);
    }
    return out;
}

// Rotates modes (a, b) by angle phi: gamma_a -> c gamma_a + s gamma_b, gamma_b -> -s gamma_a + c gamma_b.
void rotate_pair(Covariance &m, uint32_t a, uint32_t b, double phi) {
    double c = std::cos(phi);
    double s = std::sin(phi);
    Eigen::VectorXd ra = m.row(a);
    Eigen::VectorXd rb = m.row(b);
    m.row(a) = c * ra + s * rb;
    m.row(b) = -s * ra + c * rb;
    Eigen::VectorXd ca = m.col(a);
    Eigen::VectorXd cb = m.col(b);
    m.col(a) = c * ca + s * cb;
    m.col(b) = -s * ca + c * cb;
}

}  // namespace

MeasureAxis MeasureAxis::from_angles(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

void MeasureAxis::validate() const {
    double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (!(std::abs(norm - 1) <= 1e-12)) {
        throw std::invalid_argument("measurement axis must be a unit vector");
    }
}

Eigen::Matrix4d partonloop::tensor_covariance(const MeasureAxis &n) {
    n.validate();
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    auto set = [&](int a, int b, double v) {
        m(a - 1, b - 1) += v;
        m(b - 1, a - 1) -= v;
    };
    // Both dictionary pairs of each Pauli, weighted by the axis component.
    set(1, 2, n.nx);
    set(4, 3, n.nx);
    set(2, 3, n.ny);
    set(4, 1, n.ny);
    set(1, 3, n.nz);
    set(2, 4, n.nz);
    return m;
}

KrausParams partonloop::kraus_params(const MeasureAxis &n) {
    n.validate();
    KrausParams k;
    k.im_alpha = 0.5 * std::atan2(n.ny, n.nz);
    if (std::abs(n.nx) >= 1 - kProjectiveCut) {
        k.projective = true;
        k.prefactor = 0;
        k.re_alpha = n.nx > 0 ? -INFINITY : INFINITY;
        return k;
    }
    k.projective = false;
    k.prefactor = std::pow(1 - n.nx * n.nx, 0.25);
    k.re_alpha = -0.25 * std::log((1 + n.nx) / (1 - n.nx));
    return k;
}

KrausResult partonloop::apply_kraus(Covariance &m, uint32_t i, const MeasureAxis &n, CounterRng *rng, int forced) {
    n.validate();
    uint32_t size = (uint32_t)m.rows();
    if (size < 2 || i >= size || m.cols() != size) {
        throw std::invalid_argument("Kraus bond outside the chain");
    }
    uint32_t a = i;
    uint32_t b = (i + 1) % size;
    if (m.row(a).squaredNorm() > 1 + 1e-9 || m.row(b).squaredNorm() > 1 + 1e-9) {
        throw std::logic_error("unphysical covariance row entering a Kraus update");
    }
    double mab = m(a, b);
    double p_plus = 0.5 * (1 + n.nx * mab);
    double p_minus = 0.5 * (1 - n.nx * mab);
    if (p_plus < -kImpossible || p_minus < -kImpossible) {
        throw std::logic_error("Born probability outside [0, 1]");
    }
    int outcome = forced;
    if (outcome == 0) {
        if (p_plus <= kImpossible) {
            outcome = -1;
        } else if (p_minus <= kImpossible) {
            outcome = +1;
        } else {
            if (rng == nullptr) {
                throw std::invalid_argument("random Kraus outcome without an rng");
            }
            outcome = rng->uniform() < p_plus ? +1 : -1;
        }
    }
    KrausResult result{outcome, outcome > 0 ? p_plus : p_minus, outcome > 0 ? p_minus : p_plus};
    if (result.born_prob <= kImpossible) {
        throw std::logic_error("postselected Kraus outcome has zero probability");
    }

    double lambda = outcome * n.nx;
    if (lambda != 0) {
        bool projective = std::abs(lambda) >= 1 - kProjectiveCut;
        if (projective) {
            lambda = lambda > 0 ? 1 : -1;
        }
        double denom = 1 + lambda * mab;
        double c = lambda / denom;
        Eigen::VectorXd u = m.col(a);
        Eigen::VectorXd v = m.col(b);
        // Two outer-product updates; a single expression would materialize an N x N temporary.
        m.noalias() += (c * v) * u.transpose();
        m.noalias() -= (c * u) * v.transpose();
        double keep = projective ? 0 : std::sqrt(1 - lambda * lambda) / denom;
        m.col(a) = keep * u;
        m.col(b) = keep * v;
        m.row(a) = -keep * u.transpose();
        m.row(b) = -keep * v.transpose();
        m(a, a) = 0;
        m(b, b) = 0;
        m(a, b) = (mab + lambda) / denom;
        m(b, a) = -m(a, b);
    }
    double ny = outcome * n.ny;
    double nz = outcome * n.nz;
    if (ny != 0 || nz != 0) {
        double phi = std::atan2(ny, nz);
        if (phi != 0) {
            rotate_pair(m, a, b, phi);
        }
    }
    return result;
}

Covariance partonloop::initial_chain_covariance(const Lattice &lattice) {
    uint32_t lx = lattice.spec().lx;
    uint32_t size = 2 * lx;
    Covariance m = Covariance::Zero(size, size);
    uint32_t off = lattice.offset(0);
    for (uint32_t x = 0; x < lx; x++) {
        uint32_t p = (2 * x + 1 + off) % size;
        uint32_t q = (p + 1) % size;
        double sign = (lattice.bottom_twist() && x + 1 == lx) ? -1 : 1;
        m(p, q) = sign;
        m(q, p) = -sign;
    }
    return m;
}

double partonloop::gaussian_entropy(const Covariance &m, const std::vector<uint32_t> &modes) {
    if (modes.empty()) {
        return 0;
    }
    std::vector<int> idx(modes.begin(), modes.end());
    Eigen::MatrixXd sub = m(idx, idx);
    Eigen::MatrixXd sq = -sub * sub;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sq + sq.transpose()), Eigen::EigenvaluesOnly);
    double s = 0;
    for (int k = 0; k < es.eigenvalues().size(); k++) {
        double lam = std::sqrt(std::clamp(es.eigenvalues()[k], 0.0, 1.0));
        s += binary_entropy(0.5 * (1 + lam));
    }
    // Each eigenvalue of -A^2 appears twice.
    return 0.5 * s;
}

double partonloop::chain_cut_entropy(const Covariance &m, uint32_t start, uint32_t length) {
    uint32_t size = (uint32_t)m.rows();
    uint32_t sites = size / 2;
    if (length == 0 || length >= sites) {
        return 0;
    }
    // The complement has the same entropy for a pure state; use the smaller block.
    if (2 * length > sites) {
        start = (start + length) % sites;
        length = sites - length;
    }
    std::vector<uint32_t> modes;
    for (uint32_t k = 0; k < 2 * length; k++) {
        modes.push_back((2 * start + k) % size);
    }
    return gaussian_entropy(m, modes);
}

double partonloop::purity_drift(const Covariance &m) {
    Eigen::MatrixXd sq = m * m;
    sq.diagonal().array() += 1;
    return sq.cwiseAbs().maxCoeff();
}

void partonloop::check_physical(const Covariance &m) {
    if (m.rows() != m.cols()) {
        throw std::logic_error("covariance must be square");
    }
    if ((m + m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::logic_error("covariance is not antisymmetric");
    }
    Eigen::MatrixXd sq = -m * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sq + sq.transpose()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > std::pow(1 + 1e-10, 2)) {
        throw std::logic_error("covariance has a singular value above 1");
    }
}

void partonloop::reorthogonalize(Covariance &m) {
    Eigen::MatrixXd sq = m * m;
    sq.diagonal().array() += 3;
    Covariance next = 0.5 * m * sq;
    m = 0.5 * (next - next.transpose());
}

AxisDistribution AxisDistribution::pauli_pq(double p, double q) {
    if (!(p >= 0 && p <= 1 && q >= 0 && q <= 1)) {
        throw std::invalid_argument("protocol probabilities must lie in [0, 1]");
    }
    AxisDistribution w;
    double wx = q * (1 - p) / 2;
    double wy = p / 2;
    double wz = (1 - q) * (1 - p) / 2;
    for (int s : {1, -1}) {
        w.atoms.push_back({{(double)s, 0, 0}, wx});
        w.atoms.push_back({{0, (double)s, 0}, wy});
        w.atoms.push_back({{0, 0, (double)s}, wz});
    }
    return w;
}

AxisDistribution AxisDistribution::smeared(double p, double q, double spread) {
    AxisDistribution w = pauli_pq(p, q);
    w.spread = spread;
    return w;
}

void AxisDistribution::validate() const {
    double total = 0;
    for (const auto &a : atoms) {
        a.n.validate();
        if (!(a.weight >= 0)) {
            throw std::invalid_argument("axis weights must be non-negative");
        }
        total += a.weight;
    }
    if (!(total > 0)) {
        throw std::invalid_argument("axis distribution has zero total weight");
    }
    if (!(spread >= 0 && spread <= M_PI / 2)) {
        throw std::invalid_argument("axis spread must lie in [0, pi/2]");
    }
    auto weight_at = [&](const MeasureAxis &n) {
        double s = 0;
        for (const auto &a : atoms) {
            if (std::abs(a.n.nx - n.nx) + std::abs(a.n.ny - n.ny) + std::abs(a.n.nz - n.nz) < 1e-12) {
                s += a.weight;
            }
        }
        return s;
    };
    for (const auto &a : atoms) {
        if (std::abs(weight_at(a.n) - weight_at(-a.n)) > 1e-12) {
            throw std::invalid_argument("axis distribution is not antipodal-symmetric");
        }
    }
}

MeasureAxis AxisDistribution::sample(CounterRng &rng) const {
    double total = 0;
    for (const auto &a : atoms) {
        total += a.weight;
    }
    double u = rng.uniform() * total;
    const WeightedAxis *pick = &atoms.back();
    for (const auto &a : atoms) {
        if (u < a.weight) {
            pick = &a;
            break;
        }
        u -= a.weight;
    }
    MeasureAxis n = pick->n;
    if (spread == 0) {
        return n;
    }
    double eps = (2 * rng.uniform() - 1) * spread;
    double c = std::cos(eps);
    double s = std::sin(eps);
    if (std::abs(n.ny) < 1e-12) {
        // Tilt toward the y axis inside the plane spanned with it.
        return {c * n.nx, s, c * n.nz};
    }
    bool toward_x = rng.coin() > 0;
    return {toward_x ? s : 0, c * n.ny, toward_x ? 0 : s};
}

MeasureAxis partonloop::wen_axis(const MeasureAxis &toric, Sublattice sublattice) {
    if (sublattice == Sublattice::A) {
        return toric;
    }
    return {toric.nz, -toric.ny, toric.nx};
}

GaussianRun partonloop::run_axes(
    const Lattice &lattice, const std::vector<MeasureAxis> &toric_axes, CounterRng &outcome_rng) {
    const LatticeSpec &spec = lattice.spec();
    if (spec.topology != Topology::cylinder || spec.region.kind != RegionKind::top_boundary) {
        throw std::invalid_argument("the Gaussian chain needs a cylinder with an unmeasured top row");
    }
    const auto &order = lattice.measured_sites();
    if (toric_axes.size() != order.size()) {
        throw std::invalid_argument("need one axis per measured site");
    }
    uint32_t size = 2 * spec.lx;
    // Drift checks cost a dense product; space them out on wide chains.
    uint32_t check_every = std::max<uint32_t>(1, size / 32);
    GaussianRun run{initial_chain_covariance(lattice), {}, 0, 0};
    run.outcomes.reserve(order.size());
    uint32_t row = 0;
    for (size_t k = 0; k < order.size(); k++) {
        Site p = lattice.site(order[k]);
        MeasureAxis n = wen_axis(toric_axes[k], lattice.sublattice_of(p));
        uint32_t i = (2 * p.x + lattice.offset(p.y)) % size;
        run.outcomes.push_back((int8_t)apply_kraus(run.m, i, n, &outcome_rng).outcome);
        bool row_done = k + 1 == order.size() || lattice.site(order[k + 1]).y != p.y;
        if (row_done) {
            row++;
            if (row % check_every == 0 || k + 1 == order.size()) {
                double drift = purity_drift(run.m);
                run.max_drift = std::max(run.max_drift, drift);
                if (drift > 1e-9) {
                    reorthogonalize(run.m);
                    run.reorthogonalizations++;
                }
            }
        }
    }
    return run;
}

GaussianRun partonloop::run_general_protocol(
    const LatticeSpec &spec, const AxisDistribution &w, CounterRng &axis_rng, CounterRng &outcome_rng) {
    w.validate();
    Lattice lattice(spec);
    std::vector<MeasureAxis> axes;
    axes.reserve(lattice.measured_sites().size());
    for (size_t k = 0; k < lattice.measured_sites().size(); k++) {
        axes.push_back(w.sample(axis_rng));
    }
    return run_axes(lattice, axes, outcome_rng);
}
