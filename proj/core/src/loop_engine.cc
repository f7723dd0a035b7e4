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
#include <cmath>
#include <stdexcept>

using namespace partonloop;

static constexpr uint32_t kUnset = UINT32_MAX;

int PairingState::pair_sign(uint32_t a, uint32_t b) const {
    if (a >= partner.size() || partner[a] != b) {
        throw std::invalid_argument("pair_sign of legs that are not partners");
    }
    return sign[a];
}

void PairingState::check_invariants() const {
    for (uint32_t a = 0; a < partner.size(); a++) {
        uint32_t b = partner[a];
        if (b >= partner.size() || b == a || partner[b] != a) {
            throw std::logic_error("partner map is not a perfect matching");
        }
        if (mode == SignMode::tracked && (sign[a] != -sign[b] || sign[a] == 0)) {
            throw std::logic_error("pair signs are not antisymmetric");
        }
    }
}

void LoopStats::merge(const LoopStats &other) {
    trajectories += other.trajectories;
    g4_hits += other.g4_hits;
    spanning_count += other.spanning_count;
    cut_strands += other.cut_strands;
    if (loop_length_histogram.size() < other.loop_length_histogram.size()) {
        loop_length_histogram.resize(other.loop_length_histogram.size(), 0);
    }
    for (size_t k = 0; k < other.loop_length_histogram.size(); k++) {
        loop_length_histogram[k] += other.loop_length_histogram[k];
    }
}

PairingState partonloop::build_initial_matching(std::shared_ptr<const Lattice> lattice, SignMode mode) {
    PairingState st;
    uint32_t n = lattice->num_majoranas();
    st.partner.assign(n, kUnset);
    st.sign.assign(n, 0);
    st.measured.assign(lattice->num_sites(), 0);
    st.mode = mode;
    for (const Dimer &d : lattice->initial_dimers()) {
        if (st.partner[d.a] != kUnset || st.partner[d.b] != kUnset) {
            throw std::logic_error("initial dimers overlap");
        }
        st.partner[d.a] = d.b;
        st.partner[d.b] = d.a;
        st.sign[d.a] = d.sign;
        st.sign[d.b] = (int8_t)-d.sign;
    }
    st.lattice = std::move(lattice);
    st.check_invariants();
    return st;
}

PairingState partonloop::build_initial_matching(const LatticeSpec &spec, SignMode mode) {
    return build_initial_matching(std::make_shared<const Lattice>(spec), mode);
}

static void check_measurable(const PairingState &state, uint32_t a, uint32_t b) {
    if (a == b || a >= state.partner.size() || b >= state.partner.size()) {
        throw std::invalid_argument("bilinear needs two distinct legs inside the lattice");
    }
    if (state.is_frontier(a) || state.is_frontier(b)) {
        throw std::invalid_argument("cannot measure a bilinear on a leg of an unmeasured site");
    }
}

// Given pairs (k, a) and (l, b), measuring i g_a g_b = m leaves <i g_k g_l> = -s_ka * s_lb * m.
static void reconnect(PairingState &state, uint32_t a, uint32_t b, int m) {
    uint32_t k = state.partner[a];
    uint32_t l = state.partner[b];
    int s1 = state.sign[k];
    int s2 = state.sign[l];
    state.partner[a] = b;
    state.partner[b] = a;
    state.partner[k] = l;
    state.partner[l] = k;
    state.sign[a] = (int8_t)m;
    state.sign[b] = (int8_t)-m;
    state.sign[k] = (int8_t)(-s1 * s2 * m);
    state.sign[l] = (int8_t)(s1 * s2 * m);
}

int partonloop::measure_bilinear(PairingState &state, uint32_t a, uint32_t b, CounterRng &rng) {
    check_measurable(state, a, b);
    if (state.partner[a] == b) {
        return state.sign[a];
    }
    int m = rng.coin();
    reconnect(state, a, b, m);
    return m;
}

void partonloop::measure_bilinear_postselected(PairingState &state, uint32_t a, uint32_t b, int m) {
    check_measurable(state, a, b);
    if (m != 1 && m != -1) {
        throw std::invalid_argument("bilinear outcome must be +1 or -1");
    }
    if (state.partner[a] == b) {
        if (state.sign[a] != m) {
            throw std::logic_error("postselected bilinear contradicts its determined sign");
        }
        return;
    }
    reconnect(state, a, b, m);
}

int partonloop::monomial_expectation(const PairingState &state, const MajoranaMonomial &mono) {
    size_t n = mono.modes.size();
    if (n & 1) {
        return 0;
    }
    // Rank of each mode inside the monomial, or kUnset.
    std::vector<uint32_t> rank(state.partner.size(), kUnset);
    for (size_t r = 0; r < n; r++) {
        rank[mono.modes[r]] = (uint32_t)r;
    }
    int sign_product = 1;
    std::vector<uint32_t> mate(n);
    for (size_t r = 0; r < n; r++) {
        uint32_t a = mono.modes[r];
        uint32_t b = state.partner[a];
        if (rank[b] == kUnset) {
            return 0;
        }
        mate[r] = rank[b];
        if (a < b) {
            sign_product *= state.sign[a];
        }
    }
    // Reordering sorted modes into adjacent pairs costs (-1)^crossings.
    std::vector<uint32_t> fenwick(n + 1, 0);
    auto add = [&](size_t i, int d) {
        for (i++; i <= n; i += i & (0 - i)) {
            fenwick[i] += d;
        }
    };
    auto prefix = [&](size_t i) {
        uint32_t s = 0;
        for (; i > 0; i -= i & (0 - i)) {
            s += fenwick[i];
        }
        return s;
    };
    uint64_t crossings = 0;
    for (size_t r = 0; r < n; r++) {
        if (mate[r] > r) {
            add(r, 1);
        } else {
            size_t open = mate[r];
            crossings += prefix(r) - prefix(open + 1);
            add(open, -1);
        }
    }
    // prod over pairs of (i g_a g_b) = i^(n/2) * (-1)^crossings * sorted monomial.
    int e = (int)mono.phase - (int)(n / 2) + 2 * (int)(crossings & 1) + (sign_product < 0 ? 2 : 0);
    e = ((e % 4) + 4) % 4;
    if (e & 1) {
        throw std::logic_error("monomial expectation is not real; operator is not Hermitian");
    }
    return e == 0 ? +1 : -1;
}

int partonloop::physical_expectation(const PairingState &state, const std::vector<SitePauli> &wen_paulis) {
    if (state.mode != SignMode::tracked) {
        throw std::logic_error("physical expectations need tracked signs");
    }
    const Lattice &lat = *state.lattice;
    uint32_t ns = lat.num_sites();
    std::vector<uint8_t> emask(ns, 0);
    std::vector<uint8_t> ephase(ns, 0);
    for (const SitePauli &f : wen_paulis) {
        if (f.site >= ns || emask[f.site]) {
            throw std::invalid_argument("Pauli factors must sit on distinct lattice sites");
        }
        LegPair lp = dictionary_pairs(f.basis)[0];
        emask[f.site] = (uint8_t)((1 << (lp.first - 1)) | (1 << (lp.second - 1)));
        ephase[f.site] = lp.first < lp.second ? 1 : 3;
    }
    // Choose which sites to multiply by D so the operator becomes a union of matched pairs.
    std::vector<int8_t> x(ns, -1);
    std::vector<uint32_t> queue;
    queue.reserve(ns);
    for (uint32_t start = 0; start < ns; start++) {
        if (x[start] != -1) {
            continue;
        }
        x[start] = 0;
        queue.clear();
        queue.push_back(start);
        for (size_t qi = 0; qi < queue.size(); qi++) {
            uint32_t u = queue[qi];
            for (uint32_t leg = 0; leg < 4; leg++) {
                uint32_t a = 4 * u + leg;
                uint32_t b = state.partner[a];
                uint32_t v = b >> 2;
                int want = x[u] ^ ((emask[u] >> leg) & 1) ^ ((emask[v] >> (b & 3)) & 1);
                if (x[v] == -1) {
                    x[v] = (int8_t)want;
                    queue.push_back(v);
                } else if (x[v] != want) {
                    return 0;
                }
            }
        }
    }
    MajoranaMonomial mono;
    int phase = 0;
    for (uint32_t s = 0; s < ns; s++) {
        uint8_t mask = emask[s];
        phase += ephase[s];
        if (x[s]) {
            uint8_t out;
            phase += local_product_phase(mask, 0xF, &out);
            mask = out;
        }
        for (uint32_t leg = 0; leg < 4; leg++) {
            if (mask & (1 << leg)) {
                mono.modes.push_back(4 * s + leg);
            }
        }
    }
    mono.phase = (uint8_t)(phase & 3);
    return monomial_expectation(state, mono);
}

TileResult partonloop::apply_tile(PairingState &state, uint32_t site, Basis wen, CounterRng &outcome_rng) {
    const Lattice &lat = *state.lattice;
    if (site >= lat.num_sites()) {
        throw std::out_of_range("tile site outside the lattice");
    }
    if (!lat.is_measured(site)) {
        throw std::invalid_argument("site belongs to the unmeasured region");
    }
    if (state.measured[site]) {
        throw std::invalid_argument("site measured twice");
    }
    state.measured[site] = 1;
    const LegPair *pairs = dictionary_pairs(wen);
    uint32_t a1 = Lattice::majorana(site, pairs[0].first);
    uint32_t b1 = Lattice::majorana(site, pairs[0].second);
    uint32_t a2 = Lattice::majorana(site, pairs[1].first);
    uint32_t b2 = Lattice::majorana(site, pairs[1].second);
    if (state.mode == SignMode::connectivity_only) {
        if (state.partner[a1] != b1) {
            reconnect(state, a1, b1, 1);
        }
        if (state.partner[a2] != b2) {
            reconnect(state, a2, b2, 1);
        }
        return {0, false};
    }
    int v = physical_expectation(state, {SitePauli{site, wen}});
    int m = v != 0 ? v : outcome_rng.coin();
    measure_bilinear_postselected(state, a1, b1, m);
    measure_bilinear_postselected(state, a2, b2, m);
    return {m, v != 0};
}

Basis partonloop::sample_basis(const BasisDistribution &d, CounterRng &rng) {
    double u = rng.uniform();
    if (u < d.px) {
        return Basis::X;
    }
    if (u < d.px + d.py) {
        return Basis::Y;
    }
    return Basis::Z;
}

static SweepResult sweep_impl(
    std::shared_ptr<const Lattice> lattice,
    const Protocol *protocol,
    const std::vector<Basis> *fixed,
    CounterRng *basis_rng,
    CounterRng &outcome_rng,
    SignMode mode) {
    SweepResult out{build_initial_matching(lattice, mode), {}};
    const auto &order = lattice->measured_sites();
    if (fixed != nullptr && fixed->size() != order.size()) {
        throw std::invalid_argument("need one basis per measured site");
    }
    out.record.entries.reserve(order.size());
    BasisDistribution dist[2];
    if (protocol != nullptr) {
        dist[0] = translate_protocol(*protocol, Model::toric_code, Sublattice::A);
        dist[1] = translate_protocol(*protocol, Model::toric_code, Sublattice::B);
    }
    for (size_t k = 0; k < order.size(); k++) {
        uint32_t s = order[k];
        Sublattice sub = lattice->sublattice_of(s);
        Basis toric = fixed != nullptr ? (*fixed)[k] : sample_basis(dist[(int)sub], *basis_rng);
        TileResult r = apply_tile(out.state, s, wen_basis(toric, sub), outcome_rng);
        int8_t outcome = (int8_t)(r.outcome * wen_outcome_factor(toric, sub));
        out.record.entries.push_back({s, toric, outcome, r.forced});
    }
    return out;
}

SweepResult partonloop::run_bulk_sweep(
    std::shared_ptr<const Lattice> lattice,
    const Protocol &protocol,
    CounterRng &basis_rng,
    CounterRng &outcome_rng,
    SignMode mode) {
    return sweep_impl(std::move(lattice), &protocol, nullptr, &basis_rng, outcome_rng, mode);
}

SweepResult partonloop::run_fixed_sweep(
    std::shared_ptr<const Lattice> lattice,
    const std::vector<Basis> &toric_bases,
    CounterRng &outcome_rng,
    SignMode mode) {
    return sweep_impl(std::move(lattice), nullptr, &toric_bases, nullptr, outcome_rng, mode);
}

TwoSiteClass partonloop::classify_two_site(const PairingState &state) {
    const LatticeSpec &spec = state.lattice->spec();
    if (spec.region.kind != RegionKind::two_sites) {
        throw std::invalid_argument("classify_two_site needs a two_sites region");
    }
    uint32_t si = spec.region.site_i;
    uint32_t sj = spec.region.site_j;
    int cross = 0;
    for (uint32_t s : {si, sj}) {
        for (uint32_t leg = 1; leg <= 4; leg++) {
            uint32_t other = Lattice::site_of_majorana(state.partner[Lattice::majorana(s, leg)]);
            if (other != si && other != sj) {
                throw std::logic_error("frontier endpoints != 8: a strand leaves the two-site frontier");
            }
            cross += (s == si && other == sj);
        }
    }
    return cross == 0 ? TwoSiteClass::a : cross == 2 ? TwoSiteClass::b : TwoSiteClass::c;
}

double partonloop::two_site_mie(TwoSiteClass c) {
    return c == TwoSiteClass::c ? std::log(2.0) : 0.0;
}

Estimate partonloop::watermelon_g4(const LatticeSpec &spec, const Protocol &protocol, uint64_t samples, uint64_t seed) {
    if (spec.region.kind != RegionKind::two_sites) {
        throw std::invalid_argument("watermelon_g4 needs two distinct marked sites");
    }
    if (samples < 1) {
        throw std::invalid_argument("watermelon_g4 needs at least one sample");
    }
    auto lattice = std::make_shared<const Lattice>(spec);
    std::vector<double> hits;
    hits.reserve(samples);
    for (uint64_t t = 0; t < samples; t++) {
        CounterRng basis = CounterRng::stream(seed, t, kBasisStream);
        CounterRng outcome = CounterRng::stream(seed, t, kOutcomeStream);
        SweepResult r = run_bulk_sweep(lattice, protocol, basis, outcome, SignMode::connectivity_only);
        hits.push_back(classify_two_site(r.state) == TwoSiteClass::c ? 1.0 : 0.0);
    }
    return batch_means(hits);
}

uint32_t partonloop::spanning_number(const PairingState &state) {
    const Lattice &lat = *state.lattice;
    if (lat.spec().region.kind != RegionKind::both_boundaries) {
        throw std::invalid_argument("spanning_number needs both boundaries unmeasured");
    }
    uint32_t top = lat.ly() - 1;
    uint32_t count = 0;
    for (uint32_t s : lat.row_sites(top)) {
        for (uint32_t leg = 1; leg <= 2; leg++) {
            uint32_t b = state.partner[Lattice::majorana(s, leg)];
            Site o = lat.site(Lattice::site_of_majorana(b));
            uint32_t ol = Lattice::leg_of_majorana(b);
            if (o.y == 0 && ol >= 3) {
                count++;
            } else if (!(o.y == top && ol <= 2)) {
                throw std::logic_error("boundary strand ends inside the bulk; sweep incomplete");
            }
        }
    }
    return count;
}

double partonloop::two_boundary_mie(const PairingState &state) {
    uint32_t n = spanning_number(state);
    return n > 2 ? (double)(n - 2) * std::log(2.0) / 2 : 0.0;
}

static void require_top_boundary(const Lattice &lat) {
    if (lat.spec().region.kind != RegionKind::top_boundary) {
        throw std::invalid_argument("observable needs the top boundary unmeasured");
    }
}

// Chain partner of each top-boundary position 2x + (leg - 1), legs 1 and 2.
static std::vector<uint32_t> top_chain_partners(const PairingState &state) {
    const Lattice &lat = *state.lattice;
    uint32_t top = lat.ly() - 1;
    uint32_t l = lat.lx();
    std::vector<uint32_t> cp(2 * l);
    for (uint32_t x = 0; x < l; x++) {
        uint32_t s = lat.site_index(x, top);
        for (uint32_t leg = 1; leg <= 2; leg++) {
            uint32_t b = state.partner[Lattice::majorana(s, leg)];
            Site o = lat.site(Lattice::site_of_majorana(b));
            uint32_t ol = Lattice::leg_of_majorana(b);
            if (o.y != top || ol > 2) {
                throw std::logic_error("boundary strand ends inside the bulk; sweep incomplete");
            }
            cp[2 * x + leg - 1] = 2 * o.x + ol - 1;
        }
    }
    return cp;
}

double partonloop::boundary_cut_entropy(const PairingState &state, uint32_t start, uint32_t length) {
    const Lattice &lat = *state.lattice;
    require_top_boundary(lat);
    uint32_t l = lat.lx();
    if (start >= l || length > l) {
        throw std::invalid_argument("cut interval outside the boundary");
    }
    std::vector<uint32_t> cp = top_chain_partners(state);
    std::vector<uint8_t> inside(l, 0);
    for (uint32_t t = 0; t < length; t++) {
        inside[(start + t) % l] = 1;
    }
    uint32_t n = 0;
    for (uint32_t pos = 0; pos < 2 * l; pos++) {
        n += inside[pos / 2] && !inside[cp[pos] / 2];
    }
    return (double)n * std::log(2.0) / 2;
}

std::vector<uint8_t> partonloop::zz_correlation_matrix(const PairingState &state) {
    const Lattice &lat = *state.lattice;
    require_top_boundary(lat);
    uint32_t l = lat.lx();
    std::vector<uint32_t> cp = top_chain_partners(state);
    std::vector<uint8_t> corr((size_t)l * l, 0);
    for (uint32_t i = 0; i < l; i++) {
        corr[(size_t)i * l + i] = 1;
        uint32_t lo = UINT32_MAX;
        uint32_t hi = 0;
        for (uint32_t j = i + 1; j < l; j++) {
            for (uint32_t pos : {2 * j - 1, 2 * j}) {
                lo = std::min(lo, cp[pos]);
                hi = std::max(hi, cp[pos]);
            }
            if (lo >= 2 * i + 1 && hi <= 2 * j) {
                corr[(size_t)i * l + j] = 1;
                corr[(size_t)j * l + i] = 1;
            }
        }
    }
    return corr;
}

std::vector<ZZEdge> partonloop::zz_stabilizer_set(const PairingState &state) {
    const Lattice &lat = *state.lattice;
    require_top_boundary(lat);
    uint32_t l = lat.lx();
    uint32_t top = lat.ly() - 1;
    std::vector<uint32_t> cp = top_chain_partners(state);
    std::vector<uint8_t> corr = zz_correlation_matrix(state);
    std::vector<ZZEdge> out;
    for (uint32_t i = 0; i < l; i++) {
        uint32_t j2 = cp[2 * i + 1];
        if ((j2 & 1) || j2 <= 2 * i + 1) {
            continue;
        }
        uint32_t j = j2 / 2;
        if (!corr[(size_t)i * l + j]) {
            continue;
        }
        int s = physical_expectation(
            state, {SitePauli{lat.site_index(i, top), Basis::Z}, SitePauli{lat.site_index(j, top), Basis::Z}});
        if (s == 0) {
            throw std::logic_error("enclosed strand did not produce a ZZ stabilizer");
        }
        out.push_back({i, j, (int8_t)s});
    }
    return out;
}

double partonloop::ea_order(const PairingState &state) {
    std::vector<uint8_t> corr = zz_correlation_matrix(state);
    double total = 0;
    for (uint8_t c : corr) {
        total += c;
    }
    return total / state.lattice->lx();
}

std::vector<uint32_t> partonloop::zz_cluster_sizes(const PairingState &state) {
    std::vector<uint8_t> corr = zz_correlation_matrix(state);
    uint32_t l = state.lattice->lx();
    std::vector<uint8_t> seen(l, 0);
    std::vector<uint32_t> sizes;
    for (uint32_t i = 0; i < l; i++) {
        if (seen[i]) {
            continue;
        }
        uint32_t c = 0;
        for (uint32_t j = i; j < l; j++) {
            if (corr[(size_t)i * l + j]) {
                seen[j] = 1;
                c++;
            }
        }
        sizes.push_back(c);
    }
    return sizes;
}
