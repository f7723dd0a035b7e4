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


#include "partonloop/experiment_runner.h"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "partonloop/adaptive_feedback.h"
#include "partonloop/circuit_compiler.h"
#include "partonloop/gaussian_engine.h"
#include "partonloop/stabilizer_oracle.h"

using namespace partonloop;

namespace {

constexpr double kExact = 1e-12;
constexpr double kGaussianTol = 1e-8;

struct Column {
    std::string name;
    int64_t ell;
    bool check;
};

struct PointContext {
    const ExperimentConfig *config;
    SweepPoint point;
    std::shared_ptr<const Lattice> lattice;
    std::vector<Column> columns;
    uint64_t seed;
    bool needs_signs;
};

uint64_t double_bits(double v) {
    uint64_t b;
    std::memcpy(&b, &v, sizeof(b));
    return b;
}

uint64_t point_seed(uint64_t seed, const SweepPoint &pt) {
    uint64_t k = splitmix64_mix(seed);
    for (uint64_t v : {(uint64_t)pt.lattice.lx, (uint64_t)pt.lattice.ly, double_bits(pt.protocol.p),
                       double_bits(pt.protocol.q)}) {
        k = splitmix64_mix(k ^ splitmix64_mix(v));
    }
    return k;
}

std::vector<Column> make_columns(const ExperimentConfig &c, const LatticeSpec &spec) {
    std::vector<Column> cols;
    for (Estimator e : c.estimators) {
        if (e == Estimator::entropy_profile) {
            for (uint32_t ell : profile_lengths(spec.lx)) {
                cols.push_back({estimator_name(e), ell, false});
            }
        } else if (e == Estimator::cut_entropy) {
            cols.push_back({estimator_name(e), spec.lx / 2, false});
        } else {
            cols.push_back({estimator_name(e), -1, false});
        }
    }
    if (c.engine == Engine::crosscheck) {
        switch (spec.region.kind) {
            case RegionKind::top_boundary:
                for (const char *n : {"xc_entropy_oracle", "xc_entropy_circuit", "xc_entropy_gaussian", "xc_zz_oracle",
                                      "xc_ea_order", "xc_linear_order", "xc_feedback"}) {
                    cols.push_back({n, -1, true});
                }
                break;
            case RegionKind::both_boundaries:
                cols.push_back({"xc_mie2boundary", -1, true});
                break;
            case RegionKind::two_sites:
                cols.push_back({"xc_g4", -1, true});
                break;
            case RegionKind::none:
                break;
        }
    }
    return cols;
}

Region top_interval(const Lattice &lat, uint32_t start, uint32_t len) {
    Region r;
    for (uint32_t i = 0; i < len; i++) {
        r.push_back(lat.site_index((start + i) % lat.lx(), lat.ly() - 1));
    }
    return r;
}

// Entanglement between two regions whose union is left pure by the measurements: half the
// mutual information, which equals S(a) when S(a u b) = 0.
double oracle_mie(const StabilizerTableau &t, const Region &a, const Region &b) {
    Region ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    return (entropy(t, a) + entropy(t, b) - entropy(t, ab)) / 2;
}

std::vector<int> oracle_zz_matrix(const StabilizerTableau &t, const Lattice &lat) {
    uint32_t l = lat.lx();
    uint32_t top = lat.ly() - 1;
    std::vector<int> zz((size_t)l * l);
    for (uint32_t i = 0; i < l; i++) {
        for (uint32_t j = i; j < l; j++) {
            int v = zz_expectation(t, lat.site_index(i, top), lat.site_index(j, top));
            zz[(size_t)i * l + j] = v;
            zz[(size_t)j * l + i] = v;
        }
    }
    return zz;
}

// Root parity of every top-row column in the forest of correlated pairs, and its component id.
void forest_parities(const PairingState &state, std::vector<int> *parity, std::vector<uint32_t> *component) {
    ZZGraph g = build_graph(state);
    uint32_t n = g.num_nodes;
    std::vector<std::vector<std::pair<uint32_t, int>>> adj(n);
    for (const ZZEdge &e : g.edges) {
        adj[e.i].push_back({e.j, e.sign});
        adj[e.j].push_back({e.i, e.sign});
    }
    parity->assign(n, 0);
    component->assign(n, UINT32_MAX);
    for (uint32_t root = 0; root < n; root++) {
        if ((*component)[root] != UINT32_MAX) {
            continue;
        }
        std::vector<uint32_t> stack{root};
        (*component)[root] = root;
        (*parity)[root] = 1;
        while (!stack.empty()) {
            uint32_t u = stack.back();
            stack.pop_back();
            for (auto [v, s] : adj[u]) {
                if ((*component)[v] == UINT32_MAX) {
                    (*component)[v] = root;
                    (*parity)[v] = (*parity)[u] * s;
                    stack.push_back(v);
                }
            }
        }
    }
}

// Toric bases for the measured sites, drawn exactly as the loop engine's bulk sweep draws them.
std::vector<Basis> sample_bases(const Lattice &lat, const Protocol &protocol, CounterRng &basis_rng) {
    BasisDistribution dist[2] = {
        translate_protocol(protocol, Model::toric_code, Sublattice::A),
        translate_protocol(protocol, Model::toric_code, Sublattice::B),
    };
    std::vector<Basis> out;
    out.reserve(lat.measured_sites().size());
    for (uint32_t s : lat.measured_sites()) {
        out.push_back(sample_basis(dist[(int)lat.sublattice_of(s)], basis_rng));
    }
    return out;
}

std::vector<MeasureAxis> pauli_axes(const std::vector<Basis> &bases) {
    std::vector<MeasureAxis> axes;
    for (Basis b : bases) {
        axes.push_back({b == Basis::X ? 1.0 : 0.0, b == Basis::Y ? 1.0 : 0.0, b == Basis::Z ? 1.0 : 0.0});
    }
    return axes;
}

std::vector<SitePauli> site_config(const Lattice &lat, const std::vector<Basis> &bases) {
    std::vector<SitePauli> config;
    for (size_t k = 0; k < bases.size(); k++) {
        config.push_back({lat.measured_sites()[k], bases[k]});
    }
    return config;
}

using IntervalEntropy = std::function<double(uint32_t start, uint32_t len)>;

double averaged_cut(const IntervalEntropy &s, uint32_t lx, uint32_t len) {
    std::vector<uint32_t> starts = cut_starts(lx);
    double total = 0;
    for (uint32_t start : starts) {
        total += s(start, len);
    }
    return total / starts.size();
}

// Fills the non-check columns from whichever engine produced the trajectory. Estimators that
// the engine cannot evaluate were rejected by validate().
struct EngineView {
    IntervalEntropy interval;
    const PairingState *loops = nullptr;
    const StabilizerTableau *oracle = nullptr;
};

void fill_estimators(const PointContext &ctx, const EngineView &v, std::vector<double> &out) {
    const Lattice &lat = *ctx.lattice;
    for (size_t c = 0; c < ctx.columns.size(); c++) {
        const Column &col = ctx.columns[c];
        if (col.check) {
            continue;
        }
        Estimator e = parse_estimator(col.name);
        double val = 0;
        switch (e) {
            case Estimator::cut_entropy:
            case Estimator::entropy_profile:
                val = averaged_cut(v.interval, lat.lx(), (uint32_t)col.ell);
                break;
            case Estimator::g4:
                if (v.loops) {
                    val = classify_two_site(*v.loops) == TwoSiteClass::c ? 1 : 0;
                } else {
                    const auto &r = lat.spec().region;
                    val = std::round(oracle_mie(*v.oracle, {r.site_i}, {r.site_j}) / std::log(2.0));
                }
                break;
            case Estimator::spanning:
                val = spanning_number(*v.loops);
                break;
            case Estimator::mie2boundary:
                if (v.loops) {
                    val = two_boundary_mie(*v.loops);
                } else {
                    val = oracle_mie(*v.oracle, top_interval(lat, 0, lat.lx()), [&] {
                        Region bottom;
                        for (uint32_t x = 0; x < lat.lx(); x++) {
                            bottom.push_back(lat.site_index(x, 0));
                        }
                        return bottom;
                    }());
                }
                break;
            case Estimator::ea_order:
            case Estimator::linear_order:
                if (v.loops) {
                    val = e == Estimator::ea_order ? ea_order(*v.loops) : signed_linear_order(*v.loops);
                } else {
                    double sum = 0;
                    for (int z : oracle_zz_matrix(*v.oracle, lat)) {
                        sum += e == Estimator::ea_order ? z * z : z;
                    }
                    val = sum / lat.lx();
                }
                break;
        }
        out[c] = val;
    }
}

bool all_cuts_match(const Lattice &lat, const IntervalEntropy &a, const IntervalEntropy &b, double tol) {
    for (uint32_t start = 0; start < lat.lx(); start++) {
        for (uint32_t len = 1; len < lat.lx(); len++) {
            if (!(std::abs(a(start, len) - b(start, len)) <= tol)) {
                return false;
            }
        }
    }
    return true;
}

// Runs the loop engine, replays it on the oracle (and, for top-boundary cylinders, on the
// circuit and Gaussian engines), and evaluates every identity.
void run_crosscheck(const PointContext &ctx, uint64_t t, std::vector<double> &out) {
    const Lattice &lat = *ctx.lattice;
    CounterRng br = CounterRng::stream(ctx.seed, t, kBasisStream);
    CounterRng orng = CounterRng::stream(ctx.seed, t, kOutcomeStream);
    std::vector<Basis> bases = sample_bases(lat, ctx.point.protocol, br);
    SweepResult loops = run_fixed_sweep(ctx.lattice, bases, orng, SignMode::tracked);
    StabilizerTableau oracle = prepare_toric_ground(lat.spec());
    replay_record(oracle, loops.record);
    const PairingState &st = loops.state;

    IntervalEntropy loop_s;
    if (lat.spec().region.kind == RegionKind::top_boundary) {
        loop_s = [&](uint32_t a, uint32_t n) { return boundary_cut_entropy(st, a, n); };
    }
    fill_estimators(ctx, {loop_s, &st, nullptr}, out);

    auto set = [&](const std::string &name, bool ok) {
        for (size_t c = 0; c < ctx.columns.size(); c++) {
            if (ctx.columns[c].name == name) {
                out[c] = ok ? 1 : 0;
            }
        }
    };
    switch (lat.spec().region.kind) {
        case RegionKind::top_boundary: {
            IntervalEntropy oracle_s = [&](uint32_t a, uint32_t n) { return entropy(oracle, top_interval(lat, a, n)); };
            set("xc_entropy_oracle", all_cuts_match(lat, loop_s, oracle_s, kExact));

            CounterRng crng = CounterRng::stream(ctx.seed, t, kOutcomeStream + 16);
            ChainRun chain = run_schedule(compile(lat, site_config(lat, bases)), initial_chain_state(lat), &crng);
            IntervalEntropy circuit_s = [&](uint32_t a, uint32_t n) {
                Region r;
                for (uint32_t i = 0; i < n; i++) {
                    r.push_back((a + i) % lat.lx());
                }
                return entropy(chain.chain, r);
            };
            set("xc_entropy_circuit", all_cuts_match(lat, loop_s, circuit_s, kExact));

            CounterRng grng = CounterRng::stream(ctx.seed, t, kOutcomeStream + 32);
            GaussianRun g = run_axes(lat, pauli_axes(bases), grng);
            IntervalEntropy gauss_s = [&](uint32_t a, uint32_t n) { return chain_cut_entropy(g.m, a, n); };
            set("xc_entropy_gaussian", all_cuts_match(lat, loop_s, gauss_s, kGaussianTol));

            uint32_t l = lat.lx();
            std::vector<int> zz = oracle_zz_matrix(oracle, lat);
            std::vector<uint8_t> corr = zz_correlation_matrix(st);
            std::vector<int> parity;
            std::vector<uint32_t> comp;
            forest_parities(st, &parity, &comp);
            bool zz_ok = true;
            double ea_oracle = 0;
            double lin_oracle = 0;
            for (uint32_t i = 0; i < l; i++) {
                for (uint32_t j = 0; j < l; j++) {
                    size_t k = (size_t)i * l + j;
                    int mine = corr[k] ? parity[i] * parity[j] : 0;
                    zz_ok &= mine == zz[k];
                    zz_ok &= (corr[k] != 0) == (comp[i] == comp[j]);
                    ea_oracle += zz[k] * zz[k];
                    lin_oracle += zz[k];
                }
            }
            for (const ZZEdge &e : zz_stabilizer_set(st)) {
                zz_ok &= e.sign == zz[(size_t)e.i * l + e.j];
            }
            set("xc_zz_oracle", zz_ok);
            double ea = ea_order(st);
            set("xc_ea_order", std::abs(ea - ea_oracle / l) <= kExact);
            set("xc_linear_order", std::abs(signed_linear_order(st) - lin_oracle / l) <= kExact);

            bool fb_ok = true;
            try {
                StabilizerTableau fed = oracle;
                double certified = apply_and_certify(fed, lat, solve_flips(build_graph(st)));
                fb_ok = std::abs(certified - ea) <= kExact;
            } catch (const std::logic_error &) {
                fb_ok = false;
            }
            set("xc_feedback", fb_ok);
            break;
        }
        case RegionKind::both_boundaries: {
            Region bottom;
            for (uint32_t x = 0; x < lat.lx(); x++) {
                bottom.push_back(lat.site_index(x, 0));
            }
            double mie = oracle_mie(oracle, top_interval(lat, 0, lat.lx()), bottom);
            set("xc_mie2boundary", std::abs(mie - two_boundary_mie(st)) <= kExact);
            break;
        }
        case RegionKind::two_sites: {
            const auto &r = lat.spec().region;
            double mie = oracle_mie(oracle, {r.site_i}, {r.site_j});
            set("xc_g4", std::abs(mie - two_site_mie(classify_two_site(st))) <= kExact);
            break;
        }
        case RegionKind::none:
            break;
    }
}

std::vector<double> run_trajectory(const PointContext &ctx, uint64_t t) {
    const Lattice &lat = *ctx.lattice;
    const Protocol &protocol = ctx.point.protocol;
    std::vector<double> out(ctx.columns.size(), 0.0);
    CounterRng br = CounterRng::stream(ctx.seed, t, kBasisStream);
    CounterRng orng = CounterRng::stream(ctx.seed, t, kOutcomeStream);
    switch (ctx.config->engine) {
        case Engine::loop: {
            SignMode mode = ctx.needs_signs ? SignMode::tracked : SignMode::connectivity_only;
            SweepResult r = run_bulk_sweep(ctx.lattice, protocol, br, orng, mode);
            IntervalEntropy s = [&](uint32_t a, uint32_t n) { return boundary_cut_entropy(r.state, a, n); };
            fill_estimators(ctx, {s, &r.state, nullptr}, out);
            break;
        }
        case Engine::oracle: {
            StabilizerTableau tab = prepare_toric_ground(lat.spec());
            std::vector<Basis> bases = sample_bases(lat, protocol, br);
            for (size_t k = 0; k < bases.size(); k++) {
                measure_pauli(tab, lat.measured_sites()[k], bases[k], &orng);
            }
            IntervalEntropy s = [&](uint32_t a, uint32_t n) { return entropy(tab, top_interval(lat, a, n)); };
            fill_estimators(ctx, {s, nullptr, &tab}, out);
            break;
        }
        case Engine::circuit: {
            std::vector<Basis> bases = sample_bases(lat, protocol, br);
            ChainRun run = run_schedule(compile(lat, site_config(lat, bases)), initial_chain_state(lat), &orng);
            IntervalEntropy s = [&](uint32_t a, uint32_t n) {
                Region r;
                for (uint32_t i = 0; i < n; i++) {
                    r.push_back((a + i) % lat.lx());
                }
                return entropy(run.chain, r);
            };
            fill_estimators(ctx, {s, nullptr, nullptr}, out);
            break;
        }
        case Engine::gaussian: {
            GaussianRun g;
            if (protocol.mode == ProtocolMode::general) {
                CounterRng arng = CounterRng::stream(ctx.seed, t, kAxisStream);
                AxisDistribution w = AxisDistribution::smeared(protocol.p, protocol.q, ctx.config->spread);
                g = run_general_protocol(lat.spec(), w, arng, orng);
            } else {
                g = run_axes(lat, pauli_axes(sample_bases(lat, protocol, br)), orng);
            }
            IntervalEntropy s = [&](uint32_t a, uint32_t n) { return chain_cut_entropy(g.m, a, n); };
            fill_estimators(ctx, {s, nullptr, nullptr}, out);
            break;
        }
        case Engine::crosscheck:
            run_crosscheck(ctx, t, out);
            break;
    }
    return out;
}

}  // namespace

std::vector<uint32_t> partonloop::profile_lengths(uint32_t lx) {
    uint32_t half = lx / 2;
    std::vector<uint32_t> out;
    for (uint32_t l = 1; l <= half; l = std::max(l + 1, l * 3 / 2)) {
        out.push_back(l);
    }
    if (out.empty() || out.back() != half) {
        out.push_back(half);
    }
    return out;
}

std::vector<uint32_t> partonloop::cut_starts(uint32_t lx) {
    uint32_t k = std::min<uint32_t>(lx, 8);
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < k; i++) {
        out.push_back(i * lx / k);
    }
    return out;
}

double partonloop::signed_linear_order(const PairingState &state) {
    std::vector<int> parity;
    std::vector<uint32_t> comp;
    forest_parities(state, &parity, &comp);
    // Within a cluster <Z_i Z_j> = parity_i parity_j, so each cluster contributes (sum of parities)^2.
    std::map<uint32_t, int64_t> sums;
    for (size_t i = 0; i < parity.size(); i++) {
        sums[comp[i]] += parity[i];
    }
    double total = 0;
    for (auto [root, s] : sums) {
        total += (double)(s * s);
    }
    return total / state.lattice->lx();
}

RunReport partonloop::run_experiment(const ExperimentConfig &config, unsigned threads) {
    config.validate();
    threads = std::max(1u, threads);
    auto run_start = std::chrono::steady_clock::now();
    RunReport report;
    report.threads = threads;
    std::string hash = config.hash();
    for (const SweepPoint &pt : config.points()) {
        auto point_start = std::chrono::steady_clock::now();
        PointContext ctx;
        ctx.config = &config;
        ctx.point = pt;
        ctx.lattice = std::make_shared<const Lattice>(pt.lattice);
        ctx.columns = make_columns(config, pt.lattice);
        ctx.seed = point_seed(config.seed, pt);
        ctx.needs_signs = false;
        for (Estimator e : config.estimators) {
            ctx.needs_signs |= e == Estimator::linear_order;
        }

        uint64_t n = config.samples;
        std::vector<std::vector<double>> values(n);
        std::atomic<uint64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            while (true) {
                uint64_t t = next.fetch_add(1);
                if (t >= n) {
                    return;
                }
                try {
                    values[t] = run_trajectory(ctx, t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next.store(n);
                }
            }
        };
        unsigned used = (unsigned)std::min<uint64_t>(threads, n);
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < used; w++) {
            pool.emplace_back(worker);
        }
        worker();
        for (auto &th : pool) {
            th.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }

        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - point_start).count();
        for (size_t c = 0; c < ctx.columns.size(); c++) {
            std::vector<double> col(n);
            bool all = true;
            for (uint64_t t = 0; t < n; t++) {
                col[t] = values[t][c];
                all &= col[t] == 1;
            }
            Estimate est = batch_means(col, 32);
            ResultRow row;
            row.config_hash = hash;
            row.engine = engine_name(config.engine);
            row.lx = pt.lattice.lx;
            row.ly = pt.lattice.ly;
            row.p = pt.protocol.p;
            row.q = pt.protocol.q;
            row.estimator = ctx.columns[c].name;
            row.ell = ctx.columns[c].ell;
            row.mean = est.mean;
            row.std_error = est.std_error;
            row.samples = n;
            row.pass = ctx.columns[c].check ? (all ? 1 : 0) : -1;
            row.wall_time = wall;
            report.rows.push_back(row);
        }
    }
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start).count();
    return report;
}

namespace {

std::string num(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

template <typename T>
T parse_number(const std::string &s, const char *what) {
    T v{};
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw std::invalid_argument(std::string("bad ") + what + " in CSV: '" + s + "'");
    }
    return v;
}

const char *kColumns[] = {"schema_version", "config_hash", "engine", "lx",      "ly",      "p",   "q",
                          "estimator",      "ell",         "mean",   "stderr",  "samples", "pass"};

}  // namespace

std::string partonloop::csv_header() {
    std::string out;
    for (size_t i = 0; i < std::size(kColumns); i++) {
        out += (i ? "," : "") + std::string(kColumns[i]);
    }
    return out + "\n";
}

std::string partonloop::to_csv(const std::vector<ResultRow> &rows) {
    std::string out = csv_header();
    for (const ResultRow &r : rows) {
        out += std::to_string(kCsvSchemaVersion) + "," + r.config_hash + "," + r.engine + "," + std::to_string(r.lx) +
               "," + std::to_string(r.ly) + "," + num(r.p) + "," + num(r.q) + "," + r.estimator + "," +
               (r.ell >= 0 ? std::to_string(r.ell) : "") + "," + num(r.mean) + "," + num(r.std_error) + "," +
               std::to_string(r.samples) + "," + (r.pass >= 0 ? std::to_string(r.pass) : "") + "\n";
    }
    return out;
}

std::vector<ResultRow> partonloop::parse_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line + "\n" != csv_header()) {
        throw std::invalid_argument("CSV header does not match schema version " + std::to_string(kCsvSchemaVersion));
    }
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            f.push_back(cell);
        }
        if (line.back() == ',') {
            f.push_back("");
        }
        if (f.size() != std::size(kColumns)) {
            throw std::invalid_argument("CSV row has " + std::to_string(f.size()) + " fields: " + line);
        }
        if (parse_number<int>(f[0], "schema_version") != kCsvSchemaVersion) {
            throw std::invalid_argument("CSV row from another schema version: " + f[0]);
        }
        ResultRow r;
        r.config_hash = f[1];
        r.engine = f[2];
        r.lx = parse_number<uint32_t>(f[3], "lx");
        r.ly = parse_number<uint32_t>(f[4], "ly");
        r.p = parse_number<double>(f[5], "p");
        r.q = parse_number<double>(f[6], "q");
        r.estimator = f[7];
        r.ell = f[8].empty() ? -1 : parse_number<int64_t>(f[8], "ell");
        r.mean = parse_number<double>(f[9], "mean");
        r.std_error = parse_number<double>(f[10], "stderr");
        r.samples = parse_number<uint64_t>(f[11], "samples");
        r.pass = f[12].empty() ? -1 : parse_number<int>(f[12], "pass");
        rows.push_back(r);
    }
    return rows;
}

std::string partonloop::sidecar_json(
    const ExperimentConfig &config, const RunReport &report, const std::string &git_hash) {
    nlohmann::ordered_json j;
    j["schema_version"] = kCsvSchemaVersion;
    j["config_hash"] = config.hash();
    j["config"] = config.canonical();
    j["seed"] = config.seed;
    j["rng_family"] = kRngFamily;
    j["git_hash"] = git_hash;
    j["threads"] = report.threads;
    j["wall_time_s"] = report.wall_time;
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    const ResultRow *prev = nullptr;
    for (const ResultRow &r : report.rows) {
        if (prev && prev->lx == r.lx && prev->ly == r.ly && prev->p == r.p && prev->q == r.q) {
            continue;
        }
        points.push_back({{"lx", r.lx}, {"ly", r.ly}, {"p", r.p}, {"q", r.q}, {"wall_time_s", r.wall_time}});
        prev = &r;
    }
    j["points"] = points;
    return j.dump(2) + "\n";
}

FitAxis partonloop::parse_fit_axis(const std::string &name) {
    if (name == "l") {
        return FitAxis::l;
    }
    if (name == "p") {
        return FitAxis::p;
    }
    if (name == "q") {
        return FitAxis::q;
    }
    if (name == "ell") {
        return FitAxis::ell;
    }
    throw std::invalid_argument("fit axis must be one of l, p, q, ell");
}

FitTransform partonloop::parse_fit_transform(const std::string &name) {
    if (name == "none") {
        return FitTransform::none;
    }
    if (name == "per_site") {
        return FitTransform::per_site;
    }
    if (name == "size_ratio") {
        return FitTransform::size_ratio;
    }
    throw std::invalid_argument("fit transform must be one of none, per_site, size_ratio");
}

FitResult partonloop::fit_rows(
    const std::vector<ResultRow> &rows,
    FitModel model,
    const std::string &estimator,
    FitAxis x,
    FitTransform transform) {
    auto abscissa = [x](const ResultRow &r) {
        return x == FitAxis::l ? r.lx : x == FitAxis::p ? r.p : x == FitAxis::q ? r.q : (double)r.ell;
    };
    std::vector<const ResultRow *> picked;
    for (const ResultRow &r : rows) {
        if (r.estimator == estimator) {
            picked.push_back(&r);
        }
    }
    if (picked.empty()) {
        throw std::invalid_argument("no rows for estimator " + estimator);
    }
    std::vector<FitPoint> pts;
    for (const ResultRow *r : picked) {
        if (transform == FitTransform::size_ratio) {
            for (const ResultRow *big : picked) {
                if (big->lx == 2 * r->lx && abscissa(*big) == abscissa(*r) && r->mean != 0) {
                    double ratio = big->mean / r->mean;
                    double err = ratio * std::hypot(big->std_error / big->mean, r->std_error / r->mean);
                    pts.push_back({abscissa(*r), ratio, err, (double)r->lx});
                }
            }
        } else {
            double scale = transform == FitTransform::per_site ? 1.0 / r->lx : 1.0;
            pts.push_back({abscissa(*r), r->mean * scale, r->std_error * scale, (double)r->lx});
        }
    }
    if (pts.empty()) {
        throw std::invalid_argument("size_ratio needs rows at L and 2L with matching abscissa");
    }
    // Zero-variance points (e.g. a deterministic limit) get the smallest observed error.
    double min_err = 0;
    for (const FitPoint &pt : pts) {
        if (pt.err > 0 && (min_err == 0 || pt.err < min_err)) {
            min_err = pt.err;
        }
    }
    for (FitPoint &pt : pts) {
        if (!(pt.err > 0)) {
            pt.err = min_err > 0 ? min_err : 1.0;
        }
    }
    return fit_scaling(pts, model);
}
