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


#include "partonloop/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

using namespace partonloop;

namespace {

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return "";
    }
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double to_double(const std::string &s) {
    double v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a number: " + s);
    }
    return v;
}

uint64_t to_uint(const std::string &s) {
    if (s.empty() || s[0] == '-') {
        throw std::invalid_argument("not a non-negative integer: " + s);
    }
    size_t used = 0;
    uint64_t v = std::stoull(s, &used, 0);
    if (used != s.size()) {
        throw std::invalid_argument("not an integer: " + s);
    }
    return v;
}

bool to_bool(const std::string &s) {
    if (s == "true" || s == "1" || s == "yes") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no") {
        return false;
    }
    throw std::invalid_argument("not a boolean: " + s);
}

std::string fmt(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

template <typename T, typename F>
std::string join(const std::vector<T> &items, F f) {
    std::string out;
    for (size_t i = 0; i < items.size(); i++) {
        out += (i ? ", " : "") + f(items[i]);
    }
    return out;
}

RegionKind parse_region(const std::string &s) {
    for (RegionKind k : {RegionKind::none, RegionKind::two_sites, RegionKind::top_boundary, RegionKind::both_boundaries}) {
        if (region_name(k) == s) {
            return k;
        }
    }
    throw std::invalid_argument("unknown region: " + s);
}

}  // namespace

std::string partonloop::engine_name(Engine e) {
    static const char *names[] = {"loop", "oracle", "circuit", "gaussian", "crosscheck"};
    return names[(int)e];
}

Engine partonloop::parse_engine(const std::string &name) {
    for (int i = 0; i < 5; i++) {
        if (engine_name((Engine)i) == name) {
            return (Engine)i;
        }
    }
    throw std::invalid_argument("unknown engine: " + name);
}

std::string partonloop::estimator_name(Estimator e) {
    static const char *names[] = {
        "g4", "spanning", "cut_entropy", "mie2boundary", "ea_order", "linear_order", "entropy_profile"};
    return names[(int)e];
}

Estimator partonloop::parse_estimator(const std::string &name) {
    for (int i = 0; i < 7; i++) {
        if (estimator_name((Estimator)i) == name) {
            return (Estimator)i;
        }
    }
    throw std::invalid_argument("unknown estimator: " + name);
}

ExperimentConfig ExperimentConfig::parse(const std::string &text) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        lineno++;
        size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        try {
            if (line.front() == '[') {
                if (line.back() != ']') {
                    throw std::invalid_argument("unterminated section header");
                }
                section = trim(line.substr(1, line.size() - 2));
                if (section != "lattice" && section != "protocol" && section != "run" && section != "sweep") {
                    throw std::invalid_argument("unknown section [" + section + "]");
                }
                continue;
            }
            size_t eq = line.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("expected key = value");
            }
            std::string key = trim(line.substr(0, eq));
            std::string val = trim(line.substr(eq + 1));
            if (section.empty()) {
                throw std::invalid_argument("key outside any section");
            }
            std::string full = section + "." + key;
            if (seen[full]++) {
                throw std::invalid_argument("duplicate key " + full);
            }
            if (full == "lattice.lx") {
                c.lattice.lx = (uint32_t)to_uint(val);
            } else if (full == "lattice.ly") {
                c.lattice.ly = (uint32_t)to_uint(val);
            } else if (full == "lattice.topology") {
                if (val != "cylinder" && val != "torus") {
                    throw std::invalid_argument("topology must be cylinder or torus");
                }
                c.lattice.topology = val == "torus" ? Topology::torus : Topology::cylinder;
            } else if (full == "lattice.region") {
                c.lattice.region.kind = parse_region(val);
            } else if (full == "lattice.site_i") {
                c.lattice.region.site_i = (uint32_t)to_uint(val);
            } else if (full == "lattice.site_j") {
                c.lattice.region.site_j = (uint32_t)to_uint(val);
            } else if (full == "lattice.flip_sector") {
                c.lattice.flip_sector = to_bool(val);
            } else if (full == "lattice.aspect") {
                c.aspect = to_double(val);
            } else if (full == "protocol.mode") {
                if (val != "pauli_pq" && val != "general") {
                    throw std::invalid_argument("protocol mode must be pauli_pq or general");
                }
                c.protocol.mode = val == "general" ? ProtocolMode::general : ProtocolMode::pauli_pq;
            } else if (full == "protocol.p") {
                c.protocol.p = to_double(val);
            } else if (full == "protocol.q") {
                c.protocol.q = to_double(val);
            } else if (full == "protocol.spread") {
                c.spread = to_double(val);
            } else if (full == "run.engine") {
                c.engine = parse_engine(val);
            } else if (full == "run.estimators") {
                c.estimators.clear();
                for (const auto &e : split_list(val)) {
                    c.estimators.push_back(parse_estimator(e));
                }
            } else if (full == "run.samples") {
                c.samples = to_uint(val);
            } else if (full == "run.seed") {
                c.seed = to_uint(val);
            } else if (full == "run.oracle_qubit_limit") {
                c.oracle_qubit_limit = (uint32_t)to_uint(val);
            } else if (full == "sweep.p") {
                for (const auto &v : split_list(val)) {
                    c.sweep.p.push_back(to_double(v));
                }
            } else if (full == "sweep.q") {
                for (const auto &v : split_list(val)) {
                    c.sweep.q.push_back(to_double(v));
                }
            } else if (full == "sweep.l") {
                for (const auto &v : split_list(val)) {
                    c.sweep.l.push_back((uint32_t)to_uint(v));
                }
            } else {
                throw std::invalid_argument("unknown key " + full);
            }
        } catch (const std::invalid_argument &e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::out_of_range &e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": value out of range");
        }
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw std::invalid_argument("cannot read config file " + path);
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream out;
    out << "[lattice]\n";
    out << "lx = " << lattice.lx << "\n";
    out << "ly = " << lattice.ly << "\n";
    out << "topology = " << topology_name(lattice.topology) << "\n";
    out << "region = " << region_name(lattice.region.kind) << "\n";
    out << "site_i = " << lattice.region.site_i << "\n";
    out << "site_j = " << lattice.region.site_j << "\n";
    out << "flip_sector = " << (lattice.flip_sector ? "true" : "false") << "\n";
    out << "aspect = " << fmt(aspect) << "\n";
    out << "[protocol]\n";
    out << "mode = " << (protocol.mode == ProtocolMode::general ? "general" : "pauli_pq") << "\n";
    out << "p = " << fmt(protocol.p) << "\n";
    out << "q = " << fmt(protocol.q) << "\n";
    out << "spread = " << fmt(spread) << "\n";
    out << "[run]\n";
    out << "engine = " << engine_name(engine) << "\n";
    out << "estimators = " << join(estimators, estimator_name) << "\n";
    out << "samples = " << samples << "\n";
    out << "seed = " << seed << "\n";
    out << "oracle_qubit_limit = " << oracle_qubit_limit << "\n";
    out << "[sweep]\n";
    out << "p = " << join(sweep.p, fmt) << "\n";
    out << "q = " << join(sweep.q, fmt) << "\n";
    out << "l = " << join(sweep.l, [](uint32_t v) { return std::to_string(v); }) << "\n";
    return out.str();
}

std::string ExperimentConfig::hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

std::vector<SweepPoint> ExperimentConfig::points() const {
    std::vector<uint32_t> ls = sweep.l;
    std::vector<double> ps = sweep.p.empty() ? std::vector<double>{protocol.p} : sweep.p;
    std::vector<double> qs = sweep.q.empty() ? std::vector<double>{protocol.q} : sweep.q;
    std::vector<SweepPoint> out;
    size_t nl = std::max<size_t>(1, ls.size());
    for (size_t li = 0; li < nl; li++) {
        LatticeSpec spec = lattice;
        if (!ls.empty()) {
            spec.lx = ls[li];
            spec.ly = std::max<uint32_t>(2, (uint32_t)std::lround(aspect * ls[li]));
            if (spec.topology == Topology::torus && (spec.ly & 1)) {
                spec.ly++;
            }
        }
        for (double p : ps) {
            for (double q : qs) {
                Protocol pr = protocol;
                pr.p = p;
                pr.q = q;
                out.push_back({spec, pr});
            }
        }
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (samples < 32) {
        throw std::invalid_argument("samples must be at least 32 for batch-means errors");
    }
    if (estimators.empty()) {
        throw std::invalid_argument("no estimators requested");
    }
    if (!(aspect > 0)) {
        throw std::invalid_argument("aspect must be positive");
    }
    if (protocol.mode == ProtocolMode::general && engine != Engine::gaussian) {
        throw std::invalid_argument("general-axis protocols run only on the gaussian engine");
    }
    if (!(spread >= 0 && spread <= M_PI / 2)) {
        throw std::invalid_argument("spread must lie in [0, pi/2]");
    }
    for (const SweepPoint &pt : points()) {
        pt.lattice.validate();
        const Protocol &pr = pt.protocol;
        if (!(pr.p >= 0 && pr.p <= 1 && pr.q >= 0 && pr.q <= 1)) {
            throw std::invalid_argument("protocol probabilities must lie in [0, 1]");
        }
        RegionKind region = pt.lattice.region.kind;
        bool small = (uint64_t)pt.lattice.lx * pt.lattice.ly <= oracle_qubit_limit;
        if ((engine == Engine::oracle || engine == Engine::crosscheck) && !small) {
            throw std::invalid_argument(
                "lattice has more sites than oracle_qubit_limit (" + std::to_string(oracle_qubit_limit) + ")");
        }
        if ((engine == Engine::circuit || engine == Engine::gaussian) && region != RegionKind::top_boundary) {
            throw std::invalid_argument(engine_name(engine) + " engine needs region = top_boundary");
        }
        for (Estimator e : estimators) {
            std::string bad = "estimator " + estimator_name(e) + " ";
            switch (e) {
                case Estimator::g4:
                    if (region != RegionKind::two_sites) {
                        throw std::invalid_argument(bad + "needs region = two_sites");
                    }
                    break;
                case Estimator::spanning:
                case Estimator::mie2boundary:
                    if (region != RegionKind::both_boundaries) {
                        throw std::invalid_argument(bad + "needs region = both_boundaries");
                    }
                    break;
                default:
                    if (region != RegionKind::top_boundary) {
                        throw std::invalid_argument(bad + "needs region = top_boundary");
                    }
                    break;
            }
            bool entropy_only = e == Estimator::cut_entropy || e == Estimator::entropy_profile;
            if ((engine == Engine::circuit || engine == Engine::gaussian) && !entropy_only) {
                throw std::invalid_argument(bad + "is not available on the " + engine_name(engine) + " engine");
            }
            if (engine == Engine::oracle && e == Estimator::spanning) {
                throw std::invalid_argument(bad + "needs loop connectivity (engine = loop or crosscheck)");
            }
        }
    }
}
