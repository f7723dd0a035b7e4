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


#include "partonloop/adaptive_feedback.h"

#include <numeric>
#include <stdexcept>

using namespace partonloop;

namespace {

struct DisjointSets {
    std::vector<uint32_t> parent;

    explicit DisjointSets(uint32_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    uint32_t find(uint32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    bool unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent[b] = a;
        return true;
    }
};

}  // namespace

size_t FlipSet::count() const {
    size_t c = 0;
    for (uint8_t f : flip) {
        c += f;
    }
    return c;
}

std::string FlipSet::str() const {
    std::string out;
    for (uint8_t f : flip) {
        out.push_back(f ? '1' : '0');
    }
    return out;
}

FlipSet FlipSet::from_str(const std::string &text) {
    FlipSet f;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("flip mask must be a string of 0 and 1");
        }
        f.flip.push_back(c == '1');
    }
    return f;
}

ZZGraph partonloop::build_graph(const PairingState &state) {
    const Lattice &lat = *state.lattice;
    uint32_t l = lat.lx();
    uint32_t top = lat.ly() - 1;
    ZZGraph g;
    g.num_nodes = l;
    DisjointSets sets(l);
    for (const ZZEdge &e : zz_stabilizer_set(state)) {
        if (!sets.unite(e.i, e.j)) {
            throw std::logic_error("strand generators form a cycle");
        }
        g.edges.push_back(e);
    }
    std::vector<uint8_t> corr = zz_correlation_matrix(state);
    for (uint32_t i = 0; i < l; i++) {
        // Correlation is transitive, so linking each site to the next correlated one spans its cluster.
        for (uint32_t j = i + 1; j < l; j++) {
            if (!corr[(size_t)i * l + j]) {
                continue;
            }
            if (sets.unite(i, j)) {
                int s = physical_expectation(
                    state, {SitePauli{lat.site_index(i, top), Basis::Z}, SitePauli{lat.site_index(j, top), Basis::Z}});
                if (s == 0) {
                    throw std::logic_error("correlated boundary pair has no definite Z Z sign");
                }
                g.edges.push_back({i, j, (int8_t)s});
            }
            break;
        }
    }
    return g;
}

FlipSet partonloop::solve_flips(const ZZGraph &graph) {
    uint32_t n = graph.num_nodes;
    std::vector<std::vector<std::pair<uint32_t, int8_t>>> adj(n);
    for (const ZZEdge &e : graph.edges) {
        adj[e.i].push_back({e.j, e.sign});
        adj[e.j].push_back({e.i, e.sign});
    }
    FlipSet f;
    f.flip.assign(n, 0);
    std::vector<uint8_t> seen(n, 0);
    std::vector<uint32_t> stack;
    for (uint32_t root = 0; root < n; root++) {
        if (seen[root]) {
            continue;
        }
        seen[root] = 1;
        stack.push_back(root);
        while (!stack.empty()) {
            uint32_t u = stack.back();
            stack.pop_back();
            for (auto [v, s] : adj[u]) {
                if (!seen[v]) {
                    seen[v] = 1;
                    f.flip[v] = f.flip[u] ^ (s < 0);
                    stack.push_back(v);
                }
            }
        }
    }
    return f;
}

bool partonloop::flips_fix_signs(const ZZGraph &graph, const FlipSet &flips) {
    for (const ZZEdge &e : graph.edges) {
        int s = e.sign * ((flips.flip[e.i] ^ flips.flip[e.j]) ? -1 : 1);
        if (s != 1) {
            return false;
        }
    }
    return true;
}

double partonloop::apply_and_certify(StabilizerTableau &tableau, const Lattice &lattice, const FlipSet &flips) {
    uint32_t l = lattice.lx();
    uint32_t top = lattice.ly() - 1;
    if (flips.flip.size() != l || tableau.num_qubits() != lattice.num_sites()) {
        throw std::invalid_argument("flip set and tableau must match the lattice");
    }
    for (uint32_t x = 0; x < l; x++) {
        if (flips.flip[x]) {
            tableau.apply_x(lattice.site_index(x, top));
        }
    }
    double total = 0;
    for (uint32_t i = 0; i < l; i++) {
        for (uint32_t j = 0; j < l; j++) {
            int v = zz_expectation(tableau, lattice.site_index(i, top), lattice.site_index(j, top));
            if (v < 0) {
                throw std::logic_error(
                    "certification failed: <Z_" + std::to_string(i) + " Z_" + std::to_string(j) + "> = -1 after feedback");
            }
            total += v;
        }
    }
    return total / l;
}
