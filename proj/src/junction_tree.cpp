#include "linkrec/junction_tree.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace linkrec {

namespace {

// Factor over binary variables identified by local ids; vars sorted.
struct Factor {
    std::vector<int> vars;
    std::vector<double> table;
};

// Index of `vars` (sorted) inside `superset` (sorted), as bit positions.
std::vector<int> positions_in(const std::vector<int>& vars,
                              const std::vector<int>& superset) {
    std::vector<int> pos(vars.size());
    std::size_t j = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) {
        while (j < superset.size() && superset[j] != vars[k]) ++j;
        if (j == superset.size())
            throw std::logic_error("factor scope not contained in cluster");
        pos[k] = static_cast<int>(j);
    }
    return pos;
}

std::uint32_t gather_bits(std::uint32_t assignment, const std::vector<int>& pos) {
    std::uint32_t idx = 0;
    for (std::size_t k = 0; k < pos.size(); ++k)
        idx |= ((assignment >> pos[k]) & 1u) << k;
    return idx;
}

void multiply_into(Factor& target, const Factor& f) {
    const auto pos = positions_in(f.vars, target.vars);
    for (std::uint32_t a = 0; a < target.table.size(); ++a)
        target.table[a] *= f.table[gather_bits(a, pos)];
}

void divide_into(Factor& target, const Factor& f) {
    const auto pos = positions_in(f.vars, target.vars);
    for (std::uint32_t a = 0; a < target.table.size(); ++a) {
        const double d = f.table[gather_bits(a, pos)];
        target.table[a] = d == 0.0 ? 0.0 : target.table[a] / d;
    }
}

Factor marginalize(const Factor& f, const std::vector<int>& keep) {
    Factor out;
    out.vars = keep;
    out.table.assign(std::size_t{1} << keep.size(), 0.0);
    const auto pos = positions_in(keep, f.vars);
    for (std::uint32_t a = 0; a < f.table.size(); ++a)
        out.table[gather_bits(a, pos)] += f.table[a];
    return out;
}

std::vector<int> mask_to_vars(std::uint64_t mask) {
    std::vector<int> vars;
    for (int v = 0; v < 64; ++v)
        if (mask >> v & 1) vars.push_back(v);
    return vars;
}

}  // namespace

JointResult infer_pair(const LocalMRF& mrf, int u, int p,
                       int cluster_size_cap) {
    const int n = static_cast<int>(mrf.nodes.size());
    if (n < 2 || n > 64)
        throw std::invalid_argument("MRF must have between 2 and 64 nodes");
    std::unordered_map<int, int> local;
    for (int k = 0; k < n; ++k) local.emplace(mrf.nodes[k], k);
    auto local_of = [&](int node, const char* what) {
        auto it = local.find(node);
        if (it == local.end())
            throw std::invalid_argument(std::string(what) +
                                        " is not an MRF node");
        return it->second;
    };
    const int lu = local_of(u, "u"), lp = local_of(p, "p");

    // Moral graph (potential scopes are cliques) plus a fill edge (u,p) so
    // that at least one cluster contains the query pair.
    std::vector<std::uint64_t> adj(n, 0);
    auto connect = [&](int a, int b) {
        if (a == b) return;
        adj[a] |= std::uint64_t{1} << b;
        adj[b] |= std::uint64_t{1} << a;
    };
    std::vector<std::vector<int>> scopes(mrf.potentials.size());
    for (std::size_t f = 0; f < mrf.potentials.size(); ++f) {
        const auto& pot = mrf.potentials[f];
        if (pot.table.size() != std::size_t{1} << pot.vars.size())
            throw std::invalid_argument("potential table size mismatch");
        for (int v : pot.vars) scopes[f].push_back(local_of(v, "potential var"));
        std::sort(scopes[f].begin(), scopes[f].end());
        for (std::size_t a = 0; a < scopes[f].size(); ++a)
            for (std::size_t b = a + 1; b < scopes[f].size(); ++b)
                connect(scopes[f][a], scopes[f][b]);
    }
    connect(lu, lp);

    // Connectivity check.
    {
        std::uint64_t seen = 1, frontier = 1;
        while (frontier) {
            std::uint64_t next = 0;
            for (int v = 0; v < n; ++v)
                if (frontier >> v & 1) next |= adj[v];
            frontier = next & ~seen;
            seen |= next;
        }
        const std::uint64_t all =
            n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
        if (seen != all)
            throw std::invalid_argument("MRF graph is not connected");
    }

    // Min-fill triangulation; elimination cliques become cluster candidates.
    std::vector<std::uint64_t> work = adj;
    std::uint64_t alive = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    std::vector<std::uint64_t> clusters;
    for (int round = 0; round < n; ++round) {
        int best = -1;
        long best_fill = -1;
        for (int v = 0; v < n; ++v) {
            if (!(alive >> v & 1)) continue;
            const std::uint64_t nbrs = work[v] & alive;
            long fill = 0;
            for (int a = 0; a < n; ++a)
                if (nbrs >> a & 1) fill += std::popcount(nbrs & ~work[a] & ~(std::uint64_t{1} << a));
            if (best < 0 || fill < best_fill) {
                best = v;
                best_fill = fill;
            }
        }
        const std::uint64_t nbrs = work[best] & alive;
        const std::uint64_t cluster = nbrs | (std::uint64_t{1} << best);
        if (std::popcount(cluster) > cluster_size_cap)
            throw std::runtime_error(
                "junction-tree cluster would exceed " +
                std::to_string(cluster_size_cap) +
                " variables; use a smaller neighborhood (maxSize)");
        clusters.push_back(cluster);
        for (int a = 0; a < n; ++a)
            if (nbrs >> a & 1) {
                work[a] |= nbrs & ~(std::uint64_t{1} << a);
                adj[a] |= nbrs & ~(std::uint64_t{1} << a);
            }
        alive &= ~(std::uint64_t{1} << best);
    }

    // Keep maximal clusters only.
    std::vector<std::uint64_t> maximal;
    for (std::uint64_t c : clusters) {
        bool contained = false;
        for (std::uint64_t d : clusters)
            if (d != c && (c & d) == c) {
                contained = true;
                break;
            }
        if (!contained &&
            std::find(maximal.begin(), maximal.end(), c) == maximal.end())
            maximal.push_back(c);
    }
    const int m = static_cast<int>(maximal.size());

    // Max-separator-weight spanning tree (Kruskal).
    struct Cand {
        int w, a, b;
    };
    std::vector<Cand> cands;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            cands.push_back({std::popcount(maximal[a] & maximal[b]), a, b});
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.w != y.w) return x.w > y.w;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    std::vector<int> parent_uf(m);
    std::iota(parent_uf.begin(), parent_uf.end(), 0);
    auto find = [&](int x) {
        while (parent_uf[x] != x) x = parent_uf[x] = parent_uf[parent_uf[x]];
        return x;
    };
    std::vector<std::vector<int>> tree(m);
    for (const auto& c : cands) {
        const int ra = find(c.a), rb = find(c.b);
        if (ra == rb) continue;
        parent_uf[ra] = rb;
        tree[c.a].push_back(c.b);
        tree[c.b].push_back(c.a);
    }

    // Cluster factors: product of the potentials assigned to each cluster.
    std::vector<Factor> cf(m);
    std::vector<std::vector<int>> cluster_vars(m);
    for (int c = 0; c < m; ++c) {
        cluster_vars[c] = mask_to_vars(maximal[c]);
        cf[c].vars = cluster_vars[c];
        cf[c].table.assign(std::size_t{1} << cluster_vars[c].size(), 1.0);
    }
    for (std::size_t f = 0; f < mrf.potentials.size(); ++f) {
        std::uint64_t scope_mask = 0;
        for (int v : scopes[f]) scope_mask |= std::uint64_t{1} << v;
        int home = -1;
        for (int c = 0; c < m; ++c)
            if ((scope_mask & maximal[c]) == scope_mask) {
                home = c;
                break;
            }
        if (home < 0) throw std::logic_error("no cluster covers potential scope");
        Factor pot{scopes[f], mrf.potentials[f].table};
        // Table entries follow the potential's own var order; remap to the
        // sorted local order.
        {
            std::vector<int> unsorted;
            for (int v : mrf.potentials[f].vars) unsorted.push_back(local.at(v));
            std::vector<int> src_pos(scopes[f].size());
            for (std::size_t k = 0; k < scopes[f].size(); ++k) {
                auto it = std::find(unsorted.begin(), unsorted.end(), scopes[f][k]);
                src_pos[k] = static_cast<int>(it - unsorted.begin());
            }
            std::vector<double> remapped(pot.table.size());
            for (std::uint32_t a = 0; a < remapped.size(); ++a) {
                std::uint32_t src = 0;
                for (std::size_t k = 0; k < src_pos.size(); ++k)
                    src |= ((a >> k) & 1u) << src_pos[k];
                remapped[a] = mrf.potentials[f].table[src];
            }
            pot.table = std::move(remapped);
        }
        multiply_into(cf[home], pot);
    }

    // Two-pass sum-product. Messages are factors over separators.
    const int root = [&] {
        for (int c = 0; c < m; ++c)
            if ((maximal[c] >> lu & 1) && (maximal[c] >> lp & 1)) return c;
        throw std::logic_error("no cluster contains the query pair");
    }();
    std::vector<int> order, parent(m, -1);
    {
        std::vector<int> stack{root};
        std::vector<char> seen(m, 0);
        seen[root] = 1;
        while (!stack.empty()) {
            const int c = stack.back();
            stack.pop_back();
            order.push_back(c);
            for (int d : tree[c])
                if (!seen[d]) {
                    seen[d] = 1;
                    parent[d] = c;
                    stack.push_back(d);
                }
        }
    }
    auto separator = [&](int a, int b) {
        return mask_to_vars(maximal[a] & maximal[b]);
    };
    std::vector<Factor> belief = cf;
    std::vector<Factor> up_msg(m);
    // Collect: leaves towards root.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int c = *it;
        if (parent[c] < 0) continue;
        Factor combined = cf[c];
        for (int d : tree[c])
            if (d != parent[c]) multiply_into(combined, up_msg[d]);
        up_msg[c] = marginalize(combined, separator(c, parent[c]));
        multiply_into(belief[parent[c]], up_msg[c]);
    }
    // Distribute: root towards leaves.
    for (int c : order) {
        for (int d : tree[c]) {
            if (d == parent[c]) continue;
            Factor down = belief[c];
            divide_into(down, up_msg[d]);
            multiply_into(belief[d], marginalize(down, separator(c, d)));
        }
    }

    JointResult result;
    result.cluster_z.reserve(m);
    for (int c = 0; c < m; ++c)
        result.cluster_z.push_back(
            std::accumulate(belief[c].table.begin(), belief[c].table.end(), 0.0));
    Factor pair = marginalize(belief[root], [&] {
        std::vector<int> keep{std::min(lu, lp), std::max(lu, lp)};
        return keep;
    }());
    const double z = pair.table[0] + pair.table[1] + pair.table[2] + pair.table[3];
    if (!(z > 0.0))
        throw std::runtime_error("MRF has zero partition function");
    // pair.vars is sorted; map back so index bit0 = u, bit1 = p.
    const bool u_first = pair.vars[0] == lu;
    for (int a = 0; a < 4; ++a) {
        const int ub = u_first ? (a & 1) : (a >> 1);
        const int pb = u_first ? (a >> 1) : (a & 1);
        result.pair_marginal[ub | (pb << 1)] = pair.table[a] / z;
    }
    return result;
}

double infer_joint(const LocalMRF& mrf, int u, int p, int cluster_size_cap) {
    return infer_pair(mrf, u, p, cluster_size_cap).joint_11();
}

double brute_force_joint(const LocalMRF& mrf, int u, int p) {
    const int n = static_cast<int>(mrf.nodes.size());
    if (n > 20)
        throw std::invalid_argument("brute_force_joint supports at most 20 nodes");
    std::unordered_map<int, int> local;
    for (int k = 0; k < n; ++k) local.emplace(mrf.nodes[k], k);
    const auto iu = local.find(u), ip = local.find(p);
    if (iu == local.end() || ip == local.end())
        throw std::invalid_argument("u and p must both be MRF nodes");
    std::vector<std::vector<int>> pos(mrf.potentials.size());
    for (std::size_t f = 0; f < mrf.potentials.size(); ++f)
        for (int v : mrf.potentials[f].vars) {
            auto it = local.find(v);
            if (it == local.end())
                throw std::invalid_argument("potential var is not an MRF node");
            pos[f].push_back(it->second);
        }
    double z = 0.0, z11 = 0.0;
    for (std::uint32_t a = 0; a < (std::uint32_t{1} << n); ++a) {
        double prod = 1.0;
        for (std::size_t f = 0; f < mrf.potentials.size(); ++f) {
            std::uint32_t idx = 0;
            for (std::size_t k = 0; k < pos[f].size(); ++k)
                idx |= ((a >> pos[f][k]) & 1u) << k;
            prod *= mrf.potentials[f].table[idx];
            if (prod == 0.0) break;
        }
        z += prod;
        if ((a >> iu->second & 1) && (a >> ip->second & 1)) z11 += prod;
    }
    if (!(z > 0.0)) throw std::runtime_error("MRF has zero partition function");
    return z11 / z;
}

}  // namespace linkrec
