#pragma once

#include <array>
#include <vector>

#include "linkrec/types.hpp"

namespace linkrec {

// Non-negative potential over binary variables. `vars` is sorted; table has
// 2^|vars| entries indexed by sum_k (assignment of vars[k]) << k.
struct CliquePotential {
    std::vector<int> vars;
    std::vector<double> table;
};

// Local Markov random field over a small node set. The unnormalized joint
// is the product of the potentials.
struct LocalMRF {
    std::vector<int> nodes;
    std::vector<CliquePotential> potentials;
};

struct JointResult {
    // Normalized P(u, p) over the four binary assignments, indexed
    // (u_value) | (p_value << 1).
    std::array<double, 4> pair_marginal{};
    // Partition-function estimate from each junction-tree cluster after
    // calibration; they must all agree for a calibrated tree.
    std::vector<double> cluster_z;

    double joint_11() const { return pair_marginal[3]; }
};

// Exact inference via a junction tree: moralization (plus a fill edge
// between u and p so one cluster holds both), min-fill triangulation,
// maximal-clique clusters, max-separator-weight spanning tree, two-pass
// sum-product. Requires a connected MRF. Throws if any cluster would
// exceed `cluster_size_cap` variables.
JointResult infer_pair(const LocalMRF& mrf, int u, int p,
                       int cluster_size_cap = 20);

// P(U=1, P=1) from the junction tree.
double infer_joint(const LocalMRF& mrf, int u, int p,
                   int cluster_size_cap = 20);

// Exhaustive-enumeration oracle; |mrf.nodes| <= 20.
double brute_force_joint(const LocalMRF& mrf, int u, int p);

}  // namespace linkrec
