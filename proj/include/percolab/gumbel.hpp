#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "percolab/clusters.hpp"
#include "percolab/estimators.hpp"
#include "percolab/sampler.hpp"

namespace percolab {

/// Replicated sizes of the maximal cluster meeting the centered box
/// [-n, n]^d, sampled from Bernoulli site percolation in a window padded by
/// `margin` on every side.
struct MaxClusterSample {
    double p = 0;
    int box_half_width = 0;
    int margin = 0;
    int d = 2;
    MaxClusterMode mode = MaxClusterMode::kAll;
    std::uint64_t seed = 0;
    std::vector<long> values;
};

MaxClusterSample simulate_max_clusters(double p, int box_half_width,
                                       int margin, long replicates,
                                       std::uint64_t seed, MaxClusterMode mode,
                                       int d = 2, int workers = 1);

/// Centering choice: largest k whose expected exceedance count over the box
/// is at least one, u_n = max{k : box_sites * p_k >= 1}. The tail must cover
/// the crossing; a flat tail (never crossing below) is flagged and returns
/// the range maximum.
struct CenteringChoice {
    int u_n = 0;
    bool flagged = false;
};

/// p_tail[i] = survival probability at size n_values[i] (consecutive sizes).
CenteringChoice choose_un(const std::vector<int>& n_values,
                          const std::vector<double>& p_tail,
                          double box_sites);

/// Comparison of the empirical law of |C_max| - u_n against the double
/// exponential x -> exp(-a_n mu^x). a_n is fitted with mu held fixed, by
/// least squares on log(-log F) over offsets with 0 < F < 1.
struct GumbelReport {
    int u_n = 0;
    double mu = 0;
    double a_n = 0;
    double sup_distance = 0;
    long usable_offsets = 0;
    std::vector<int> offsets;          // x values with usable empirical CDF
    std::vector<double> a_per_offset;  // -log F(u_n + x) / mu^x
};

GumbelReport gumbel_compare(const std::vector<long>& values, int u_n,
                            double mu);

std::string max_cluster_sample_to_csv(const MaxClusterSample& sample);

}  // namespace percolab
