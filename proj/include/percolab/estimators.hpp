#pragma once

#include <optional>
#include <string>
#include <vector>

#include "percolab/clusters.hpp"
#include "percolab/patterns.hpp"

namespace percolab {

/// One point of a cluster-size tail: probability that the origin's cluster
/// has size n, with a standard error when estimated.
struct TailPoint {
    int n = 0;
    double c = 0;
    double se = 0;
    long clusters = 0;  // harvested cluster count behind the estimate
};

/// Exponential-tail constant estimated two ways: the root route c_n^{1/n}
/// and the ratio route p_{n+1}/p_n. The survival probabilities p_n are the
/// suffix sums of c completed geometrically beyond the horizon (using the
/// last available ratio), which keeps both routes exact on geometric tails
/// and defines the ratio route at the horizon itself.
struct MuEstimates {
    std::vector<int> n;
    std::vector<double> root;
    std::vector<double> ratio;
    std::vector<double> ratio_se;
    std::vector<double> p_completed;
    bool completion_applied = false;

    double root_last() const { return root.back(); }
    double ratio_last() const { return ratio.back(); }
};

MuEstimates estimate_mu(const std::vector<TailPoint>& tail);

/// Stretched-exponential fit c_n = exp(-lambda n^beta): least squares of
/// log(-log c_n) against log n gives beta (slope) and nu = exp(-lambda).
struct StretchedFit {
    double beta = 0;
    double nu = 0;
};

StretchedFit fit_stretched(const std::vector<TailPoint>& tail);

/// Harvested cluster with its pattern occurrence counts.
struct ClusterPatternRecord {
    long size = 0;
    long n_p = 0;
    long n_p_prime = 0;
};

/// Harvests every cluster of the configuration that does not touch the
/// window border and whose bounding box stays `r + 2` sites clear of it (so
/// no countable occurrence is clipped by the window).
std::vector<ClusterPatternRecord> harvest_pattern_records(
    const Configuration& config, const ClusterLabeling& labeling,
    const Pattern& p, const Pattern& p_prime);

/// Geometric size-bin edges: lo, lo*factor, ... capped at hi (hi inclusive).
std::vector<double> geometric_bin_edges(double lo, double hi, double factor);

struct ConcentrationBin {
    double lo = 0, hi = 0;  // size range [lo, hi)
    long count = 0;
    double mean_size = 0;
    double mean_np = 0, var_np = 0;
    double mean_npp = 0, var_npp = 0;
    /// mean over clusters with N_{P'} > 0 of N_P / N_{P'}
    double mean_ratio = 0;
    long ratio_excluded = 0;
    /// Sum N_P over the bin divided by sum N_{P'}; the bin-level analogue of
    /// the concentrated occurrence ratio.
    double ratio_of_means = 0;
};

struct ConcentrationReport {
    double gamma_ref = 0;
    std::vector<ConcentrationBin> bins;
};

ConcentrationReport conditional_pattern_stats(
    const std::vector<ClusterPatternRecord>& records,
    const std::vector<double>& bin_edges, double gamma_ref);

/// Empirical conditional probabilities P(N_P <= a * size) per size bin and
/// per threshold a.
struct PatternTheoremReport {
    std::vector<double> a_grid;
    std::vector<double> bin_lo, bin_hi;
    std::vector<long> bin_count;
    /// fraction[bin][a_index]
    std::vector<std::vector<double>> fraction;
};

PatternTheoremReport pattern_theorem_report(
    const std::vector<ClusterPatternRecord>& records,
    const std::vector<double>& bin_edges, const std::vector<double>& a_grid);

struct RatioLimitRow {
    int n = 0;
    double c_ratio = 0;       // c_{n+1}/c_n (NaN when c_{n+1} unavailable)
    double p_ratio = 0;       // p_{n+1}/p_n with geometric completion
    double dev_from_mu = 0;   // |c_ratio - mu_ref|
    double route_gap = 0;     // |c_ratio - p_ratio|
    double strengthened = 0;  // n^{(1-beta)/2} |c_ratio - 1| when beta given
};

struct RatioLimitReport {
    double mu_ref = 0;
    std::optional<double> beta;
    std::vector<RatioLimitRow> rows;
};

RatioLimitReport ratio_limit_report(const std::vector<TailPoint>& tail,
                                    std::optional<double> beta = std::nullopt);

/// Monte-Carlo tail from per-replicate size censuses. The estimator counts
/// left-endpoints in the census region: c_n = n * E[#clusters of size n with
/// left-endpoint in R] / |R|; the standard error is taken across replicates.
std::vector<TailPoint> mc_tail_from_censuses(
    const std::vector<SizeCensus>& censuses, double region_sites, int n_max);

/// Largest n whose estimate rests on at least `min_clusters` harvested
/// clusters; the anchor for "ratio route at the largest reliable n".
int largest_reliable_n(const std::vector<TailPoint>& tail, long min_clusters);

std::string tail_to_csv(const std::vector<TailPoint>& tail);
std::vector<TailPoint> tail_from_csv(const std::string& text);
std::string concentration_to_csv(const ConcentrationReport& report);
std::string pattern_theorem_to_csv(const PatternTheoremReport& report);
std::string ratio_limit_to_csv(const RatioLimitReport& report);

}  // namespace percolab
