#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "percolab/clusters.hpp"
#include "percolab/configuration.hpp"
#include "percolab/geometry.hpp"

namespace percolab {

/// A prescribed assignment of states to the cube of diameter r. Values are
/// stored in lexicographic offset order.
class Pattern {
public:
    Pattern(int r, int d, int q, std::vector<std::uint8_t> values);

    int r() const { return r_; }
    int dim() const { return d_; }
    int states() const { return q_; }
    const std::vector<std::uint8_t>& values() const { return values_; }
    std::uint8_t value_at(const Coords& offset) const;

    bool operator==(const Pattern& other) const = default;

    /// Single-site cube, occupied / vacant. The canonical
    /// cluster-determined pair used by the exact identity checks.
    static Pattern single_site_occupied(int d, int q = 2);
    static Pattern single_site_vacant(int d, int q = 2);

    /// The r=3 pair behind the ratio-limit argument: one occupied site in the
    /// cube centre (contributes nothing to the surrounding cluster) versus one
    /// occupied site in the cube corner (contributes one site).
    static Pattern r3_centre_occupied(int d, int q = 2);
    static Pattern r3_corner_occupied(int d, int q = 2);

private:
    int r_, d_, q_;
    std::vector<std::uint8_t> values_;
};

/// True iff the configuration matches the pattern on the cube at x.
/// Throws when the cube extends outside the window.
bool occurs_at(const Configuration& config, const Pattern& pattern,
               const Coords& x);

/// Site membership mask over the window, 1 = in the cluster.
using ClusterMask = std::vector<std::uint8_t>;

ClusterMask mask_from_sites(const Window& window,
                            const std::vector<Coords>& sites);
ClusterMask mask_from_label(const ClusterLabeling& labeling, std::int32_t id);

/// Occurrence on a cluster: the pattern occurs at x and the whole cube
/// boundary lies inside the cluster. Throws when the extended cube extends
/// outside the window.
bool occurs_on_cluster_at(const Configuration& config, const Pattern& pattern,
                          const Coords& x, const ClusterMask& cluster);

/// Number of occurrences of the pattern on the cluster at sites of the
/// counting grid (restricted to placements whose extended cube fits).
long count_occurrences(const Configuration& config, const Pattern& pattern,
                       const ClusterMask& cluster);

/// One grid sweep attributing occurrences to every cluster at once:
/// counts[id] = occurrences of the pattern on cluster id. Equivalent to
/// count_occurrences per cluster; used by the harvesting estimators.
std::unordered_map<std::int32_t, long> count_occurrences_by_cluster(
    const Configuration& config, const ClusterLabeling& labeling,
    const Pattern& pattern);

/// Number of occupied pattern sites connected to the cube boundary through
/// occupied pattern sites (the boundary itself counts as occupied). These are
/// the sites the pattern contributes to a surrounding cluster.
int cluster_contribution(const Pattern& pattern);

/// A pattern is cluster-determined when occurrences on a cluster are a
/// function of the cluster alone: every occupied site is boundary-connected
/// and every vacant site is adjacent to the boundary or to a
/// boundary-connected occupied site.
bool is_cluster_determined(const Pattern& pattern);

/// Per-state probabilities of a product measure (q entries summing to one).
struct ProductMeasureSpec;

/// Probability that the configuration equals the pattern on the cube and is
/// fully occupied on the cube boundary, under a product measure.
double box_probability_exact(const Pattern& pattern,
                             const std::vector<double>& state_probs);

struct MonteCarloEstimate {
    double estimate = 0;
    double std_error = 0;
    long samples = 0;
};

/// Predicted limiting occurrence ratio between two patterns:
/// mu^{c_{P'}} P(box P) / (mu^{c_P} P(box P')).
double gamma_ratio(const Pattern& p, const Pattern& p_prime, double mu,
                   const std::vector<double>& state_probs);

/// Pattern pair with the derived quantities used by reports.
struct PatternPairContext {
    Pattern p;
    Pattern p_prime;
    int c_p = 0;
    int c_p_prime = 0;
    int delta_c = 0;  // c_{P'} - c_P
    double box_p = 0;
    double box_p_prime = 0;
    double gamma = 0;
};

PatternPairContext make_pair_context(const Pattern& p, const Pattern& p_prime,
                                     double mu,
                                     const std::vector<double>& state_probs);

/// Text format: grid of state digits, one row per line; in d=3, r blocks of
/// r lines separated by blank lines. `#` starts a comment.
std::string pattern_to_text(const Pattern& pattern);
Pattern pattern_from_text(const std::string& text, int q);
Pattern read_pattern_file(const std::string& path, int q);
void write_pattern_file(const Pattern& pattern, const std::string& path);

}  // namespace percolab
