#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "percolab/configuration.hpp"

namespace percolab {

struct ClusterInfo {
    long size = 0;
    std::size_t left_endpoint = 0;  // linear index of the lexicographic minimum
    bool touches_boundary = false;
    Coords bbox_lo;
    Coords bbox_hi;  // inclusive
};

/// Partition of the occupied (state-1) sites into nearest-neighbour
/// connected clusters. `cluster_of[idx]` is -1 for non-occupied sites.
/// Clusters are numbered in increasing left-endpoint order.
struct ClusterLabeling {
    std::vector<std::int32_t> cluster_of;
    std::vector<ClusterInfo> clusters;

    long total_occupied() const {
        long n = 0;
        for (const auto& c : clusters) n += c.size;
        return n;
    }
};

ClusterLabeling extract_clusters(const Configuration& config);

/// Sites of the origin's occupied cluster (empty when the origin is not in
/// state 1). The origin must lie inside the window.
std::vector<Coords> cluster_of_origin(const Configuration& config);

/// C(x) when x is the lexicographic minimum of its cluster, else empty.
std::vector<Coords> left_endpoint_cluster(const Configuration& config,
                                          const Coords& x);

/// Axis-aligned box, inclusive-exclusive bounds, used for census regions and
/// maximal-cluster boxes.
struct Region {
    Coords lo;
    Coords hi;

    bool contains(const Coords& x) const {
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (x[i] < lo[i] || x[i] >= hi[i]) return false;
        }
        return true;
    }
    bool empty() const {
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (hi[i] <= lo[i]) return true;
        }
        return false;
    }
};

/// The window shrunk by `margin` sites on every face.
Region shrunk_region(const Window& window, int margin);

enum class MaxClusterMode {
    kAll,         // every cluster intersecting the box
    kFiniteOnly,  // boundary-touching clusters excluded (finite proxy)
};

/// Size of the largest cluster intersecting `box`. With kFiniteOnly,
/// boundary-touching clusters stand in for infinite ones and are skipped.
long max_cluster_size(const Configuration& config,
                      const ClusterLabeling& labeling, const Region& box,
                      MaxClusterMode mode);
long max_cluster_size(const Configuration& config, const Region& box,
                      MaxClusterMode mode);

/// Cluster-size counts restricted to clusters whose left-endpoint lies in
/// the census region and which do not touch the window border.
/// Boundary-touching clusters are tallied separately by size.
struct SizeCensus {
    std::map<long, long> counts;
    std::map<long, long> boundary_touching;
    long boundary_touching_total() const {
        long n = 0;
        for (const auto& [size, cnt] : boundary_touching) n += cnt;
        return n;
    }
};

SizeCensus size_census(const Window& window, const ClusterLabeling& labeling,
                       const Region& census_region);

/// Census CSV: columns (size, count, boundary_touching_excluded).
std::string census_to_csv(const SizeCensus& census);

}  // namespace percolab
