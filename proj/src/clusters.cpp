#include "percolab/clusters.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "percolab/textio.hpp"

namespace percolab {

namespace {

// Union-find keyed by linear site index. The root is always the smallest
// index in its set, so the root of a finished cluster is its left-endpoint.
struct MinRootUnionFind {
    std::vector<std::int64_t> parent;  // -1 = vacant, else parent index

    explicit MinRootUnionFind(std::size_t n) : parent(n, -1) {}

    std::size_t find(std::size_t i) {
        std::size_t root = i;
        while (parent[root] != static_cast<std::int64_t>(root)) {
            root = static_cast<std::size_t>(parent[root]);
        }
        while (parent[i] != static_cast<std::int64_t>(root)) {
            const std::size_t next = static_cast<std::size_t>(parent[i]);
            parent[i] = static_cast<std::int64_t>(root);
            i = next;
        }
        return root;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) {
            parent[b] = static_cast<std::int64_t>(a);
        } else {
            parent[a] = static_cast<std::int64_t>(b);
        }
    }
};

}  // namespace

ClusterLabeling extract_clusters(const Configuration& config) {
    const Window& w = config.window();
    const int d = w.dim();
    const std::size_t n = config.site_count();
    const auto& states = config.states();
    const auto& strides = w.strides();

    MinRootUnionFind uf(n);

    // Raster scan in lexicographic order; for each occupied site, unite with
    // the already-visited neighbour along each axis.
    Coords x(w.lo());
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (states[idx] == 1) {
            uf.parent[idx] = static_cast<std::int64_t>(idx);
            for (int axis = 0; axis < d; ++axis) {
                if (x[axis] > w.lo()[axis]) {
                    const std::size_t nb = idx - strides[axis];
                    if (states[nb] == 1) uf.unite(idx, nb);
                }
            }
        }
        int axis = d - 1;
        while (axis >= 0) {
            if (++x[axis] < w.hi()[axis]) break;
            x[axis] = w.lo()[axis];
            --axis;
        }
    }

    ClusterLabeling out;
    out.cluster_of.assign(n, -1);

    // Roots appear in increasing index order during this scan, which numbers
    // clusters by left-endpoint.
    std::unordered_map<std::size_t, std::int32_t> root_to_id;
    x = w.lo();
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (states[idx] == 1) {
            const std::size_t root = uf.find(idx);
            auto it = root_to_id.find(root);
            std::int32_t id;
            if (it == root_to_id.end()) {
                id = static_cast<std::int32_t>(out.clusters.size());
                root_to_id.emplace(root, id);
                ClusterInfo info;
                info.left_endpoint = root;
                info.bbox_lo = x;
                info.bbox_hi = x;
                out.clusters.push_back(std::move(info));
            } else {
                id = it->second;
            }
            ClusterInfo& info = out.clusters[static_cast<std::size_t>(id)];
            info.size += 1;
            bool border = false;
            for (int axis = 0; axis < d; ++axis) {
                info.bbox_lo[axis] = std::min(info.bbox_lo[axis], x[axis]);
                info.bbox_hi[axis] = std::max(info.bbox_hi[axis], x[axis]);
                if (x[axis] == w.lo()[axis] || x[axis] == w.hi()[axis] - 1) {
                    border = true;
                }
            }
            info.touches_boundary = info.touches_boundary || border;
            out.cluster_of[idx] = id;
        }
        int axis = d - 1;
        while (axis >= 0) {
            if (++x[axis] < w.hi()[axis]) break;
            x[axis] = w.lo()[axis];
            --axis;
        }
    }
    return out;
}

namespace {

std::vector<Coords> cluster_sites(const Configuration& config,
                                  const ClusterLabeling& labeling,
                                  std::int32_t id) {
    std::vector<Coords> sites;
    const Window& w = config.window();
    for (std::size_t idx = 0; idx < labeling.cluster_of.size(); ++idx) {
        if (labeling.cluster_of[idx] == id) sites.push_back(w.coords_of(idx));
    }
    return sites;
}

}  // namespace

std::vector<Coords> cluster_of_origin(const Configuration& config) {
    const Window& w = config.window();
    const Coords origin(w.dim(), 0);
    if (!w.contains(origin)) {
        throw std::out_of_range("cluster_of_origin: origin outside window");
    }
    if (config.at(origin) != 1) return {};
    const ClusterLabeling labeling = extract_clusters(config);
    return cluster_sites(config, labeling,
                         labeling.cluster_of[w.index_of(origin)]);
}

std::vector<Coords> left_endpoint_cluster(const Configuration& config,
                                          const Coords& x) {
    const Window& w = config.window();
    const std::size_t idx = w.index_of(x);  // throws when outside
    if (config.at_index(idx) != 1) return {};
    const ClusterLabeling labeling = extract_clusters(config);
    const std::int32_t id = labeling.cluster_of[idx];
    if (labeling.clusters[static_cast<std::size_t>(id)].left_endpoint != idx) {
        return {};
    }
    return cluster_sites(config, labeling, id);
}

Region shrunk_region(const Window& window, int margin) {
    if (margin < 0) throw std::invalid_argument("shrunk_region: negative margin");
    Region r;
    r.lo = window.lo();
    r.hi = window.hi();
    for (int i = 0; i < window.dim(); ++i) {
        r.lo[i] += margin;
        r.hi[i] -= margin;
    }
    return r;
}

long max_cluster_size(const Configuration& config,
                      const ClusterLabeling& labeling, const Region& box,
                      MaxClusterMode mode) {
    const Window& w = config.window();
    if (box.empty()) throw std::invalid_argument("max_cluster_size: empty box");
    for (int i = 0; i < w.dim(); ++i) {
        if (box.lo[i] < w.lo()[i] || box.hi[i] > w.hi()[i]) {
            throw std::invalid_argument("max_cluster_size: box outside window");
        }
    }
    long best = 0;
    Coords x(box.lo);
    for (;;) {
        const std::size_t idx = w.index_of(x);
        const std::int32_t id = labeling.cluster_of[idx];
        if (id >= 0) {
            const ClusterInfo& info = labeling.clusters[static_cast<std::size_t>(id)];
            if (mode == MaxClusterMode::kAll || !info.touches_boundary) {
                best = std::max(best, info.size);
            }
        }
        int axis = w.dim() - 1;
        while (axis >= 0) {
            if (++x[axis] < box.hi[axis]) break;
            x[axis] = box.lo[axis];
            --axis;
        }
        if (axis < 0) break;
    }
    return best;
}

long max_cluster_size(const Configuration& config, const Region& box,
                      MaxClusterMode mode) {
    return max_cluster_size(config, extract_clusters(config), box, mode);
}

SizeCensus size_census(const Window& window, const ClusterLabeling& labeling,
                       const Region& census_region) {
    SizeCensus census;
    for (const ClusterInfo& info : labeling.clusters) {
        if (info.touches_boundary) {
            census.boundary_touching[info.size] += 1;
        } else if (census_region.contains(window.coords_of(info.left_endpoint))) {
            census.counts[info.size] += 1;
        }
    }
    return census;
}

std::string census_to_csv(const SizeCensus& census) {
    CsvBuilder csv({"size", "count", "boundary_touching_excluded"});
    std::map<long, std::pair<long, long>> merged;
    for (const auto& [size, cnt] : census.counts) merged[size].first = cnt;
    for (const auto& [size, cnt] : census.boundary_touching) {
        merged[size].second = cnt;
    }
    for (const auto& [size, pair] : merged) {
        csv.add_row({std::to_string(size), std::to_string(pair.first),
                     std::to_string(pair.second)});
    }
    return csv.str();
}

}  // namespace percolab
