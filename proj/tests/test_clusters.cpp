#include <stdexcept>

#include "doctest.h"
#include "percolab/clusters.hpp"
#include "percolab/rng.hpp"
#include "percolab/sampler.hpp"

using namespace percolab;

namespace {

Configuration config_from_sites(const Window& w,
                                const std::vector<Coords>& sites) {
    Configuration c(w);
    for (const Coords& x : sites) c.set(x, 1);
    return c;
}

}  // namespace

TEST_CASE("all-vacant window has no clusters") {
    Configuration c(Window::sized({6, 6}, 2));
    const ClusterLabeling labeling = extract_clusters(c);
    CHECK(labeling.clusters.empty());
    CHECK(size_census(c.window(), labeling, shrunk_region(c.window(), 0))
              .counts.empty());
}

TEST_CASE("isolated sites form singleton clusters") {
    const Window w(2, {-3, -3}, {4, 4}, 2);
    const Configuration c = config_from_sites(w, {{0, 0}, {0, 2}});
    const ClusterLabeling labeling = extract_clusters(c);
    REQUIRE(labeling.clusters.size() == 2);
    CHECK(labeling.clusters[0].size == 1);
    CHECK(labeling.clusters[1].size == 1);
}

TEST_CASE("cluster of origin") {
    const Window w(2, {-3, -3}, {4, 4}, 2);
    SUBCASE("vacant origin gives the empty cluster") {
        const Configuration c = config_from_sites(w, {{1, 0}});
        CHECK(cluster_of_origin(c).empty());
    }
    SUBCASE("plus-shape has five sites") {
        const Configuration c = config_from_sites(
            w, {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}});
        CHECK(cluster_of_origin(c).size() == 5);
    }
    SUBCASE("isolated origin is a singleton") {
        const Configuration c = config_from_sites(w, {{0, 0}});
        CHECK(cluster_of_origin(c).size() == 1);
    }
}

TEST_CASE("left-endpoint cluster selects the lexicographic minimum") {
    const Window w(2, {-3, -3}, {4, 4}, 2);
    const Configuration c = config_from_sites(w, {{0, 0}, {1, 0}});
    CHECK(left_endpoint_cluster(c, {0, 0}).size() == 2);
    CHECK(left_endpoint_cluster(c, {1, 0}).empty());
    CHECK(left_endpoint_cluster(c, {2, 2}).empty());
    CHECK_THROWS_AS(left_endpoint_cluster(c, {9, 9}), std::out_of_range);
}

TEST_CASE("labeling invariants on a random configuration") {
    const Window w = Window::sized({40, 40}, 2);
    const Configuration c =
        sample_product(w, ProductMeasureSpec::bernoulli(0.55), 17u);
    const ClusterLabeling a = extract_clusters(c);
    const ClusterLabeling b = extract_clusters(c);

    // idempotence
    REQUIRE(a.clusters.size() == b.clusters.size());
    CHECK(a.cluster_of == b.cluster_of);

    // sizes sum to the occupied count
    CHECK(a.total_occupied() == static_cast<long>(c.occupied_count()));

    // each cluster has exactly one left-endpoint: counting sites that are
    // the lexicographic minimum of their cluster recovers the cluster count
    long left_endpoints = 0;
    for (std::size_t idx = 0; idx < c.site_count(); ++idx) {
        const std::int32_t id = a.cluster_of[idx];
        if (id >= 0 && a.clusters[static_cast<std::size_t>(id)].left_endpoint == idx) {
            ++left_endpoints;
        }
    }
    CHECK(left_endpoints == static_cast<long>(a.clusters.size()));

    // adjacent occupied sites share labels
    for (std::size_t idx = 0; idx < c.site_count(); ++idx) {
        if (c.at_index(idx) != 1) {
            CHECK(a.cluster_of[idx] == -1);
            continue;
        }
        const Coords x = w.coords_of(idx);
        for (int axis = 0; axis < 2; ++axis) {
            Coords y = x;
            y[axis] += 1;
            if (w.contains(y) && c.at(y) == 1) {
                CHECK(a.cluster_of[idx] == a.cluster_of[w.index_of(y)]);
            }
        }
    }
}

TEST_CASE("max cluster size modes") {
    const Window w(2, {-8, -8}, {9, 9}, 2);
    Region box;
    box.lo = {-4, -4};
    box.hi = {5, 5};

    SUBCASE("all-vacant gives zero") {
        Configuration c(w);
        CHECK(max_cluster_size(c, box, MaxClusterMode::kAll) == 0);
    }
    SUBCASE("a cluster of seven intersecting the box is found") {
        std::vector<Coords> sites;
        for (int k = 0; k < 7; ++k) sites.push_back({3, -2 + k});
        const Configuration c = config_from_sites(w, sites);
        CHECK(max_cluster_size(c, box, MaxClusterMode::kAll) == 7);
    }
    SUBCASE("finite-only skips the spanning cluster") {
        // A column spanning the window touches the border; islands do not.
        std::vector<Coords> sites;
        for (int y = -8; y <= 8; ++y) sites.push_back({0, y});
        sites.push_back({3, 3});
        sites.push_back({3, 4});
        sites.push_back({4, 3});
        const Configuration c = config_from_sites(w, sites);
        CHECK(max_cluster_size(c, box, MaxClusterMode::kAll) == 17);
        CHECK(max_cluster_size(c, box, MaxClusterMode::kFiniteOnly) == 3);
    }
    SUBCASE("modes are ordered") {
        const Configuration c =
            sample_product(w, ProductMeasureSpec::bernoulli(0.6), 3u);
        CHECK(max_cluster_size(c, box, MaxClusterMode::kAll) >=
              max_cluster_size(c, box, MaxClusterMode::kFiniteOnly));
    }
    SUBCASE("an empty box is rejected") {
        Configuration c(w);
        Region empty;
        empty.lo = {2, 2};
        empty.hi = {2, 5};
        CHECK_THROWS_AS(max_cluster_size(c, empty, MaxClusterMode::kAll),
                        std::invalid_argument);
    }
}

TEST_CASE("size census separates interior and boundary-touching clusters") {
    const Window w = Window::sized({10, 10}, 2);
    SUBCASE("three interior dominoes") {
        const Configuration c = config_from_sites(
            w, {{2, 2}, {2, 3}, {5, 5}, {5, 6}, {7, 2}, {7, 3}});
        const SizeCensus census =
            size_census(w, extract_clusters(c), shrunk_region(w, 1));
        REQUIRE(census.counts.size() == 1);
        CHECK(census.counts.at(2) == 3);
        CHECK(census.boundary_touching_total() == 0);
    }
    SUBCASE("a border-crossing cluster lands in the touching tally only") {
        const Configuration c = config_from_sites(w, {{0, 4}, {1, 4}, {2, 4}});
        const SizeCensus census =
            size_census(w, extract_clusters(c), shrunk_region(w, 0));
        CHECK(census.counts.empty());
        CHECK(census.boundary_touching_total() == 1);
        CHECK(census.boundary_touching.at(3) == 1);
    }
    SUBCASE("left-endpoint outside the census region is not counted") {
        const Configuration c = config_from_sites(w, {{1, 5}, {2, 5}});
        const SizeCensus census =
            size_census(w, extract_clusters(c), shrunk_region(w, 2));
        CHECK(census.counts.empty());
    }
}
