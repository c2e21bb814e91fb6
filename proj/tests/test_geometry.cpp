#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "percolab/geometry.hpp"

using namespace percolab;

namespace {

long ipow(int base, int exp) {
    long v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

}  // namespace

TEST_CASE("cube geometry cardinalities") {
    const CubeGeometry g32 = cube_geometry(3, 2);
    CHECK(g32.cube.size() == 9);
    CHECK(g32.extended.size() == 25);
    CHECK(g32.boundary.size() == 16);

    const CubeGeometry g12 = cube_geometry(1, 2);
    CHECK(g12.cube.size() == 1);
    CHECK(g12.boundary.size() == 8);

    const CubeGeometry g13 = cube_geometry(1, 3);
    CHECK(g13.cube.size() == 1);
    CHECK(g13.boundary.size() == 26);

    CHECK_THROWS_AS(cube_geometry(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(cube_geometry(3, 1), std::invalid_argument);
}

TEST_CASE("shell sizes match the closed forms for a range of r and d") {
    for (int d = 2; d <= 3; ++d) {
        for (int r = 1; r <= 4; ++r) {
            const CubeGeometry g = cube_geometry(r, d);
            CHECK(static_cast<long>(g.cube.size()) == ipow(r, d));
            CHECK(static_cast<long>(g.extended.size()) == ipow(r + 2, d));
            CHECK(static_cast<long>(g.boundary.size()) ==
                  ipow(r + 2, d) - ipow(r, d));
            CHECK(static_cast<long>(g.extended_boundary.size()) ==
                  ipow(r + 4, d) - ipow(r + 2, d));
            // boundary really is extended \ cube
            std::set<Coords> cube(g.cube.begin(), g.cube.end());
            for (const Coords& b : g.boundary) {
                CHECK(cube.count(b) == 0);
            }
        }
    }
}

TEST_CASE("grid sites for r=1 in [0,9)^2") {
    const Window w = Window::sized({9, 9}, 2);
    const auto v = grid_sites(w, 1);
    CHECK(v.size() == 9);
    for (const Coords& x : v) {
        CHECK(on_grid(x, 1));
        CHECK((x[0] == 1 || x[0] == 4 || x[0] == 7));
        CHECK((x[1] == 1 || x[1] == 4 || x[1] == 7));
    }
    CHECK_FALSE(on_grid({0, 0}, 1));
}

TEST_CASE("grid sites for r=3 in [0,6)^2 reduce to (1,1)") {
    const Window w = Window::sized({6, 6}, 2);
    for (const GridFit fit : {GridFit::kExtendedCubeInside, GridFit::kCubeInside}) {
        const auto v = grid_sites(w, 3, fit);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == Coords{1, 1});
    }
}

TEST_CASE("cube-only fit admits at least as many placements") {
    const Window w = Window::sized({20, 17}, 2);
    for (int r = 1; r <= 3; ++r) {
        CHECK(grid_sites(w, r, GridFit::kCubeInside).size() >=
              grid_sites(w, r, GridFit::kExtendedCubeInside).size());
    }
}

TEST_CASE("extended cubes at distinct grid sites are disjoint") {
    const Window w = Window::sized({16, 16}, 2);
    for (int r = 1; r <= 2; ++r) {
        const CubeGeometry g = cube_geometry(r, 2);
        const auto v = grid_sites(w, r);
        std::set<Coords> covered;
        for (const Coords& x : v) {
            for (const Coords& off : g.extended) {
                Coords site{x[0] + off[0], x[1] + off[1]};
                CHECK(covered.insert(site).second);
            }
        }
    }
}

TEST_CASE("the origin is never inside a placed cube") {
    const Window w(2, {-20, -20}, {20, 20}, 2);
    for (int r = 1; r <= 3; ++r) {
        for (const Coords& x : grid_sites(w, r)) {
            bool origin_inside = true;
            for (int i = 0; i < 2; ++i) {
                if (!(x[i] <= 0 && 0 < x[i] + r)) origin_inside = false;
            }
            CHECK_FALSE(origin_inside);
        }
    }
}

TEST_CASE("window indexing is lexicographic and invertible") {
    const Window w(3, {-2, 0, 1}, {1, 2, 4}, 5);
    CHECK(w.site_count() == 3u * 2u * 3u);
    Coords prev;
    for (std::size_t idx = 0; idx < w.site_count(); ++idx) {
        const Coords x = w.coords_of(idx);
        CHECK(w.index_of(x) == idx);
        if (idx > 0) CHECK(compare_lex(prev, x) < 0);
        prev = x;
    }
    CHECK_THROWS_AS(w.index_of({5, 5, 5}), std::out_of_range);
    CHECK_THROWS_AS((Window{2, {0, 0}, {0, 3}, 2}), std::invalid_argument);
    CHECK_THROWS_AS((Window{2, {0, 0}, {3, 3}, 1}), std::invalid_argument);
}
