#pragma once

// Independent small-scale oracles used by the unit and acceptance suites.
// These deliberately avoid the library's enumeration and analysis code paths
// they are meant to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "percolab/rng.hpp"

namespace percolab::oracles {

// ---------------------------------------------------------------------------
// Full enumeration of the 13 sites within L1-distance 2 of the origin.
// P(|C(0)| = n) is exact for n <= 2: such clusters and their perimeters fit
// inside the diamond.
inline double diamond_cluster_probability(double p, int target_size) {
    std::vector<std::pair<int, int>> sites;
    for (int x = -2; x <= 2; ++x) {
        for (int y = -2; y <= 2; ++y) {
            if (std::abs(x) + std::abs(y) <= 2) sites.emplace_back(x, y);
        }
    }
    const int m = static_cast<int>(sites.size());  // 13
    auto site_index = [&](int x, int y) -> int {
        for (int i = 0; i < m; ++i) {
            if (sites[i].first == x && sites[i].second == y) return i;
        }
        return -1;
    };
    double total = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        const int origin = site_index(0, 0);
        if (!(mask >> origin & 1)) continue;
        // BFS cluster of the origin within the diamond, exterior vacant.
        std::vector<char> seen(m, 0);
        std::queue<int> queue;
        queue.push(origin);
        seen[origin] = 1;
        int size = 0;
        while (!queue.empty()) {
            const int i = queue.front();
            queue.pop();
            ++size;
            const auto [x, y] = sites[i];
            for (const auto [dx, dy] :
                 {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                const int j = site_index(x + dx, y + dy);
                if (j >= 0 && !seen[j] && (mask >> j & 1)) {
                    seen[j] = 1;
                    queue.push(j);
                }
            }
        }
        if (size != target_size) continue;
        int occupied = 0;
        for (int i = 0; i < m; ++i) occupied += (mask >> i & 1);
        total += std::pow(p, occupied) * std::pow(1.0 - p, m - occupied);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Brute-force fixed-polyomino census: enumerate all size-n subsets of a
// 6x6 window, keep the connected ones, canonicalize by translating the
// lexicographic minimum to the origin, and count distinct shapes.
struct BruteAnimal {
    std::vector<std::pair<int, int>> cells;  // canonical, sorted
    int perimeter = 0;
};

inline std::vector<BruteAnimal> brute_force_fixed_polyominoes(int n,
                                                              int side = 6) {
    const int m = side * side;
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::set<std::vector<std::pair<int, int>>> shapes;

    auto connected = [&](const std::vector<std::pair<int, int>>& cells) {
        std::set<std::pair<int, int>> in(cells.begin(), cells.end());
        std::queue<std::pair<int, int>> queue;
        std::set<std::pair<int, int>> seen;
        queue.push(cells[0]);
        seen.insert(cells[0]);
        while (!queue.empty()) {
            const auto [x, y] = queue.front();
            queue.pop();
            for (const auto [dx, dy] :
                 {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                const std::pair<int, int> u{x + dx, y + dy};
                if (in.count(u) && !seen.count(u)) {
                    seen.insert(u);
                    queue.push(u);
                }
            }
        }
        return seen.size() == cells.size();
    };

    for (;;) {
        std::vector<std::pair<int, int>> cells;
        for (int i : idx) cells.emplace_back(i / side, i % side);
        if (connected(cells)) {
            std::vector<std::pair<int, int>> canon(cells);
            std::sort(canon.begin(), canon.end());
            const auto [ax, ay] = canon.front();
            for (auto& [x, y] : canon) {
                x -= ax;
                y -= ay;
            }
            shapes.insert(canon);
        }
        // next combination
        int i = n - 1;
        while (i >= 0 && idx[i] == m - n + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }

    std::vector<BruteAnimal> out;
    for (const auto& shape : shapes) {
        BruteAnimal a;
        a.cells = shape;
        std::set<std::pair<int, int>> in(shape.begin(), shape.end());
        std::set<std::pair<int, int>> boundary;
        for (const auto [x, y] : shape) {
            for (const auto [dx, dy] :
                 {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                const std::pair<int, int> u{x + dx, y + dy};
                if (!in.count(u)) boundary.insert(u);
            }
        }
        a.perimeter = static_cast<int>(boundary.size());
        out.push_back(std::move(a));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Integer-valued draws with P(X <= k) = exp(-a mu^k) exactly: invert the
// continuous law and take the ceiling.
inline std::vector<long> synthetic_double_exponential_sample(double a,
                                                             double mu,
                                                             long count,
                                                             std::uint64_t seed) {
    std::vector<long> out;
    out.reserve(static_cast<std::size_t>(count));
    auto eng = RngPolicy(seed).stream(7);
    const double log_mu = std::log(mu);
    for (long i = 0; i < count; ++i) {
        double u = uniform01(eng);
        while (u <= 0.0) u = uniform01(eng);
        const double x = std::log(-std::log(u) / a) / log_mu;
        out.push_back(static_cast<long>(std::ceil(x)));
    }
    return out;
}

}  // namespace percolab::oracles
