#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace percolab {

/// Default enumeration budget: sizes beyond this are rejected rather than
/// silently attempted.
inline constexpr int kAnimalBudgetDefault = 12;

using Cell = std::pair<int, int>;

/// One enumerated animal, cells in discovery order. The cell set always
/// contains the origin and the origin is its lexicographic minimum.
struct AnimalView {
    const Cell* cells = nullptr;
    int size = 0;
    int perimeter = 0;  // number of distinct vacant sites adjacent to the set
};

/// Enumerates every fixed polyomino of size 1..n_max whose left-endpoint
/// (lexicographic minimum) sits at the origin, each exactly once, with its
/// exact site perimeter. Canonical growth enumeration over the half-plane
/// x > 0 or (x == 0, y >= 0).
void enumerate_anchored_animals(int n_max,
                                const std::function<void(const AnimalView&)>& visit,
                                int budget = kAnimalBudgetDefault);

/// Anchored animal counts per size, counts[n] for n in 1..n_max.
std::vector<long long> anchored_animal_counts(int n_max,
                                              int budget = kAnimalBudgetDefault);

/// Materialized animal for tests and small-scale inspection.
struct LatticeAnimal {
    std::vector<Cell> cells;  // sorted lexicographically
    int perimeter = 0;
};

std::vector<LatticeAnimal> animals_of_size(int n,
                                           int budget = kAnimalBudgetDefault);

/// Recomputes the site perimeter of a cell set from scratch.
int site_perimeter(const std::vector<Cell>& cells);

}  // namespace percolab
