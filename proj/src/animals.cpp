#include "percolab/animals.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace percolab {

namespace {

class Enumerator {
public:
    Enumerator(int n_max, const std::function<void(const AnimalView&)>& visit)
        : n_max_(n_max),
          visit_(visit),
          width_(n_max + 2),          // x in [-1, n_max]
          height_(2 * n_max + 3),     // y in [-n_max - 1, n_max + 1]
          in_animal_(static_cast<std::size_t>(width_) * height_, 0),
          reached_(in_animal_.size(), 0),
          nbr_count_(in_animal_.size(), 0) {
        animal_.reserve(static_cast<std::size_t>(n_max));
    }

    void run() {
        const Cell origin{0, 0};
        reached_[index(origin)] = 1;
        std::vector<Cell> untried{origin};
        grow(untried);
    }

private:
    std::size_t index(Cell c) const {
        return static_cast<std::size_t>(c.first + 1) * height_ +
               static_cast<std::size_t>(c.second + n_max_ + 1);
    }

    static bool allowed(Cell c) {
        return c.first > 0 || (c.first == 0 && c.second >= 0);
    }

    void add_cell(Cell c) {
        const std::size_t ci = index(c);
        if (nbr_count_[ci] > 0) --perimeter_;
        in_animal_[ci] = 1;
        for (const Cell u : {Cell{c.first - 1, c.second}, Cell{c.first + 1, c.second},
                             Cell{c.first, c.second - 1}, Cell{c.first, c.second + 1}}) {
            const std::size_t ui = index(u);
            ++nbr_count_[ui];
            if (!in_animal_[ui] && nbr_count_[ui] == 1) ++perimeter_;
        }
        animal_.push_back(c);
    }

    void remove_cell(Cell c) {
        animal_.pop_back();
        const std::size_t ci = index(c);
        for (const Cell u : {Cell{c.first - 1, c.second}, Cell{c.first + 1, c.second},
                             Cell{c.first, c.second - 1}, Cell{c.first, c.second + 1}}) {
            const std::size_t ui = index(u);
            if (!in_animal_[ui] && nbr_count_[ui] == 1) --perimeter_;
            --nbr_count_[ui];
        }
        in_animal_[ci] = 0;
        if (nbr_count_[ci] > 0) ++perimeter_;
    }

    void grow(std::vector<Cell>& untried) {
        while (!untried.empty()) {
            const Cell c = untried.back();
            untried.pop_back();
            add_cell(c);
            visit_(AnimalView{animal_.data(), static_cast<int>(animal_.size()),
                              perimeter_});
            if (static_cast<int>(animal_.size()) < n_max_) {
                std::vector<Cell> child(untried);
                Cell newly[4];
                int n_new = 0;
                for (const Cell u :
                     {Cell{c.first - 1, c.second}, Cell{c.first + 1, c.second},
                      Cell{c.first, c.second - 1}, Cell{c.first, c.second + 1}}) {
                    if (!allowed(u)) continue;
                    const std::size_t ui = index(u);
                    if (reached_[ui]) continue;
                    reached_[ui] = 1;
                    child.push_back(u);
                    newly[n_new++] = u;
                }
                grow(child);
                for (int k = 0; k < n_new; ++k) reached_[index(newly[k])] = 0;
            }
            remove_cell(c);
            // c stays reached: siblings at this level may not re-add it.
        }
    }

    const int n_max_;
    const std::function<void(const AnimalView&)>& visit_;
    const int width_;
    const int height_;
    std::vector<std::uint8_t> in_animal_;
    std::vector<std::uint8_t> reached_;
    std::vector<std::int16_t> nbr_count_;
    std::vector<Cell> animal_;
    int perimeter_ = 0;
};

}  // namespace

void enumerate_anchored_animals(
    int n_max, const std::function<void(const AnimalView&)>& visit, int budget) {
    if (n_max < 1) {
        throw std::invalid_argument("enumerate_anchored_animals: n_max >= 1");
    }
    if (n_max > budget) {
        throw std::invalid_argument(
            "enumerate_anchored_animals: n_max " + std::to_string(n_max) +
            " exceeds budget " + std::to_string(budget));
    }
    Enumerator e(n_max, visit);
    e.run();
}

std::vector<long long> anchored_animal_counts(int n_max, int budget) {
    std::vector<long long> counts(static_cast<std::size_t>(n_max) + 1, 0);
    enumerate_anchored_animals(
        n_max, [&](const AnimalView& a) { ++counts[a.size]; }, budget);
    return counts;
}

std::vector<LatticeAnimal> animals_of_size(int n, int budget) {
    std::vector<LatticeAnimal> out;
    enumerate_anchored_animals(
        n,
        [&](const AnimalView& a) {
            if (a.size != n) return;
            LatticeAnimal animal;
            animal.cells.assign(a.cells, a.cells + a.size);
            std::sort(animal.cells.begin(), animal.cells.end());
            animal.perimeter = a.perimeter;
            out.push_back(std::move(animal));
        },
        budget);
    return out;
}

int site_perimeter(const std::vector<Cell>& cells) {
    std::set<Cell> in(cells.begin(), cells.end());
    std::set<Cell> boundary;
    for (const Cell c : cells) {
        for (const Cell u : {Cell{c.first - 1, c.second}, Cell{c.first + 1, c.second},
                             Cell{c.first, c.second - 1}, Cell{c.first, c.second + 1}}) {
            if (!in.count(u)) boundary.insert(u);
        }
    }
    return static_cast<int>(boundary.size());
}

}  // namespace percolab
