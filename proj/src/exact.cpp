#include "percolab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "percolab/numeric.hpp"
#include "percolab/textio.hpp"

namespace percolab {

namespace {

void check_probability(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::invalid_argument("occupation probability must lie in (0, 1)");
    }
}

// p^n (1-p)^t lookup tables up to the maximum size / perimeter seen.
struct WeightTables {
    std::vector<double> p_pow;
    std::vector<double> q_pow;

    WeightTables(double p, int max_n, int max_t) {
        p_pow.resize(static_cast<std::size_t>(max_n) + 1);
        q_pow.resize(static_cast<std::size_t>(max_t) + 1);
        p_pow[0] = 1.0;
        for (int i = 1; i <= max_n; ++i) p_pow[i] = p_pow[i - 1] * p;
        q_pow[0] = 1.0;
        for (int i = 1; i <= max_t; ++i) q_pow[i] = q_pow[i - 1] * (1.0 - p);
    }

    double weight(int n, int t) const { return p_pow[n] * q_pow[t]; }
};

int max_perimeter(const std::vector<std::map<int, long long>>& by_size) {
    int m = 0;
    for (const auto& terms : by_size) {
        if (!terms.empty()) m = std::max(m, terms.rbegin()->first);
    }
    return m;
}

}  // namespace

TailPolynomial tail_polynomial(int n_max, int budget) {
    TailPolynomial poly;
    poly.n_max = n_max;
    poly.anchored.resize(static_cast<std::size_t>(n_max) + 1);
    poly.origin_shifts.resize(static_cast<std::size_t>(n_max) + 1);
    enumerate_anchored_animals(
        n_max,
        [&](const AnimalView& a) {
            poly.anchored[a.size][a.perimeter] += 1;
            // one translate per animal site puts that site at the origin
            poly.origin_shifts[a.size][a.perimeter] += a.size;
        },
        budget);
    return poly;
}

ExactTail evaluate_tail(const TailPolynomial& poly, double p) {
    check_probability(p);
    ExactTail tail;
    tail.p = p;
    tail.n_max = poly.n_max;
    tail.c.assign(static_cast<std::size_t>(poly.n_max) + 1, 0.0);
    tail.c_star.assign(tail.c.size(), 0.0);
    tail.p_partial.assign(tail.c.size(), 0.0);

    const WeightTables w(p, poly.n_max, max_perimeter(poly.origin_shifts));
    for (int n = 1; n <= poly.n_max; ++n) {
        CompensatedSum star, shifted;
        for (const auto& [t, cnt] : poly.anchored[n]) {
            star.add(static_cast<double>(cnt) * w.weight(n, t));
        }
        for (const auto& [t, cnt] : poly.origin_shifts[n]) {
            shifted.add(static_cast<double>(cnt) * w.weight(n, t));
            if (poly.anchored[n].count(t) == 0 ||
                poly.anchored[n].at(t) * n != cnt) {
                tail.shift_counts_consistent = false;
            }
        }
        tail.c_star[n] = star.value();
        tail.c[n] = shifted.value();
        if (tail.c[n] > 0) {
            const double err =
                std::abs(tail.c[n] - n * tail.c_star[n]) / tail.c[n];
            tail.max_identity_rel_error =
                std::max(tail.max_identity_rel_error, err);
        }
    }
    CompensatedSum suffix;
    for (int n = poly.n_max; n >= 1; --n) {
        suffix.add(tail.c[n]);
        tail.p_partial[n] = suffix.value();
    }
    return tail;
}

ExactTail compute_exact_tail(double p, int n_max, int budget) {
    return evaluate_tail(tail_polynomial(n_max, budget), p);
}

double exact_cn(int n, double p, int budget) {
    if (n < 1) throw std::invalid_argument("exact_cn: n must be >= 1");
    return compute_exact_tail(p, n, budget).c[n];
}

namespace {

struct Offset {
    int dx, dy;
};

std::vector<Offset> to_offsets(const std::vector<Coords>& coords) {
    std::vector<Offset> out;
    out.reserve(coords.size());
    for (const Coords& c : coords) out.push_back({c[0], c[1]});
    return out;
}

// Occurrence positions of a pattern on the animal, in the anchored frame.
// Valid for cluster-determined patterns: the induced configuration
// (occupied = animal, everything else vacant) decides each occurrence.
void collect_occurrences(const std::vector<Offset>& boundary,
                         const std::vector<Offset>& cube,
                         const std::vector<std::uint8_t>& values, int r,
                         const std::vector<int>& stamped, int stamp,
                         int stride, int origin_index, int min_x, int max_x,
                         int min_y, int max_y, std::vector<Cell>& out) {
    out.clear();
    for (int a = min_x + 1; a + r - 1 <= max_x - 1; ++a) {
        for (int b = min_y + 1; b + r - 1 <= max_y - 1; ++b) {
            const int base = origin_index + a * stride + b;
            bool ok = true;
            for (const Offset& o : boundary) {
                if (stamped[base + o.dx * stride + o.dy] != stamp) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            for (std::size_t k = 0; k < cube.size(); ++k) {
                const bool occ =
                    stamped[base + cube[k].dx * stride + cube[k].dy] == stamp;
                if (occ != (values[k] == 1)) {
                    ok = false;
                    break;
                }
            }
            if (ok) out.push_back({a, b});
        }
    }
}

long count_on_grid(const std::vector<Cell>& occurrences, Cell shift,
                   int spacing) {
    long n = 0;
    for (const Cell& o : occurrences) {
        int mx = (o.first - shift.first - 1) % spacing;
        if (mx < 0) mx += spacing;
        if (mx != 0) continue;
        int my = (o.second - shift.second - 1) % spacing;
        if (my < 0) my += spacing;
        if (my == 0) ++n;
    }
    return n;
}

}  // namespace

std::map<int, JointPolynomial> joint_occurrence_polynomials(
    const std::vector<int>& sizes, const Pattern& p, const Pattern& p_prime,
    int budget) {
    if (sizes.empty()) {
        throw std::invalid_argument("joint polynomials: no sizes requested");
    }
    if (p.dim() != 2 || p_prime.dim() != 2) {
        throw std::invalid_argument("joint polynomials: exact oracle is d=2 only");
    }
    if (p.states() != 2 || p_prime.states() != 2) {
        throw std::invalid_argument("joint polynomials: exact oracle needs q=2");
    }
    if (p.r() != p_prime.r()) {
        throw std::invalid_argument("joint polynomials: patterns must share r");
    }
    if (!is_cluster_determined(p) || !is_cluster_determined(p_prime)) {
        throw std::invalid_argument(
            "joint polynomials: patterns must be cluster-determined");
    }
    const int n_max = *std::max_element(sizes.begin(), sizes.end());
    const int n_min = *std::min_element(sizes.begin(), sizes.end());
    if (n_min < 1) throw std::invalid_argument("joint polynomials: sizes >= 1");

    std::map<int, JointPolynomial> tables;
    for (int n : sizes) {
        tables[n].n = n;
    }

    const int r = p.r();
    const int spacing = r + 2;
    const CubeGeometry geom = cube_geometry(r, 2);
    const auto boundary = to_offsets(geom.boundary);
    const auto cube = to_offsets(geom.cube);

    // Stamped occupancy over the enumerator's coordinate range, with one
    // ring of slack so cube scans never leave the array.
    const int xs = -2, xe = n_max + 2;             // x in [xs, xe]
    const int ys = -n_max - 2, ye = n_max + 2;     // y in [ys, ye]
    const int stride = ye - ys + 1;
    std::vector<int> stamped(static_cast<std::size_t>(xe - xs + 1) * stride, 0);
    const int origin_index = (-xs) * stride + (-ys);
    int stamp = 0;

    std::vector<Cell> occ_p, occ_pp;

    enumerate_anchored_animals(
        n_max,
        [&](const AnimalView& a) {
            auto it = tables.find(a.size);
            if (it == tables.end()) return;
            ++stamp;
            int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
            for (int k = 0; k < a.size; ++k) {
                const Cell c = a.cells[k];
                stamped[origin_index + c.first * stride + c.second] = stamp;
                min_x = std::min(min_x, c.first);
                max_x = std::max(max_x, c.first);
                min_y = std::min(min_y, c.second);
                max_y = std::max(max_y, c.second);
            }
            collect_occurrences(boundary, cube, p.values(), r, stamped, stamp,
                                stride, origin_index, min_x, max_x, min_y,
                                max_y, occ_p);
            collect_occurrences(boundary, cube, p_prime.values(), r, stamped,
                                stamp, stride, origin_index, min_x, max_x,
                                min_y, max_y, occ_pp);
            JointPolynomial& table = it->second;
            for (int k = 0; k < a.size; ++k) {
                const Cell shift = a.cells[k];
                const int i = static_cast<int>(count_on_grid(occ_p, shift, spacing));
                const int j =
                    static_cast<int>(count_on_grid(occ_pp, shift, spacing));
                table.terms[{i, j}][a.perimeter] += 1;
            }
        },
        budget);
    return tables;
}

double JointCountTable::total() const {
    CompensatedSum sum;
    for (const auto& [key, value] : mass) sum.add(value);
    return sum.value();
}

JointCountTable evaluate_joint(const JointPolynomial& poly, double p) {
    check_probability(p);
    JointCountTable table;
    table.n = poly.n;
    table.p = p;
    int max_t = 0;
    for (const auto& [key, terms] : poly.terms) {
        if (!terms.empty()) max_t = std::max(max_t, terms.rbegin()->first);
    }
    const WeightTables w(p, poly.n, max_t);
    for (const auto& [key, terms] : poly.terms) {
        CompensatedSum sum;
        for (const auto& [t, cnt] : terms) {
            sum.add(static_cast<double>(cnt) * w.weight(poly.n, t));
        }
        table.mass[key] = sum.value();
    }
    return table;
}

JointCountTable exact_joint_counts(int n, double p, const Pattern& pat,
                                   const Pattern& pat_prime, int budget) {
    const auto polys = joint_occurrence_polynomials({n}, pat, pat_prime, budget);
    return evaluate_joint(polys.at(n), p);
}

SwapIdentityCheck verify_swap_identity(const JointCountTable& at_n,
                                       const JointCountTable& at_n_plus_1,
                                       const Pattern& pat,
                                       const Pattern& pat_prime) {
    if (at_n_plus_1.n != at_n.n + 1) {
        throw std::invalid_argument("swap identity: tables must be n and n+1");
    }
    if (at_n.p != at_n_plus_1.p) {
        throw std::invalid_argument("swap identity: tables disagree on p");
    }
    const int delta_c =
        cluster_contribution(pat_prime) - cluster_contribution(pat);
    if (delta_c != 1) {
        throw std::invalid_argument(
            "swap identity: requires c_{P'} - c_P = 1 for this form");
    }
    const double p = at_n.p;
    const std::vector<double> probs{1.0 - p, p};
    const double box_ratio = box_probability_exact(pat_prime, probs) /
                             box_probability_exact(pat, probs);

    SwapIdentityCheck check;
    for (const auto& [key, value] : at_n.mass) {
        const auto [i, j] = key;
        if (i < 1 || value <= 0.0) continue;
        const double rhs =
            static_cast<double>(i) / (j + 1) * box_ratio * value;
        auto it = at_n_plus_1.mass.find({i - 1, j + 1});
        const double lhs = (it == at_n_plus_1.mass.end()) ? 0.0 : it->second;
        const double err = std::abs(lhs - rhs) / rhs;
        check.max_rel_error = std::max(check.max_rel_error, err);
        ++check.buckets_checked;
    }
    return check;
}

SupermultiCheck verify_supermulti(const ExactTail& tail) {
    SupermultiCheck check;
    bool first = true;
    for (int n = 1; n < tail.n_max; ++n) {
        for (int m = 1; n + m <= tail.n_max; ++m) {
            const double lhs = tail.c[n + m] / (n + m);
            const double rhs = (tail.c[n] / n) * (tail.c[m] / m);
            if (rhs <= 0) continue;
            const double ratio = lhs / rhs;
            if (first || ratio < check.a_hat) {
                check.a_hat = ratio;
                check.n_at = n;
                check.m_at = m;
                first = false;
            }
        }
    }
    return check;
}

std::string exact_tail_to_csv(const ExactTail& tail) {
    CsvBuilder csv({"n", "c_n", "c_star_n", "p_n"});
    for (int n = 1; n <= tail.n_max; ++n) {
        csv.add_row({std::to_string(n), format_double(tail.c[n]),
                     format_double(tail.c_star[n]),
                     format_double(tail.p_partial[n])});
    }
    return csv.str();
}

std::string joint_table_to_csv(const JointCountTable& table) {
    CsvBuilder csv({"n", "i", "j", "probability"});
    for (const auto& [key, value] : table.mass) {
        csv.add_row({std::to_string(table.n), std::to_string(key.first),
                     std::to_string(key.second), format_double(value)});
    }
    return csv.str();
}

}  // namespace percolab
