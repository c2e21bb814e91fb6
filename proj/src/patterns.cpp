#include "percolab/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "percolab/textio.hpp"

namespace percolab {

namespace {

std::size_t offset_index(const Coords& offset, int r, int d) {
    std::size_t idx = 0;
    for (int i = 0; i < d; ++i) {
        idx = idx * static_cast<std::size_t>(r) +
              static_cast<std::size_t>(offset[i]);
    }
    return idx;
}

std::size_t pow_sz(int base, int exp) {
    std::size_t v = 1;
    for (int i = 0; i < exp; ++i) v *= static_cast<std::size_t>(base);
    return v;
}

}  // namespace

Pattern::Pattern(int r, int d, int q, std::vector<std::uint8_t> values)
    : r_(r), d_(d), q_(q), values_(std::move(values)) {
    if (r_ < 1) throw std::invalid_argument("Pattern: r must be >= 1");
    if (d_ < 2) throw std::invalid_argument("Pattern: d must be >= 2");
    if (q_ < 2) throw std::invalid_argument("Pattern: q must be >= 2");
    if (values_.size() != pow_sz(r_, d_)) {
        throw std::invalid_argument("Pattern: values must cover the cube");
    }
    for (std::uint8_t v : values_) {
        if (v >= q_) throw std::invalid_argument("Pattern: value out of range");
    }
}

std::uint8_t Pattern::value_at(const Coords& offset) const {
    for (int c : offset) {
        if (c < 0 || c >= r_) {
            throw std::out_of_range("Pattern::value_at: offset outside cube");
        }
    }
    return values_[offset_index(offset, r_, d_)];
}

Pattern Pattern::single_site_occupied(int d, int q) {
    return Pattern(1, d, q, {1});
}

Pattern Pattern::single_site_vacant(int d, int q) {
    return Pattern(1, d, q, {0});
}

Pattern Pattern::r3_centre_occupied(int d, int q) {
    std::vector<std::uint8_t> values(pow_sz(3, d), 0);
    Coords centre(d, 1);
    values[offset_index(centre, 3, d)] = 1;
    return Pattern(3, d, q, std::move(values));
}

Pattern Pattern::r3_corner_occupied(int d, int q) {
    std::vector<std::uint8_t> values(pow_sz(3, d), 0);
    values[0] = 1;  // corner at the cube origin, adjacent to the boundary
    return Pattern(3, d, q, std::move(values));
}

bool occurs_at(const Configuration& config, const Pattern& pattern,
               const Coords& x) {
    const Window& w = config.window();
    if (pattern.dim() != w.dim()) {
        throw std::invalid_argument("occurs_at: dimension mismatch");
    }
    const CubeGeometry geom = cube_geometry(pattern.r(), pattern.dim());
    Coords site(w.dim());
    for (std::size_t k = 0; k < geom.cube.size(); ++k) {
        for (int i = 0; i < w.dim(); ++i) site[i] = x[i] + geom.cube[k][i];
        if (!w.contains(site)) {
            throw std::out_of_range("occurs_at: cube extends outside window");
        }
        if (config.at_index(w.index_of(site)) != pattern.values()[k]) {
            return false;
        }
    }
    return true;
}

ClusterMask mask_from_sites(const Window& window,
                            const std::vector<Coords>& sites) {
    ClusterMask mask(window.site_count(), 0);
    for (const Coords& x : sites) mask[window.index_of(x)] = 1;
    return mask;
}

ClusterMask mask_from_label(const ClusterLabeling& labeling, std::int32_t id) {
    ClusterMask mask(labeling.cluster_of.size(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (labeling.cluster_of[i] == id) mask[i] = 1;
    }
    return mask;
}

bool occurs_on_cluster_at(const Configuration& config, const Pattern& pattern,
                          const Coords& x, const ClusterMask& cluster) {
    const Window& w = config.window();
    const CubeGeometry geom = cube_geometry(pattern.r(), pattern.dim());
    Coords site(w.dim());
    for (const Coords& b : geom.boundary) {
        for (int i = 0; i < w.dim(); ++i) site[i] = x[i] + b[i];
        if (!w.contains(site)) {
            throw std::out_of_range(
                "occurs_on_cluster_at: extended cube outside window");
        }
        if (!cluster[w.index_of(site)]) return false;
    }
    return occurs_at(config, pattern, x);
}

long count_occurrences(const Configuration& config, const Pattern& pattern,
                       const ClusterMask& cluster) {
    long n = 0;
    for (const Coords& x :
         grid_sites(config.window(), pattern.r(), GridFit::kExtendedCubeInside)) {
        if (occurs_on_cluster_at(config, pattern, x, cluster)) ++n;
    }
    return n;
}

std::unordered_map<std::int32_t, long> count_occurrences_by_cluster(
    const Configuration& config, const ClusterLabeling& labeling,
    const Pattern& pattern) {
    const Window& w = config.window();
    const CubeGeometry geom = cube_geometry(pattern.r(), pattern.dim());
    std::unordered_map<std::int32_t, long> counts;
    Coords site(w.dim());
    for (const Coords& x :
         grid_sites(w, pattern.r(), GridFit::kExtendedCubeInside)) {
        // The whole cube boundary must carry one cluster label.
        std::int32_t label = -1;
        bool on_one_cluster = true;
        for (const Coords& b : geom.boundary) {
            for (int i = 0; i < w.dim(); ++i) site[i] = x[i] + b[i];
            const std::int32_t l = labeling.cluster_of[w.index_of(site)];
            if (l < 0 || (label >= 0 && l != label)) {
                on_one_cluster = false;
                break;
            }
            label = l;
        }
        if (!on_one_cluster) continue;
        bool match = true;
        for (std::size_t k = 0; k < geom.cube.size(); ++k) {
            for (int i = 0; i < w.dim(); ++i) site[i] = x[i] + geom.cube[k][i];
            if (config.at_index(w.index_of(site)) != pattern.values()[k]) {
                match = false;
                break;
            }
        }
        if (match) counts[label] += 1;
    }
    return counts;
}

namespace {

// Sites of the extended cube reached from the boundary through occupied
// sites, where every boundary site counts as occupied and cube sites follow
// the pattern. Returned as flags over the pattern's cube offsets.
std::vector<std::uint8_t> boundary_connected_cube_sites(const Pattern& pattern) {
    const int r = pattern.r();
    const int d = pattern.dim();
    // Work on the extended cube [-1, r+1)^d with local linear indexing.
    const int side = r + 2;
    const std::size_t total = pow_sz(side, d);
    auto local_index = [&](const Coords& x) {
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i) {
            idx = idx * static_cast<std::size_t>(side) +
                  static_cast<std::size_t>(x[i] + 1);
        }
        return idx;
    };
    std::vector<std::uint8_t> occupied(total, 0);
    std::vector<std::uint8_t> in_cube(total, 0);
    std::vector<std::size_t> cube_value_index(total, 0);
    const CubeGeometry geom = cube_geometry(r, d);
    for (std::size_t k = 0; k < geom.cube.size(); ++k) {
        const std::size_t li = local_index(geom.cube[k]);
        in_cube[li] = 1;
        cube_value_index[li] = k;
        occupied[li] = pattern.values()[k] == 1;
    }
    std::deque<Coords> queue;
    std::vector<std::uint8_t> visited(total, 0);
    for (const Coords& b : geom.boundary) {
        occupied[local_index(b)] = 1;
        visited[local_index(b)] = 1;
        queue.push_back(b);
    }
    std::vector<std::uint8_t> connected(geom.cube.size(), 0);
    while (!queue.empty()) {
        Coords x = queue.front();
        queue.pop_front();
        for (int axis = 0; axis < d; ++axis) {
            for (int dir = -1; dir <= 1; dir += 2) {
                Coords y = x;
                y[axis] += dir;
                bool inside = true;
                for (int i = 0; i < d; ++i) {
                    if (y[i] < -1 || y[i] > r) {
                        inside = false;
                        break;
                    }
                }
                if (!inside) continue;
                const std::size_t li = local_index(y);
                if (visited[li] || !occupied[li]) continue;
                visited[li] = 1;
                if (in_cube[li]) connected[cube_value_index[li]] = 1;
                queue.push_back(y);
            }
        }
    }
    return connected;
}

}  // namespace

int cluster_contribution(const Pattern& pattern) {
    const auto connected = boundary_connected_cube_sites(pattern);
    int c = 0;
    for (std::uint8_t f : connected) c += f;
    return c;
}

bool is_cluster_determined(const Pattern& pattern) {
    const int r = pattern.r();
    const int d = pattern.dim();
    const CubeGeometry geom = cube_geometry(r, d);
    const auto connected = boundary_connected_cube_sites(pattern);

    auto find_cube_index = [&](const Coords& x) -> long {
        for (int i = 0; i < d; ++i) {
            if (x[i] < 0 || x[i] >= r) return -1;
        }
        return static_cast<long>(offset_index(x, r, d));
    };

    for (std::size_t k = 0; k < geom.cube.size(); ++k) {
        if (pattern.values()[k] == 1) {
            if (!connected[k]) return false;
            continue;
        }
        // Vacant site: must neighbour the cube boundary or a
        // boundary-connected occupied site.
        bool anchored = false;
        for (int axis = 0; axis < d && !anchored; ++axis) {
            for (int dir = -1; dir <= 1 && !anchored; dir += 2) {
                Coords y = geom.cube[k];
                y[axis] += dir;
                const long ci = find_cube_index(y);
                if (ci < 0) {
                    anchored = true;  // neighbour lies on the boundary shell
                } else if (pattern.values()[static_cast<std::size_t>(ci)] == 1 &&
                           connected[static_cast<std::size_t>(ci)]) {
                    anchored = true;
                }
            }
        }
        if (!anchored) return false;
    }
    return true;
}

double box_probability_exact(const Pattern& pattern,
                             const std::vector<double>& state_probs) {
    if (state_probs.size() != static_cast<std::size_t>(pattern.states())) {
        throw std::invalid_argument(
            "box_probability_exact: probability vector size mismatch");
    }
    const CubeGeometry geom = cube_geometry(pattern.r(), pattern.dim());
    double prob = 1.0;
    for (std::uint8_t v : pattern.values()) prob *= state_probs[v];
    for (std::size_t i = 0; i < geom.boundary.size(); ++i) {
        prob *= state_probs[1];
    }
    return prob;
}

double gamma_ratio(const Pattern& p, const Pattern& p_prime, double mu,
                   const std::vector<double>& state_probs) {
    if (p.r() != p_prime.r() || p.dim() != p_prime.dim() ||
        p.states() != p_prime.states()) {
        throw std::invalid_argument("gamma_ratio: pattern shape mismatch");
    }
    if (!(mu > 0.0) || mu > 1.0) {
        throw std::invalid_argument("gamma_ratio: mu must lie in (0, 1]");
    }
    const double box_p = box_probability_exact(p, state_probs);
    const double box_pp = box_probability_exact(p_prime, state_probs);
    if (box_pp <= 0.0) {
        throw std::invalid_argument("gamma_ratio: P(box P') must be positive");
    }
    const int c_p = cluster_contribution(p);
    const int c_pp = cluster_contribution(p_prime);
    return std::pow(mu, c_pp) * box_p / (std::pow(mu, c_p) * box_pp);
}

PatternPairContext make_pair_context(const Pattern& p, const Pattern& p_prime,
                                     double mu,
                                     const std::vector<double>& state_probs) {
    PatternPairContext ctx{p, p_prime};
    ctx.c_p = cluster_contribution(p);
    ctx.c_p_prime = cluster_contribution(p_prime);
    ctx.delta_c = ctx.c_p_prime - ctx.c_p;
    ctx.box_p = box_probability_exact(p, state_probs);
    ctx.box_p_prime = box_probability_exact(p_prime, state_probs);
    ctx.gamma = gamma_ratio(p, p_prime, mu, state_probs);
    return ctx;
}

std::string pattern_to_text(const Pattern& pattern) {
    const int r = pattern.r();
    const int d = pattern.dim();
    std::ostringstream out;
    const std::size_t block = pow_sz(r, 2);  // trailing two axes form a slice
    const std::size_t slices = pattern.values().size() / block;
    for (std::size_t s = 0; s < slices; ++s) {
        if (s) out << '\n';
        for (int row = 0; row < r; ++row) {
            for (int col = 0; col < r; ++col) {
                const std::size_t idx =
                    s * block + static_cast<std::size_t>(row) * r + col;
                const int v = pattern.values()[idx];
                if (v > 9) {
                    throw std::invalid_argument(
                        "pattern_to_text: states above 9 not representable");
                }
                out << v;
            }
            out << '\n';
        }
    }
    (void)d;
    return out.str();
}

Pattern pattern_from_text(const std::string& text, int q) {
    std::istringstream in(text);
    std::string raw;
    std::vector<std::vector<std::string>> blocks;
    std::vector<std::string> current;
    while (std::getline(in, raw)) {
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line;
        for (char c : raw) {
            if (!std::isspace(static_cast<unsigned char>(c))) line += c;
        }
        if (line.empty()) {
            if (!current.empty()) {
                blocks.push_back(current);
                current.clear();
            }
            continue;
        }
        current.push_back(line);
    }
    if (!current.empty()) blocks.push_back(current);
    if (blocks.empty()) throw std::runtime_error("pattern: no grid lines");

    const int r = static_cast<int>(blocks[0].size());
    const int d = blocks.size() == 1 ? 2 : 3;
    if (d == 3 && static_cast<int>(blocks.size()) != r) {
        throw std::runtime_error("pattern: expected r slice blocks for d=3");
    }
    std::vector<std::uint8_t> values;
    for (const auto& block : blocks) {
        if (static_cast<int>(block.size()) != r) {
            throw std::runtime_error("pattern: ragged slice block");
        }
        for (const std::string& line : block) {
            if (static_cast<int>(line.size()) != r) {
                throw std::runtime_error("pattern: row length != r");
            }
            for (char c : line) {
                if (c < '0' || c > '9') {
                    throw std::runtime_error("pattern: non-digit state");
                }
                values.push_back(static_cast<std::uint8_t>(c - '0'));
            }
        }
    }
    return Pattern(r, d, q, std::move(values));
}

Pattern read_pattern_file(const std::string& path, int q) {
    return pattern_from_text(read_text_file(path), q);
}

void write_pattern_file(const Pattern& pattern, const std::string& path) {
    atomic_write_file(path, pattern_to_text(pattern));
}

}  // namespace percolab
