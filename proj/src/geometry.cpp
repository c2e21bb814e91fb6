#include "percolab/geometry.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace percolab {

int compare_lex(const Coords& a, const Coords& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

Window::Window(int d, Coords lo, Coords hi, int q)
    : d_(d), q_(q), lo_(std::move(lo)), hi_(std::move(hi)) {
    if (d_ < 2) throw std::invalid_argument("Window: dimension must be >= 2");
    if (q_ < 2 || q_ > 256) {
        throw std::invalid_argument("Window: q must be in [2, 256]");
    }
    if (lo_.size() != static_cast<std::size_t>(d_) ||
        hi_.size() != static_cast<std::size_t>(d_)) {
        throw std::invalid_argument("Window: bounds must have d entries");
    }
    std::size_t count = 1;
    for (int i = 0; i < d_; ++i) {
        if (hi_[i] <= lo_[i]) {
            throw std::invalid_argument("Window: hi must exceed lo on axis " +
                                        std::to_string(i));
        }
        const unsigned long long len =
            static_cast<unsigned long long>(hi_[i]) - lo_[i];
        if (count > std::numeric_limits<std::size_t>::max() / len) {
            throw std::invalid_argument("Window: site count overflows");
        }
        count *= len;
    }
    count_ = count;
    strides_.assign(d_, 1);
    for (int i = d_ - 2; i >= 0; --i) {
        strides_[i] = strides_[i + 1] * static_cast<std::size_t>(extent(i + 1));
    }
}

Window Window::centered_box(int d, int half_width, int q) {
    if (half_width < 0) {
        throw std::invalid_argument("Window::centered_box: negative half width");
    }
    Coords lo(d, -half_width), hi(d, half_width + 1);
    return Window(d, std::move(lo), std::move(hi), q);
}

Window Window::sized(Coords size, int q) {
    Coords lo(size.size(), 0);
    return Window(static_cast<int>(size.size()), std::move(lo), std::move(size),
                  q);
}

bool Window::contains(const Coords& x) const {
    if (x.size() != static_cast<std::size_t>(d_)) return false;
    for (int i = 0; i < d_; ++i) {
        if (x[i] < lo_[i] || x[i] >= hi_[i]) return false;
    }
    return true;
}

bool Window::on_border(const Coords& x) const {
    for (int i = 0; i < d_; ++i) {
        if (x[i] == lo_[i] || x[i] == hi_[i] - 1) return true;
    }
    return false;
}

std::size_t Window::index_of(const Coords& x) const {
    if (!contains(x)) {
        throw std::out_of_range("Window::index_of: site outside window");
    }
    std::size_t idx = 0;
    for (int i = 0; i < d_; ++i) {
        idx += static_cast<std::size_t>(x[i] - lo_[i]) * strides_[i];
    }
    return idx;
}

Coords Window::coords_of(std::size_t idx) const {
    if (idx >= count_) {
        throw std::out_of_range("Window::coords_of: index outside window");
    }
    Coords x(d_);
    for (int i = 0; i < d_; ++i) {
        x[i] = lo_[i] + static_cast<int>(idx / strides_[i]);
        idx %= strides_[i];
    }
    return x;
}

bool Window::operator==(const Window& other) const {
    return d_ == other.d_ && q_ == other.q_ && lo_ == other.lo_ &&
           hi_ == other.hi_;
}

namespace {

void collect_box(int d, int lo, int hi, std::vector<Coords>& out) {
    // All x with lo <= x_i < hi, in lexicographic order.
    Coords x(d, lo);
    for (;;) {
        out.push_back(x);
        int axis = d - 1;
        while (axis >= 0) {
            if (++x[axis] < hi) break;
            x[axis] = lo;
            --axis;
        }
        if (axis < 0) break;
    }
}

std::vector<Coords> shell_difference(int d, int inner_lo, int inner_hi,
                                     int outer_lo, int outer_hi) {
    std::vector<Coords> out;
    std::vector<Coords> outer;
    collect_box(d, outer_lo, outer_hi, outer);
    for (const Coords& x : outer) {
        bool inside = true;
        for (int i = 0; i < d; ++i) {
            if (x[i] < inner_lo || x[i] >= inner_hi) {
                inside = false;
                break;
            }
        }
        if (!inside) out.push_back(x);
    }
    return out;
}

}  // namespace

CubeGeometry cube_geometry(int r, int d) {
    if (r < 1) throw std::invalid_argument("cube_geometry: r must be >= 1");
    if (d < 2) throw std::invalid_argument("cube_geometry: d must be >= 2");
    CubeGeometry g;
    g.r = r;
    g.d = d;
    collect_box(d, 0, r, g.cube);
    collect_box(d, -1, r + 1, g.extended);
    g.boundary = shell_difference(d, 0, r, -1, r + 1);
    g.extended_boundary = shell_difference(d, -1, r + 1, -2, r + 2);
    return g;
}

bool on_grid(const Coords& x, int r) {
    const int spacing = r + 2;
    for (int xi : x) {
        int m = (xi - 1) % spacing;
        if (m < 0) m += spacing;
        if (m != 0) return false;
    }
    return true;
}

std::vector<Coords> grid_sites(const Window& window, int r, GridFit fit) {
    if (r < 1) throw std::invalid_argument("grid_sites: r must be >= 1");
    const int d = window.dim();
    const int spacing = r + 2;
    // Placement x needs [x + pad_lo, x + r - 1 + pad_hi] inside the window.
    const int pad = (fit == GridFit::kExtendedCubeInside) ? 1 : 0;
    std::vector<std::vector<int>> axis_values(d);
    for (int i = 0; i < d; ++i) {
        const int min_x = window.lo()[i] + pad;
        const int max_x = window.hi()[i] - r - pad;  // inclusive
        // Smallest value >= min_x congruent to 1 mod spacing.
        int m = (min_x - 1) % spacing;
        if (m < 0) m += spacing;
        int first = (m == 0) ? min_x : min_x + (spacing - m);
        for (int v = first; v <= max_x; v += spacing) {
            axis_values[i].push_back(v);
        }
        if (axis_values[i].empty()) return {};
    }
    std::vector<Coords> out;
    Coords idx(d, 0);
    for (;;) {
        Coords x(d);
        for (int i = 0; i < d; ++i) x[i] = axis_values[i][idx[i]];
        out.push_back(std::move(x));
        int axis = d - 1;
        while (axis >= 0) {
            if (++idx[axis] < static_cast<int>(axis_values[axis].size())) break;
            idx[axis] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    return out;
}

}  // namespace percolab
