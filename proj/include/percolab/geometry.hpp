#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace percolab {

/// Site coordinates in Z^d. Lexicographic order (axis 0 major) is the
/// canonical site order throughout; "left-endpoint" always means the
/// lexicographic minimum.
using Coords = std::vector<int>;

int compare_lex(const Coords& a, const Coords& b);

/// Finite rectangular window of Z^d with q states per site. Bounds are
/// inclusive-exclusive per axis. Sites outside the window are vacant
/// (state 0) by convention everywhere in this library.
class Window {
public:
    Window(int d, Coords lo, Coords hi, int q);

    /// [-half, half]^d, q states.
    static Window centered_box(int d, int half_width, int q);
    /// [0, size[i]) per axis.
    static Window sized(Coords size, int q);

    int dim() const { return d_; }
    int states() const { return q_; }
    const Coords& lo() const { return lo_; }
    const Coords& hi() const { return hi_; }
    long extent(int axis) const { return hi_[axis] - lo_[axis]; }
    std::size_t site_count() const { return count_; }
    const std::vector<std::size_t>& strides() const { return strides_; }

    bool contains(const Coords& x) const;
    bool on_border(const Coords& x) const;

    /// Linear index of x; linear order equals lexicographic order.
    std::size_t index_of(const Coords& x) const;
    Coords coords_of(std::size_t idx) const;

    bool operator==(const Window& other) const;

private:
    int d_;
    int q_;
    Coords lo_, hi_;
    std::vector<std::size_t> strides_;
    std::size_t count_;
};

/// Offset geometry of the pattern cube: Q is the cube of diameter r at the
/// origin, the extended cube adds one unit in all directions, and the two
/// boundary shells are the set differences of consecutive extensions.
struct CubeGeometry {
    int r = 0;
    int d = 0;
    std::vector<Coords> cube;               // |Q| = r^d
    std::vector<Coords> extended;           // (r+2)^d
    std::vector<Coords> boundary;           // (r+2)^d - r^d
    std::vector<Coords> extended_boundary;  // (r+4)^d - (r+2)^d
};

CubeGeometry cube_geometry(int r, int d);

/// Which placements of the counting grid to return for a window.
enum class GridFit {
    kExtendedCubeInside,  // extended cube fits in the window (counting mode)
    kCubeInside,          // only the cube itself must fit (larger set)
};

/// Sites of the counting grid (r+2)Z^d + (1,...,1) whose cube (or extended
/// cube, per `fit`) lies inside the window. Grid spacing r+2 makes distinct
/// extended cubes disjoint and keeps the origin out of every placed cube.
std::vector<Coords> grid_sites(const Window& window, int r,
                               GridFit fit = GridFit::kExtendedCubeInside);

bool on_grid(const Coords& x, int r);

}  // namespace percolab
