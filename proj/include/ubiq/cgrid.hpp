#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ubiq {

// Base-c grid on [0,1)^d under the supremum norm. Boxes are half-open
// products [k_i c^-j, (k_i+1) c^-j); a box of generation j has diameter c^-j.
struct GridGeometry {
    int c = 2;
    int d = 1;

    GridGeometry() = default;
    GridGeometry(int base, int dim);

    // Hard depth cap: largest j with c^j <= 2^60 (60 for c=2, 60/log2(c) scaled).
    int max_generation() const;
};

struct CAdicBox {
    int c = 2;
    int j = 0;
    std::vector<std::int64_t> k;  // one index per coordinate, 0 <= k_i < c^j

    int dim() const { return static_cast<int>(k.size()); }
    double side() const;
    // Lower corner coordinate i (double approximation, exact for c=2).
    double lower(int i) const;
    bool operator==(const CAdicBox& o) const { return c == o.c && j == o.j && k == o.k; }
};

// c^j as a 64-bit integer; throws resolution_error past the depth cap.
std::uint64_t pow_int(int c, int j);

// Exact floor(x * c^j) for x in [0,1]; *is_integer reports whether x*c^j is
// an exact integer. Works on the exact binary value of the double x.
std::int64_t floor_scaled(double x, int c, int j, bool* is_integer = nullptr);
std::int64_t ceil_scaled(double x, int c, int j);

// The unique generation-j box containing x. Coordinates must lie in [0,1);
// values with a coordinate exactly 1 are rejected.
CAdicBox locate(std::span<const double> x, int j, const GridGeometry& geom);

// All boxes of the same generation with ||k'-k||_inf <= 1 (includes the box
// itself; boundary boxes return fewer).
std::vector<CAdicBox> neighbors(const CAdicBox& b);

// The c^d children of b.
std::vector<CAdicBox> children(const CAdicBox& b);
CAdicBox parent(const CAdicBox& b);

bool contains(const CAdicBox& b, std::span<const double> x);

// Minimal set of generation-j boxes covering B(center, r) ∩ [0,1)^d, where
// B is the closed sup-norm ball. Requires c^-j <= 2r.
std::vector<CAdicBox> ball_cover_boxes(std::span<const double> center, double r, int j,
                                       const GridGeometry& geom);

// Per-coordinate index range [lo, hi] of generation-j boxes meeting the
// closed ball (used by ball_cover_boxes and by the box-counting machinery).
struct IndexRange {
    std::int64_t lo = 0;
    std::int64_t hi = -1;  // empty when hi < lo
    bool empty() const { return hi < lo; }
};
IndexRange cover_range(double center, double r, int c, int j);

}  // namespace ubiq
