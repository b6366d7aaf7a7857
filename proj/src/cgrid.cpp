#include "ubiq/cgrid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ubiq/errors.hpp"

namespace ubiq {

GridGeometry::GridGeometry(int base, int dim) : c(base), d(dim) {
    if (c < 2) throw std::invalid_argument("GridGeometry: base must be >= 2");
    if (d < 1) throw std::invalid_argument("GridGeometry: dimension must be >= 1");
}

int GridGeometry::max_generation() const {
    const std::uint64_t cap = 1ULL << 60;
    std::uint64_t p = 1;
    int j = 0;
    while (p <= cap / static_cast<std::uint64_t>(c)) {
        p *= static_cast<std::uint64_t>(c);
        ++j;
    }
    return j;
}

double CAdicBox::side() const { return std::pow(static_cast<double>(c), -j); }

double CAdicBox::lower(int i) const {
    return static_cast<double>(k[static_cast<std::size_t>(i)]) * side();
}

std::uint64_t pow_int(int c, int j) {
    if (j < 0) throw std::invalid_argument("pow_int: negative generation");
    const std::uint64_t cap = 1ULL << 62;
    std::uint64_t p = 1;
    for (int i = 0; i < j; ++i) {
        if (p > cap / static_cast<std::uint64_t>(c))
            throw resolution_error("pow_int: c^" + std::to_string(j) + " exceeds index range");
        p *= static_cast<std::uint64_t>(c);
    }
    return p;
}

std::int64_t floor_scaled(double x, int c, int j, bool* is_integer) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("floor_scaled: x outside [0,1]");
    const std::uint64_t scale = pow_int(c, j);
    if (x == 0.0) {
        if (is_integer) *is_integer = true;
        return 0;
    }
    int exp = 0;
    const double f = std::frexp(x, &exp);  // x = f * 2^exp, f in [0.5,1)
    const auto mant = static_cast<std::uint64_t>(std::ldexp(f, 53));  // exact
    // x * c^j = mant * scale * 2^(exp-53), with exp <= 1.
    unsigned __int128 prod = static_cast<unsigned __int128>(mant) * scale;
    const int shift = 53 - exp;
    if (shift <= 0) {  // x == 1 exactly
        if (is_integer) *is_integer = true;
        return static_cast<std::int64_t>(scale);
    }
    if (shift >= 128) {
        if (is_integer) *is_integer = (prod == 0);
        return 0;
    }
    const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << shift) - 1;
    if (is_integer) *is_integer = (prod & mask) == 0;
    return static_cast<std::int64_t>(prod >> shift);
}

std::int64_t ceil_scaled(double x, int c, int j) {
    bool exact = false;
    const std::int64_t f = floor_scaled(x, c, j, &exact);
    return exact ? f : f + 1;
}

CAdicBox locate(std::span<const double> x, int j, const GridGeometry& geom) {
    if (static_cast<int>(x.size()) != geom.d)
        throw std::invalid_argument("locate: point dimension mismatch");
    if (j < 0 || j > geom.max_generation())
        throw resolution_error("locate: generation beyond depth cap");
    CAdicBox b;
    b.c = geom.c;
    b.j = j;
    b.k.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= 0.0) || x[i] >= 1.0)
            throw std::domain_error("locate: coordinate outside [0,1)");
        b.k[i] = floor_scaled(x[i], geom.c, j);
    }
    return b;
}

std::vector<CAdicBox> neighbors(const CAdicBox& b) {
    const std::int64_t n = static_cast<std::int64_t>(pow_int(b.c, b.j));
    const int d = b.dim();
    std::vector<CAdicBox> out;
    std::vector<int> offs(static_cast<std::size_t>(d), -1);
    for (;;) {
        CAdicBox nb = b;
        bool ok = true;
        for (int i = 0; i < d; ++i) {
            nb.k[static_cast<std::size_t>(i)] += offs[static_cast<std::size_t>(i)];
            const std::int64_t ki = nb.k[static_cast<std::size_t>(i)];
            if (ki < 0 || ki >= n) { ok = false; break; }
        }
        if (ok) out.push_back(std::move(nb));
        int i = 0;
        for (; i < d; ++i) {
            if (offs[static_cast<std::size_t>(i)] < 1) { ++offs[static_cast<std::size_t>(i)]; break; }
            offs[static_cast<std::size_t>(i)] = -1;
        }
        if (i == d) break;
    }
    return out;
}

std::vector<CAdicBox> children(const CAdicBox& b) {
    const int d = b.dim();
    std::vector<CAdicBox> out;
    std::vector<int> digit(static_cast<std::size_t>(d), 0);
    for (;;) {
        CAdicBox ch;
        ch.c = b.c;
        ch.j = b.j + 1;
        ch.k.resize(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            ch.k[static_cast<std::size_t>(i)] =
                b.k[static_cast<std::size_t>(i)] * b.c + digit[static_cast<std::size_t>(i)];
        out.push_back(std::move(ch));
        int i = 0;
        for (; i < d; ++i) {
            if (digit[static_cast<std::size_t>(i)] < b.c - 1) { ++digit[static_cast<std::size_t>(i)]; break; }
            digit[static_cast<std::size_t>(i)] = 0;
        }
        if (i == d) break;
    }
    return out;
}

CAdicBox parent(const CAdicBox& b) {
    if (b.j == 0) throw std::invalid_argument("parent: root box has no parent");
    CAdicBox p;
    p.c = b.c;
    p.j = b.j - 1;
    p.k.resize(b.k.size());
    for (std::size_t i = 0; i < b.k.size(); ++i) p.k[i] = b.k[i] / b.c;
    return p;
}

bool contains(const CAdicBox& b, std::span<const double> x) {
    if (static_cast<int>(x.size()) != b.dim()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= 0.0) || x[i] >= 1.0) return false;
        if (floor_scaled(x[i], b.c, b.j) != b.k[i]) return false;
    }
    return true;
}

IndexRange cover_range(double center, double r, int c, int j) {
    const std::int64_t n = static_cast<std::int64_t>(pow_int(c, j));
    IndexRange range;
    const double lo = center - r;
    const double hi = center + r;
    if (lo >= 1.0 || hi < 0.0) return range;  // empty
    // Box [k c^-j,(k+1)c^-j) meets the closed ball iff (k+1)c^-j > lo and
    // k c^-j <= hi.
    range.lo = lo <= 0.0 ? 0 : floor_scaled(lo, c, j);
    if (range.lo >= n) return IndexRange{};
    range.hi = hi >= 1.0 ? n - 1 : floor_scaled(hi, c, j);
    if (range.hi >= n) range.hi = n - 1;
    return range;
}

std::vector<CAdicBox> ball_cover_boxes(std::span<const double> center, double r, int j,
                                       const GridGeometry& geom) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_cover_boxes: radius must be positive");
    if (j < 0 || j > geom.max_generation())
        throw resolution_error("ball_cover_boxes: generation beyond depth cap");
    if (static_cast<int>(center.size()) != geom.d)
        throw std::invalid_argument("ball_cover_boxes: point dimension mismatch");
    if (std::pow(static_cast<double>(geom.c), -j) > 2.0 * r)
        throw std::invalid_argument("ball_cover_boxes: boxes coarser than the ball");

    std::vector<IndexRange> ranges(center.size());
    std::size_t total = 1;
    for (std::size_t i = 0; i < center.size(); ++i) {
        ranges[i] = cover_range(center[i], r, geom.c, j);
        if (ranges[i].empty()) return {};
        const auto len = static_cast<std::size_t>(ranges[i].hi - ranges[i].lo + 1);
        if (total > (1u << 26) / len)
            throw resource_error("ball_cover_boxes: cover exceeds enumeration budget");
        total *= len;
    }
    std::vector<CAdicBox> out;
    out.reserve(total);
    std::vector<std::int64_t> k(center.size());
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = ranges[i].lo;
    for (;;) {
        CAdicBox b;
        b.c = geom.c;
        b.j = j;
        b.k = k;
        out.push_back(std::move(b));
        std::size_t i = 0;
        for (; i < k.size(); ++i) {
            if (k[i] < ranges[i].hi) { ++k[i]; break; }
            k[i] = ranges[i].lo;
        }
        if (i == k.size()) break;
    }
    return out;
}

}  // namespace ubiq
