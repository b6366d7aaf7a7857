#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ubiq {

// Arbitrary-precision unsigned integer, little-endian 64-bit limbs. Supports
// exactly the arithmetic the deep-grid geometry needs: grid indices at
// generations far past the 64-bit cap, and fixed-point digit expansions.
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t v) { if (v) limbs_.push_back(v); }  // NOLINT(google-explicit-constructor)

    bool is_zero() const { return limbs_.empty(); }
    std::size_t bit_length() const;

    static int compare(const BigUint& a, const BigUint& b);
    bool operator==(const BigUint& o) const { return limbs_ == o.limbs_; }
    bool operator<(const BigUint& o) const { return compare(*this, o) < 0; }
    bool operator<=(const BigUint& o) const { return compare(*this, o) <= 0; }
    bool operator>(const BigUint& o) const { return compare(*this, o) > 0; }
    bool operator>=(const BigUint& o) const { return compare(*this, o) >= 0; }

    BigUint& operator+=(const BigUint& o);
    BigUint& operator-=(const BigUint& o);  // requires *this >= o
    friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
    friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }

    BigUint& add_small(std::uint64_t v);
    BigUint& sub_small(std::uint64_t v);  // requires *this >= v
    BigUint& mul_small(std::uint64_t v);
    // Divides in place, returns the remainder.
    std::uint64_t divmod_small(std::uint64_t v);

    BigUint& shl_bits(std::size_t bits);
    BigUint& shr_bits(std::size_t bits);

    // *this *= c^e via repeated limb multiplication.
    BigUint& mul_pow(std::uint64_t c, int e);

    // Binary long division: returns {quotient, remainder}.
    static std::pair<BigUint, BigUint> divmod(const BigUint& a, const BigUint& b);

    BigUint& operator*=(const BigUint& o);
    friend BigUint operator*(const BigUint& a, const BigUint& b) {
        BigUint r = a;
        return r *= b;
    }

    // Exact double conversion of the top bits (used only for diagnostics).
    double to_double() const;
    std::uint64_t low64() const { return limbs_.empty() ? 0 : limbs_[0]; }
    bool fits_u64() const { return limbs_.size() <= 1; }

    std::string to_decimal() const;
    static BigUint from_decimal(const std::string& s);
    static BigUint pow(std::uint64_t base, int e);

private:
    void trim();
    std::vector<std::uint64_t> limbs_;
};

}  // namespace ubiq
