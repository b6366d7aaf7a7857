#include "ubiq/bigindex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ubiq {

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

std::size_t BigUint::bit_length() const {
    if (limbs_.empty()) return 0;
    std::size_t bits = (limbs_.size() - 1) * 64;
    std::uint64_t top = limbs_.back();
    while (top) { ++bits; top >>= 1; }
    return bits;
}

int BigUint::compare(const BigUint& a, const BigUint& b) {
    if (a.limbs_.size() != b.limbs_.size())
        return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
}

BigUint& BigUint::operator+=(const BigUint& o) {
    if (limbs_.size() < o.limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
    unsigned __int128 carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        carry += limbs_[i];
        if (i < o.limbs_.size()) carry += o.limbs_[i];
        limbs_[i] = static_cast<std::uint64_t>(carry);
        carry >>= 64;
    }
    if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
    return *this;
}

BigUint& BigUint::operator-=(const BigUint& o) {
    if (compare(*this, o) < 0) throw std::underflow_error("BigUint: negative subtraction");
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        unsigned __int128 sub = (i < o.limbs_.size() ? o.limbs_[i] : 0);
        sub += static_cast<std::uint64_t>(borrow);
        if (limbs_[i] >= sub) {
            limbs_[i] -= static_cast<std::uint64_t>(sub);
            borrow = 0;
        } else {
            limbs_[i] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) +
                                                   limbs_[i] - sub);
            borrow = 1;
        }
    }
    trim();
    return *this;
}

BigUint& BigUint::add_small(std::uint64_t v) { return *this += BigUint(v); }
BigUint& BigUint::sub_small(std::uint64_t v) { return *this -= BigUint(v); }

BigUint& BigUint::mul_small(std::uint64_t v) {
    if (v == 0 || limbs_.empty()) { limbs_.clear(); return *this; }
    unsigned __int128 carry = 0;
    for (auto& limb : limbs_) {
        carry += static_cast<unsigned __int128>(limb) * v;
        limb = static_cast<std::uint64_t>(carry);
        carry >>= 64;
    }
    while (carry) {
        limbs_.push_back(static_cast<std::uint64_t>(carry));
        carry >>= 64;
    }
    return *this;
}

std::uint64_t BigUint::divmod_small(std::uint64_t v) {
    if (v == 0) throw std::domain_error("BigUint: division by zero");
    unsigned __int128 rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        const unsigned __int128 cur = (rem << 64) | limbs_[i];
        limbs_[i] = static_cast<std::uint64_t>(cur / v);
        rem = cur % v;
    }
    trim();
    return static_cast<std::uint64_t>(rem);
}

BigUint& BigUint::shl_bits(std::size_t bits) {
    if (limbs_.empty() || bits == 0) return *this;
    const std::size_t words = bits / 64, rem = bits % 64;
    limbs_.insert(limbs_.begin(), words, 0);
    if (rem) {
        std::uint64_t carry = 0;
        for (std::size_t i = words; i < limbs_.size(); ++i) {
            const std::uint64_t nxt = limbs_[i] >> (64 - rem);
            limbs_[i] = (limbs_[i] << rem) | carry;
            carry = nxt;
        }
        if (carry) limbs_.push_back(carry);
    }
    return *this;
}

BigUint& BigUint::shr_bits(std::size_t bits) {
    const std::size_t words = bits / 64, rem = bits % 64;
    if (words >= limbs_.size()) { limbs_.clear(); return *this; }
    limbs_.erase(limbs_.begin(), limbs_.begin() + static_cast<std::ptrdiff_t>(words));
    if (rem) {
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            limbs_[i] >>= rem;
            if (i + 1 < limbs_.size()) limbs_[i] |= limbs_[i + 1] << (64 - rem);
        }
    }
    trim();
    return *this;
}

BigUint& BigUint::mul_pow(std::uint64_t c, int e) {
    if (c == 2) return shl_bits(static_cast<std::size_t>(e));
    // batch factors into 64-bit chunks
    while (e > 0) {
        std::uint64_t f = 1;
        while (e > 0 && f <= ((~0ULL) / c)) { f *= c; --e; }
        mul_small(f);
    }
    return *this;
}

BigUint& BigUint::operator*=(const BigUint& o) {
    if (is_zero() || o.is_zero()) { limbs_.clear(); return *this; }
    std::vector<std::uint64_t> out(limbs_.size() + o.limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        unsigned __int128 carry = 0;
        for (std::size_t j = 0; j < o.limbs_.size(); ++j) {
            carry += static_cast<unsigned __int128>(limbs_[i]) * o.limbs_[j] + out[i + j];
            out[i + j] = static_cast<std::uint64_t>(carry);
            carry >>= 64;
        }
        std::size_t k = i + o.limbs_.size();
        while (carry) {
            carry += out[k];
            out[k] = static_cast<std::uint64_t>(carry);
            carry >>= 64;
            ++k;
        }
    }
    limbs_ = std::move(out);
    trim();
    return *this;
}

std::pair<BigUint, BigUint> BigUint::divmod(const BigUint& a, const BigUint& b) {
    if (b.is_zero()) throw std::domain_error("BigUint: division by zero");
    if (b.fits_u64()) {
        BigUint q = a;
        const std::uint64_t r = q.divmod_small(b.low64());
        return {std::move(q), BigUint(r)};
    }
    BigUint q, r;
    const std::size_t bits = a.bit_length();
    for (std::size_t i = bits; i-- > 0;) {
        r.shl_bits(1);
        const std::uint64_t bit = (a.limbs_[i / 64] >> (i % 64)) & 1ULL;
        if (bit) r.add_small(1);
        q.shl_bits(1);
        if (r >= b) {
            r -= b;
            q.add_small(1);
        }
    }
    return {std::move(q), std::move(r)};
}

double BigUint::to_double() const {
    double v = 0.0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * 0x1.0p64 + static_cast<double>(limbs_[i]);
    return v;
}

std::string BigUint::to_decimal() const {
    if (limbs_.empty()) return "0";
    BigUint tmp = *this;
    std::string out;
    while (!tmp.is_zero()) out.push_back(static_cast<char>('0' + tmp.divmod_small(10)));
    std::reverse(out.begin(), out.end());
    return out;
}

BigUint BigUint::from_decimal(const std::string& s) {
    BigUint v;
    for (char ch : s) {
        if (ch < '0' || ch > '9') throw std::invalid_argument("BigUint: bad decimal digit");
        v.mul_small(10);
        v.add_small(static_cast<std::uint64_t>(ch - '0'));
    }
    return v;
}

BigUint BigUint::pow(std::uint64_t base, int e) {
    BigUint v(1);
    v.mul_pow(base, e);
    return v;
}

}  // namespace ubiq
