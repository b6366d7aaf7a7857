#include "ubiq/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ubiq/bigindex.hpp"
#include "ubiq/errors.hpp"
#include "ubiq/rng.hpp"

namespace ubiq {

void PointScaleSystem::validate() const {
    if (d < 1) throw std::invalid_argument("PointScaleSystem: dimension must be >= 1");
    if (xs.size() != lambdas.size() * static_cast<std::size_t>(d))
        throw std::invalid_argument("PointScaleSystem: coordinate array size mismatch");
    for (std::size_t n = 0; n < lambdas.size(); ++n) {
        if (!(lambdas[n] > 0.0)) throw std::invalid_argument("PointScaleSystem: scales must be > 0");
        if (n > 0 && lambdas[n] > lambdas[n - 1])
            throw std::invalid_argument("PointScaleSystem: scales must be non-increasing");
    }
    for (double x : xs)
        if (!(x >= 0.0 && x <= 1.0))
            throw std::invalid_argument("PointScaleSystem: points must lie in [0,1]^d");
}

int bucket_index(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("bucket_index: lambda must be > 0");
    int e = 0;
    const double f = std::frexp(lambda, &e);  // lambda = f 2^e, f in [0.5,1)
    return f == 0.5 ? 1 - e : -e;
}

ScaleBuckets bucket(const PointScaleSystem& sys) {
    ScaleBuckets b;
    for (std::size_t n = 0; n < sys.size(); ++n)
        b.T[bucket_index(sys.lambdas[n])].push_back(static_cast<std::uint32_t>(n));
    return b;
}

PointScaleSystem gen_badic(int b, int d, int j_max, std::size_t budget) {
    if (b < 2 || d < 1 || j_max < 1) throw std::invalid_argument("gen_badic: bad parameters");
    std::size_t total = 0;
    for (int j = 1; j <= j_max; ++j) {
        std::size_t cells = 1;
        for (int i = 0; i < j * d; ++i) {
            if (cells > budget / static_cast<std::size_t>(b))
                throw resource_error("gen_badic: budget exceeded");
            cells *= static_cast<std::size_t>(b);
        }
        total += cells;
        if (total > budget) throw resource_error("gen_badic: budget exceeded");
    }

    PointScaleSystem sys;
    sys.family = "badic";
    sys.d = d;
    sys.params = {{"b", static_cast<double>(b)}, {"j_max", static_cast<double>(j_max)}};
    sys.xs.reserve(total * static_cast<std::size_t>(d));
    sys.lambdas.reserve(total);
    for (int j = 1; j <= j_max; ++j) {
        const std::size_t n = [&] {
            std::size_t v = 1;
            for (int t = 0; t < j; ++t) v *= static_cast<std::size_t>(b);
            return v;
        }();
        const double scale = std::pow(static_cast<double>(b), -j);
        const double lambda = 2.0 * scale;
        std::vector<std::size_t> k(static_cast<std::size_t>(d), 0);
        for (;;) {
            for (int i = 0; i < d; ++i)
                sys.xs.push_back(static_cast<double>(k[static_cast<std::size_t>(i)]) * scale);
            sys.lambdas.push_back(lambda);
            int i = 0;
            for (; i < d; ++i) {
                if (k[static_cast<std::size_t>(i)] + 1 < n) { ++k[static_cast<std::size_t>(i)]; break; }
                k[static_cast<std::size_t>(i)] = 0;
            }
            if (i == d) break;
        }
    }
    sys.validate();
    return sys;
}

PointScaleSystem gen_rationals(std::uint64_t q_max, int d, bool irreducible_only, bool hurwitz,
                               std::size_t budget) {
    if (q_max < 1 || d < 1) throw std::invalid_argument("gen_rationals: bad parameters");
    if (hurwitz && d != 1) throw std::invalid_argument("gen_rationals: hurwitz radii are d=1 only");

    PointScaleSystem sys;
    sys.family = "rationals";
    sys.d = d;
    sys.params = {{"q_max", static_cast<double>(q_max)},
                  {"irreducible_only", irreducible_only ? 1.0 : 0.0},
                  {"hurwitz", hurwitz ? 1.0 : 0.0}};
    const double expo = 1.0 + 1.0 / d;
    std::size_t total = 0;
    for (std::uint64_t q = 1; q <= q_max; ++q) {
        const double lambda = hurwitz ? 2.0 / (std::sqrt(5.0) * static_cast<double>(q) * static_cast<double>(q))
                                      : 2.0 * std::pow(static_cast<double>(q), -expo);
        std::vector<std::uint64_t> p(static_cast<std::size_t>(d), 0);
        for (;;) {
            bool keep = true;
            if (irreducible_only) {
                keep = false;
                for (int i = 0; i < d; ++i)
                    if (std::gcd(p[static_cast<std::size_t>(i)], q) == 1) { keep = true; break; }
            }
            if (keep) {
                for (int i = 0; i < d; ++i)
                    sys.xs.push_back(static_cast<double>(p[static_cast<std::size_t>(i)]) /
                                     static_cast<double>(q));
                sys.lambdas.push_back(lambda);
                if (++total > budget) throw resource_error("gen_rationals: budget exceeded");
            }
            int i = 0;
            for (; i < d; ++i) {
                if (p[static_cast<std::size_t>(i)] < q) { ++p[static_cast<std::size_t>(i)]; break; }
                p[static_cast<std::size_t>(i)] = 0;
            }
            if (i == d) break;
        }
    }
    sys.validate();
    return sys;
}

bool AlphaDescriptor::is_rational() const { return kind == Kind::rational; }

AlphaDescriptor AlphaDescriptor::named_constant(const std::string& name) {
    if (name == "sqrt2") return periodic({1}, {2});
    if (name == "golden") return periodic({1}, {1});
    throw std::invalid_argument("AlphaDescriptor: unknown named constant " + name);
}

AlphaDescriptor AlphaDescriptor::periodic(std::vector<std::uint64_t> initial,
                                          std::vector<std::uint64_t> period) {
    if (period.empty()) throw std::invalid_argument("AlphaDescriptor: empty period is rational");
    for (std::size_t i = 0; i < initial.size(); ++i)
        if (i > 0 && initial[i] == 0) throw std::invalid_argument("AlphaDescriptor: zero coefficient");
    for (std::uint64_t a : period)
        if (a == 0) throw std::invalid_argument("AlphaDescriptor: zero coefficient");
    AlphaDescriptor d;
    d.kind = Kind::periodic_cf;
    d.cf_initial = std::move(initial);
    d.cf_period = std::move(period);
    return d;
}

AlphaDescriptor AlphaDescriptor::from_literal(std::string decimal) {
    AlphaDescriptor d;
    d.kind = Kind::literal;
    d.literal = std::move(decimal);
    return d;
}

AlphaDescriptor AlphaDescriptor::rational(std::uint64_t p, std::uint64_t q) {
    AlphaDescriptor d;
    d.kind = Kind::rational;
    d.num = p;
    d.den = q;
    return d;
}

AlphaDescriptor AlphaDescriptor::liouville(int blowups) {
    if (blowups < 1) throw std::invalid_argument("AlphaDescriptor: need >= 1 blowup");
    AlphaDescriptor d;
    d.kind = Kind::liouville;
    d.liouville_blowups = blowups;
    return d;
}

namespace {

// CF extraction from the exact interval [F, F+1] / 2^128; stops as soon as a
// coefficient becomes ambiguous at this precision.
std::vector<std::uint64_t> literal_coefficients(unsigned __int128 frac, int k_max) {
    auto to_big = [](unsigned __int128 v) {
        BigUint b(static_cast<std::uint64_t>(v >> 64));
        b.shl_bits(64);
        b += BigUint(static_cast<std::uint64_t>(v));
        return b;
    };
    BigUint lo_n = to_big(frac), lo_d = BigUint(1);
    lo_d.shl_bits(128);
    BigUint hi_n = lo_n;
    hi_n.add_small(1);
    BigUint hi_d = lo_d;

    std::vector<std::uint64_t> out{0};  // a_0 = 0, value in (0,1)
    for (int k = 1; k <= k_max; ++k) {
        if (lo_n.is_zero() || hi_n.is_zero()) break;
        // invert: x -> 1/x
        std::swap(lo_n, lo_d);
        std::swap(hi_n, hi_d);
        std::swap(lo_n, hi_n);  // reciprocal reverses the interval
        std::swap(lo_d, hi_d);
        auto [q_lo, r_lo] = BigUint::divmod(lo_n, lo_d);
        auto [q_hi, r_hi] = BigUint::divmod(hi_n, hi_d);
        if (!(q_lo == q_hi)) break;  // ambiguous digit
        if (!q_lo.fits_u64()) break;
        out.push_back(q_lo.low64());
        lo_n = std::move(r_lo);
        hi_n = std::move(r_hi);
    }
    return out;
}

std::vector<std::uint64_t> liouville_coefficients(int blowups, int k_max) {
    std::vector<std::uint64_t> a{0, 2, 2};
    constexpr unsigned __int128 kCap = static_cast<unsigned __int128>(1) << 40;
    unsigned __int128 q_prev = 1, q_cur = 2;  // q_0 = 1, q_1 = 2
    {
        // advance to q_2
        const unsigned __int128 q2 = a[2] * q_cur + q_prev;
        q_prev = q_cur;
        q_cur = q2;
    }
    for (int t = 0; t < blowups; ++t) {
        const int k = 3 + t;
        unsigned __int128 ak = 1;
        bool clamped = false;
        for (int e = 0; e < k - 1; ++e) {
            if (ak > kCap / q_cur) { ak = kCap; clamped = true; break; }
            ak *= q_cur;
        }
        if (ak > kCap) { ak = kCap; clamped = true; }
        (void)clamped;
        a.push_back(static_cast<std::uint64_t>(ak));
        const unsigned __int128 q_next = ak * q_cur + q_prev;
        q_prev = q_cur;
        q_cur = q_next;
    }
    while (static_cast<int>(a.size()) <= k_max) a.push_back(1);
    a.resize(static_cast<std::size_t>(k_max) + 1);
    return a;
}

}  // namespace

std::vector<std::uint64_t> AlphaDescriptor::coefficients(int k_max) const {
    if (k_max < 0) throw std::invalid_argument("AlphaDescriptor: k_max must be >= 0");
    switch (kind) {
        case Kind::named:
            return named_constant(name).coefficients(k_max);
        case Kind::periodic_cf: {
            std::vector<std::uint64_t> out = cf_initial;
            while (static_cast<int>(out.size()) <= k_max)
                out.push_back(cf_period[(out.size() - cf_initial.size()) % cf_period.size()]);
            out.resize(static_cast<std::size_t>(k_max) + 1);
            return out;
        }
        case Kind::literal:
            return literal_coefficients(frac128(), k_max);
        case Kind::liouville:
            return liouville_coefficients(liouville_blowups, k_max);
        case Kind::rational:
            throw std::domain_error("AlphaDescriptor: rational alpha rejected");
    }
    return {};
}

unsigned __int128 AlphaDescriptor::frac128() const {
    if (kind == Kind::rational) throw std::domain_error("AlphaDescriptor: rational alpha rejected");
    if (kind == Kind::literal) {
        const auto dot = literal.find('.');
        const std::string frac_digits = dot == std::string::npos ? "" : literal.substr(dot + 1);
        if (frac_digits.empty()) throw std::invalid_argument("AlphaDescriptor: literal has no fraction");
        BigUint D = BigUint::from_decimal(frac_digits);
        D.shl_bits(128);
        BigUint M = BigUint::pow(10, static_cast<int>(frac_digits.size()));
        auto [q, r] = BigUint::divmod(D, M);
        (void)r;
        // assemble the low 128 bits
        BigUint high = q;
        high.shr_bits(64);
        const std::uint64_t lo = q.low64();
        const std::uint64_t hi = high.low64();
        return (static_cast<unsigned __int128>(hi) << 64) | lo;
    }
    // exact truncation of the continued fraction until q has > 140 bits
    const std::vector<std::uint64_t> a = coefficients(512);
    BigUint p_prev(1), q_prev(0);
    BigUint p_cur(a.at(0)), q_cur(1);
    for (std::size_t k = 1; k < a.size(); ++k) {
        BigUint p_next = p_cur;
        p_next.mul_small(a[k]);
        p_next += p_prev;
        BigUint q_next = q_cur;
        q_next.mul_small(a[k]);
        q_next += q_prev;
        p_prev = std::move(p_cur);
        q_prev = std::move(q_cur);
        p_cur = std::move(p_next);
        q_cur = std::move(q_next);
        if (q_cur.bit_length() > 140) break;
    }
    // fractional part: p - a0 * q
    BigUint a0q = q_cur;
    a0q.mul_small(a.at(0));
    BigUint r = p_cur;
    r -= a0q;
    r.shl_bits(128);
    auto [q, rem] = BigUint::divmod(r, q_cur);
    (void)rem;
    BigUint high = q;
    high.shr_bits(64);
    return (static_cast<unsigned __int128>(high.low64()) << 64) | q.low64();
}

unsigned __int128 nalpha_frac128(unsigned __int128 alpha_frac, std::uint64_t n) {
    return alpha_frac * static_cast<unsigned __int128>(n);  // wraps mod 2^128 by design
}

PointScaleSystem gen_nalpha(const AlphaDescriptor& alpha, std::uint64_t n_max) {
    if (alpha.is_rational()) throw std::domain_error("gen_nalpha: rational alpha rejected");
    if (n_max < 1) throw std::invalid_argument("gen_nalpha: n_max must be >= 1");
    const unsigned __int128 F = alpha.frac128();
    PointScaleSystem sys;
    sys.family = "nalpha";
    sys.d = 1;
    sys.params = {{"n_max", static_cast<double>(n_max)}};
    sys.xs.reserve(n_max);
    sys.lambdas.reserve(n_max);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const unsigned __int128 f = nalpha_frac128(F, n);
        sys.xs.push_back(static_cast<double>(static_cast<std::uint64_t>(f >> 75)) * 0x1.0p-53);
        sys.lambdas.push_back(1.0 / static_cast<double>(n));
    }
    sys.validate();
    return sys;
}

double poisson_beta_j(double gamma, int c, int j) {
    if (j < 3) throw std::invalid_argument("poisson_beta_j: j must be >= 3");
    const double a = std::pow(static_cast<double>(c), -(j - 1));
    const double b = std::pow(static_cast<double>(c), -(j - 2));
    const double nu = gamma * (1.0 / a - 1.0 / b);
    return std::log(nu) / (j * std::log(c));
}

PointScaleSystem gen_poisson(double gamma, double lambda_min, std::uint64_t seed,
                             std::size_t budget) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gen_poisson: gamma must be > 0");
    if (!(lambda_min > 0.0 && lambda_min < 1.0))
        throw std::invalid_argument("gen_poisson: lambda_min outside (0,1)");
    const double mean = gamma * (1.0 / lambda_min - 1.0);
    if (mean > static_cast<double>(budget)) throw resource_error("gen_poisson: budget exceeded");

    const CounterRng rng(seed);
    const std::uint64_t n = rng.poisson(mean, 0x501550);
    std::vector<std::pair<double, double>> pts;  // (lambda, s)
    pts.reserve(n);
    const double inv_min = 1.0 / lambda_min;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double s = rng.uniform(1, i);
        const double u = rng.uniform(2, i);
        const double lambda = 1.0 / (inv_min - u * (inv_min - 1.0));
        pts.emplace_back(lambda, s);
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.first > b.first || (a.first == b.first && a.second < b.second);
    });

    PointScaleSystem sys;
    sys.family = "poisson";
    sys.d = 1;
    sys.seed = seed;
    sys.params = {{"gamma", gamma}, {"lambda_min", lambda_min}};
    sys.xs.reserve(pts.size());
    sys.lambdas.reserve(pts.size());
    for (const auto& [lambda, s] : pts) {
        sys.xs.push_back(s);
        sys.lambdas.push_back(lambda);
    }
    sys.validate();
    return sys;
}

PointScaleSystem gen_uniform(const LambdaRule& rule, std::uint64_t n_max, int d,
                             std::uint64_t seed) {
    if (n_max < 1 || d < 1) throw std::invalid_argument("gen_uniform: bad parameters");
    PointScaleSystem sys;
    sys.family = "uniform";
    sys.d = d;
    sys.seed = seed;
    if (rule.harmonic) {
        if (!(rule.gamma > 0.0)) throw std::invalid_argument("gen_uniform: gamma must be > 0");
        sys.params = {{"gamma", rule.gamma}, {"n_max", static_cast<double>(n_max)}};
    } else {
        if (rule.explicit_list.size() < n_max)
            throw std::invalid_argument("gen_uniform: explicit list shorter than n_max");
        for (std::size_t i = 1; i < n_max; ++i)
            if (rule.explicit_list[i] > rule.explicit_list[i - 1])
                throw std::domain_error("gen_uniform: explicit scale list must be non-increasing");
        sys.params = {{"n_max", static_cast<double>(n_max)}};
    }
    const CounterRng rng(seed);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        for (int i = 0; i < d; ++i) sys.xs.push_back(rng.uniform(n, static_cast<std::uint64_t>(i)));
        sys.lambdas.push_back(rule.harmonic ? rule.gamma / static_cast<double>(n)
                                            : rule.explicit_list[n - 1]);
    }
    sys.validate();
    return sys;
}

PointScaleSystem make_explicit_system(std::vector<double> xs, std::vector<double> lambdas, int d) {
    PointScaleSystem sys;
    sys.family = "explicit";
    sys.d = d;
    sys.xs = std::move(xs);
    sys.lambdas = std::move(lambdas);
    sys.validate();
    return sys;
}

}  // namespace ubiq
