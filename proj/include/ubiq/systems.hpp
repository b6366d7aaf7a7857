#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ubiq {

// A materialized point-scale family {(x_n, lambda_n)}: points in [0,1]^d,
// scales positive and non-increasing. Families are generated up to an
// explicit budget, never lazily infinite.
struct PointScaleSystem {
    std::string family;
    int d = 1;
    std::uint64_t seed = 0;
    std::map<std::string, double> params;
    std::vector<double> xs;       // n*d coordinates, point-major
    std::vector<double> lambdas;  // non-increasing

    std::size_t size() const { return lambdas.size(); }
    std::span<const double> point(std::size_t n) const {
        return {xs.data() + n * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
    }
    double lambda(std::size_t n) const { return lambdas[n]; }
    void validate() const;
};

// T_j = {n : 2^-(j+1) < lambda_n <= 2^-j}; j may be negative for scales > 1.
struct ScaleBuckets {
    std::map<int, std::vector<std::uint32_t>> T;
};

int bucket_index(double lambda);
ScaleBuckets bucket(const PointScaleSystem& sys);

// Exact descriptor of an irrational alpha, usable both for the {n alpha}
// orbit (128-bit fixed point) and for continued-fraction convergents.
struct AlphaDescriptor {
    enum class Kind { named, periodic_cf, literal, rational, liouville };
    Kind kind = Kind::named;
    std::string name = "sqrt2";                  // "sqrt2" | "golden"
    std::vector<std::uint64_t> cf_initial;       // periodic_cf: a_0, a_1, ...
    std::vector<std::uint64_t> cf_period;        // repeating block (non-empty)
    std::string literal;                         // decimal, e.g. "0.41421356..."
    std::uint64_t num = 0, den = 1;              // rational (rejected by consumers)
    int liouville_blowups = 2;                   // number of super-exponential coefficients

    bool is_rational() const;
    // Continued-fraction coefficients a_0..a_k; may return fewer for literal
    // descriptors once the expansion becomes ambiguous at 128-bit precision.
    std::vector<std::uint64_t> coefficients(int k_max) const;
    // floor(frac(alpha) * 2^128)
    unsigned __int128 frac128() const;

    static AlphaDescriptor named_constant(const std::string& name);
    static AlphaDescriptor periodic(std::vector<std::uint64_t> initial,
                                    std::vector<std::uint64_t> period);
    static AlphaDescriptor from_literal(std::string decimal);
    static AlphaDescriptor rational(std::uint64_t p, std::uint64_t q);
    static AlphaDescriptor liouville(int blowups = 2);
};

// {n alpha} computed in 128-bit fixed point (exact modular arithmetic).
unsigned __int128 nalpha_frac128(unsigned __int128 alpha_frac, std::uint64_t n);

// Family of the b-adic numbers: (k b^-j, 2 b^-j) for 1 <= j <= j_max.
PointScaleSystem gen_badic(int b, int d, int j_max, std::size_t budget = std::size_t{1} << 24);

// Family of the rational numbers: (p/q, 2 q^-(1+1/d)), q <= q_max,
// p in {0..q}^d. With irreducible_only, keeps pairs where at least one
// p_i/q is irreducible. hurwitz switches d=1 radii to 2/(sqrt5 q^2).
PointScaleSystem gen_rationals(std::uint64_t q_max, int d, bool irreducible_only,
                               bool hurwitz = false, std::size_t budget = std::size_t{1} << 24);

// Family ({n alpha}, 1/n), n = 1..n_max; rejects rational alpha.
PointScaleSystem gen_nalpha(const AlphaDescriptor& alpha, std::uint64_t n_max);

// Poisson point process on [0,1] x [lambda_min, 1] with intensity
// ds * gamma dlambda / lambda^2 (d = 1).
PointScaleSystem gen_poisson(double gamma, double lambda_min, std::uint64_t seed,
                             std::size_t budget = std::size_t{1} << 24);

// Expected-count exponent hook: beta_j = log_c nu((c^-(j-1), c^-(j-2)]) / j
// for nu(dl) = gamma dl / l^2.
double poisson_beta_j(double gamma, int c, int j);

struct LambdaRule {
    bool harmonic = true;
    double gamma = 3.0;                  // lambda_n = gamma / n
    std::vector<double> explicit_list;   // used when !harmonic; must be non-increasing
};

// i.i.d. uniform points with a deterministic scale rule.
PointScaleSystem gen_uniform(const LambdaRule& rule, std::uint64_t n_max, int d,
                             std::uint64_t seed);

// Hand-built system (used for negative controls and file round-trips).
PointScaleSystem make_explicit_system(std::vector<double> xs, std::vector<double> lambdas, int d);

}  // namespace ubiq
