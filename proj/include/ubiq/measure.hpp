#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ubiq/cgrid.hpp"

namespace ubiq {

enum class MeasureKind { multinomial, cascade, cpc, gibbs };

std::string to_string(MeasureKind k);
MeasureKind measure_kind_from_string(const std::string& s);

// Product of d multinomial measures: coordinate i splits mass across the c
// children by the fixed positive weights of row i.
struct MultinomialSpec {
    int c = 2;
    int d = 1;
    std::vector<std::vector<double>> weights;  // d rows of c positive entries, each summing to 1

    void validate() const;
    static MultinomialSpec uniform(int c, int d);  // Lebesgue
    bool is_uniform() const;
    // log mu(I_{j,k}) from the digit expansion of k; exact in log space.
    double log_box_mass(int j, std::span<const std::int64_t> k) const;
    double log_weight(int dim, int digit) const;
};

// q-tilt: row i becomes (pi_k^q) / sum_l (pi_l^q).
MultinomialSpec tilt_multinomial(const MultinomialSpec& spec, double q);

struct CascadeGenerator {
    enum class Kind { constant, gaussian, log_discrete };
    Kind kind = Kind::constant;
    double a = 0.0;         // constant value
    double mean = 0.0;      // gaussian
    double variance = 1.0;  // gaussian
    std::vector<double> values;  // log_discrete: X = ln(value)
    std::vector<double> probs;

    void validate() const;
    double log_mean_exp() const;         // ln E[e^X]
    double log_mgf(double q) const;      // ln E[e^{qX}]
};

struct CascadeSpec {
    int c = 2;
    int d = 1;
    CascadeGenerator gen;
    int depth = 8;
    std::uint64_t seed = 0;

    void validate() const;
    // L(q) = d ln c + ln E[e^{qX}]; theta(q) = (q L(1) - L(q)) / ln c.
    double L(double q) const;
    double theta(double q) const;
};

// Compound Poisson cascade on [0,1], d = 1. Points are drawn on the strip
// [-1,2] x [eps,1] so that boundary coverage is unbiased.
struct CpcSpec {
    double xi = 1.0;
    double eps = 0.01;
    std::uint64_t seed = 0;
    bool renormalize = false;
    double point_budget = 4e6;

    void validate() const;
    double expected_points_unit() const { return xi / 2.0 * (1.0 / eps - 1.0); }
};

struct GibbsPotential {
    enum class Kind { constant, piecewise_gen1, cosine, custom };
    Kind kind = Kind::constant;
    double value = 0.0;                 // constant / cosine amplitude
    std::vector<double> cell_values;    // piecewise_gen1: one value per gen-1 cell (c^d entries)
    std::function<double(std::span<const double>)> fn;  // custom

    double eval(std::span<const double> x, int c, int d) const;
};

struct GibbsSpec {
    int c = 2;
    int d = 1;
    GibbsPotential phi;
    int depth = 8;

    void validate() const;
};

struct LogMassInterval {
    double lower = 0.0;
    double upper = 0.0;
};

// A positive measure represented by log-masses on the c-adic tree up to a
// finite depth. Generation arrays are indexed by the digit-path index
// p = sum_m tuple_m (c^d)^(j-m); for d = 1 the path equals k.
class BoxMeasure {
public:
    BoxMeasure() = default;

    const GridGeometry& geometry() const { return geom_; }
    MeasureKind kind() const { return kind_; }
    int stored_depth() const { return J_store_; }
    int max_depth() const { return J_max_; }
    std::uint64_t seed() const { return seed_; }
    double total_log_mass() const { return total_log_; }
    const std::string& spec_json() const { return spec_json_; }

    std::span<const double> generation(int j) const;

    double log_mass(const CAdicBox& b) const;
    double log_mass_k(int j, std::span<const std::int64_t> k) const;

    // Bracket for log mu(B(center,r)): lower sums boxes inside the closed
    // ball, upper sums boxes meeting the open ball (the boundary carries no
    // mass for any measure built here). Both at generation
    // J = min(J_max, ceil(log_c(1/r)) + margin).
    LogMassInterval ball_mass(std::span<const double> center, double r, int margin) const;

    // Max |lse(children) - parent| over all stored generations.
    double additivity_defect() const;

    // True when masses beyond the stored depth can be computed analytically.
    bool analytic() const { return mn_.has_value(); }
    const MultinomialSpec& multinomial_spec() const;

    static BoxMeasure from_parts(GridGeometry geom, MeasureKind kind, int J_max,
                                 std::vector<std::vector<double>> gens,
                                 std::optional<MultinomialSpec> mn, std::uint64_t seed,
                                 std::string spec_json);

    static std::uint64_t path_of(int c, int j, std::span<const std::int64_t> k);

private:
    GridGeometry geom_;
    MeasureKind kind_ = MeasureKind::multinomial;
    int J_store_ = 0;
    int J_max_ = 0;
    std::uint64_t seed_ = 0;
    double total_log_ = 0.0;
    std::vector<std::vector<double>> gens_;
    std::optional<MultinomialSpec> mn_;
    std::string spec_json_;
};

// Builders. J_max is the depth to which masses are defined; storage may stop
// earlier for multinomial measures (deeper boxes are evaluated from digits).
BoxMeasure build_multinomial(const MultinomialSpec& spec, int J_max);
BoxMeasure build_cascade(const CascadeSpec& spec);
BoxMeasure build_cpc(const CpcSpec& spec, int J_max);
BoxMeasure build_gibbs_finite(const GibbsSpec& spec, int J_max);

}  // namespace ubiq
