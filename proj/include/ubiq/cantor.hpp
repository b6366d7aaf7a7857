#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ubiq/bigindex.hpp"
#include "ubiq/gauges.hpp"
#include "ubiq/measure.hpp"
#include "ubiq/stats.hpp"

namespace ubiq {

// ---------------------------------------------------------------------------
// Comparable-radius greedy ball selection (constructive Besicovitch step).
// Keeps balls max-mass-first, discarding any ball meeting an already kept
// one. For radii within a factor c, the (2c+1)-dilate of each kept ball
// covers its discards, so the kept family captures at least 1/(2c+1)^d of
// the union's mass.
// ---------------------------------------------------------------------------
struct MassBall {
    std::vector<double> center;
    double radius = 0.0;
    double log_mass = 0.0;
};

std::vector<std::size_t> greedy_disjoint(std::span<const MassBall> balls);
double greedy_capture_constant(int c, int d);  // (2c+1)^d

// ---------------------------------------------------------------------------
// Generalized Cantor construction on exactly self-similar inputs (d = 1).
// ---------------------------------------------------------------------------
struct CantorSystem {
    enum class Family { badic, rationals };
    Family family = Family::badic;
    int b = 2;
    std::uint64_t q_cap = 1ULL << 22;  // rationals: denominator guard
    bool irreducible_only = true;
};

struct CantorConfig {
    CantorSystem system;
    MultinomialSpec mu;  // analyzed measure
    MultinomialSpec m;   // analyzing measure (exactly self-similar)
    double alpha = 1.0;
    double beta = 1.0;
    double rho = 1.0;
    // d_p per generation: non-decreasing, >= 1; the last entry is the target delta.
    std::vector<double> schedule;
    GaugeSet gauges;
    int j1_min = 8;          // first-generation witness level floor
    int search_cap = 40;     // extra depth explored past each parent before giving up
    int audit_margin = 4;
    double audit_M = 1.0;    // multiplicative slack in the (pm) audit
    int expand_budget = 32;  // nodes per generation whose subtrees are refined
    std::size_t candidate_budget = std::size_t{1} << 21;
    std::size_t keep_budget = std::size_t{1} << 17;
    bool exact_mass = false;  // exact rational masses (d=1, c<=3, <=5 generations)
    std::vector<std::pair<std::uint64_t, std::uint64_t>> m_weight_fractions;

    int generations() const { return static_cast<int>(schedule.size()); }
    double delta() const { return schedule.back(); }
    void validate() const;
};

struct CantorNode {
    int t = 0;        // box generation; the node is the closed box [a c^-t, (a+1) c^-t]
    BigUint a;
    int parent = -1;
    int ball_id = 0;  // enclosing-ball id within the generation (shared when rho < 1)
    std::uint64_t witness_level = 0;  // badic level j (lambda = 2 b^-j) or rationals q
    BigUint witness_num;              // witness x_n = num/den
    BigUint witness_den;
    double log2_lambda = 0.0;
    double log_mass = 0.0;    // ln m_delta(I)
    double log_m_ball = 0.0;  // ln m(Ibar)
    std::uint64_t multiplicity = 1;  // #S(Ibar) for rho < 1
    int audit_from = 0;
    int audit_to = 0;
    bool pm_ok = false;
    bool dm_ok = false;
    bool p3_ok = false;
    double sep_ratio = 1.0;   // min gap to distinct-ball siblings / max |Ibar|
    double iv_margin = 0.0;   // ln-scale slack in property (iv); >= 0 passes
    BigUint mass_num, mass_den;  // exact masses (when enabled)
};

struct CantorGeneration {
    int max_level = 0;  // deepest witness level used
    double d_p = 1.0;
    std::vector<CantorNode> nodes;
    std::vector<int> expanded;  // indices refined by the next generation
};

struct CantorTree {
    int c = 2;
    double rho = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
    std::vector<double> schedule;
    GaugeSet gauges;
    bool exact_mass = false;
    std::vector<CantorGeneration> gens;

    double worst_iv_margin() const;           // min over nodes; >= 0 means (iv) holds everywhere
    double mass_conservation_defect() const;  // max |lse(children) - parent| over expanded nodes
    bool exact_conservation_ok() const;       // exact-rational equality (when enabled)
};

CantorTree cantor_build(const CantorConfig& cfg);
// rho < 1 variant: badic system only (grid counting certifies the disjoint
// pair counts analytically); requires a constant schedule.
CantorTree cantor_build_rho(const CantorConfig& cfg);

// ---------------------------------------------------------------------------
// Mass-scaling audit: ratios m_delta(B(x,r)) / r^(D - xi(r)) for balls
// centered on tree points, radii spanning the built scale range. PASS when
// the per-decade maxima show no increasing trend (one-sided Kendall, 5%).
// ---------------------------------------------------------------------------
struct ScalingAuditReport {
    double D = 0.0;
    std::vector<double> decade_log2_r;
    std::vector<double> decade_max_log_ratio;
    KendallTrend trend;
    bool pass = false;
    LinearFit exponent_fit;  // ln m(B) against ln r (local-exponent estimate)
};

ScalingAuditReport audit_scaling(const CantorTree& tree, const GaugeSet& gauges, double D,
                                 int sample_balls, std::uint64_t seed);

}  // namespace ubiq
