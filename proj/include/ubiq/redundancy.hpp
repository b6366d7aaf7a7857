#pragma once

#include <cstdint>
#include <vector>

#include "ubiq/stats.hpp"
#include "ubiq/systems.hpp"

namespace ubiq {

struct RedundancyRow {
    int j = 0;
    std::size_t count = 0;       // #T_j
    std::int64_t m = 0;          // max overlap multiplicity
    std::int64_t nj_lo = 0;      // lower bound for N_j (exact for d=1)
    std::int64_t nj_hi = 0;      // upper bound (greedy colouring; = nj_lo for d=1)
};

// Weak redundancy is asymptotic (log N_j = o(j)), so the verdict here is a
// finite-scale slope estimate over the computed j-range, not a decision.
struct RedundancyReport {
    std::vector<RedundancyRow> rows;
    LinearFit fit;                 // log2(N_j hi) against j over nonempty buckets
    double slope = 0.0;
    double max_local_slope = 0.0;  // max per-step increment of log2 N_j
    double threshold = 0.1;
    bool weakly_redundant_estimate = false;
};

RedundancyReport analyze(const PointScaleSystem& sys, int j_min, int j_max);

struct IrrationalityEstimate {
    std::vector<__int128> p, q;      // convergents, exact integer arithmetic
    std::vector<double> xi;          // xi_k = 1 + ln q_{k+1} / ln q_k (valid where q_k >= 2)
    std::vector<int> xi_index;       // the k each xi entry refers to
    double xi_tail_max = 0.0;        // max over the last quarter of valid entries
    double xi_mature_max = 0.0;      // max over entries with q_k >= 32
};

// Convergents from the exact coefficient stream; stops early if the integer
// recurrence would overflow 126 bits. Rational alpha raises domain_error.
IrrationalityEstimate irrationality_measure(const AlphaDescriptor& alpha, int k_max = 40);

struct CrosscheckReport {
    RedundancyReport redundancy;
    IrrationalityEstimate irrationality;
    double slope_threshold = 0.1;
    double xi_threshold = 2.5;
    bool consistent = false;  // (slope small) iff (mature xi estimate near 2)
};

CrosscheckReport nalpha_redundancy_crosscheck(const AlphaDescriptor& alpha, std::uint64_t n_max,
                                              int j_min, int j_max);

}  // namespace ubiq
