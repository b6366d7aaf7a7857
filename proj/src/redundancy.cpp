#include "ubiq/redundancy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ubiq/errors.hpp"

namespace ubiq {

namespace {

// Max overlap depth of closed intervals [x-l, x+l] via an endpoint sweep.
// Interval graphs are perfect, so this equals the chromatic number N_j.
std::int64_t interval_overlap(const PointScaleSystem& sys, std::span<const std::uint32_t> idx) {
    struct Event { double t; int delta; };
    std::vector<Event> ev;
    ev.reserve(2 * idx.size());
    for (std::uint32_t n : idx) {
        const double x = sys.xs[n];
        const double l = sys.lambdas[n];
        ev.push_back({x - l, +1});
        ev.push_back({x + l, -1});
    }
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
        return a.t < b.t || (a.t == b.t && a.delta > b.delta);  // opens before closes: closed balls touch
    });
    std::int64_t cur = 0, best = 0;
    for (const auto& e : ev) {
        cur += e.delta;
        best = std::max(best, cur);
    }
    return best;
}

bool balls_intersect(const PointScaleSystem& sys, std::uint32_t a, std::uint32_t b) {
    const auto pa = sys.point(a), pb = sys.point(b);
    double dist = 0.0;
    for (int i = 0; i < sys.d; ++i)
        dist = std::max(dist, std::abs(pa[static_cast<std::size_t>(i)] - pb[static_cast<std::size_t>(i)]));
    return dist <= sys.lambdas[a] + sys.lambdas[b];
}

// d > 1: multiplicity lower bound on ball centers, greedy first-fit upper bound.
std::pair<std::int64_t, std::int64_t> multibracket(const PointScaleSystem& sys,
                                                   std::span<const std::uint32_t> idx) {
    if (idx.size() > 4096)
        throw resource_error("redundancy: d>1 bracket limited to 4096 balls per bucket");
    std::vector<std::uint32_t> order(idx.begin(), idx.end());
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const auto pa = sys.point(a), pb = sys.point(b);
        return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
    });
    // multiplicity at ball centers
    std::int64_t m = 0;
    for (std::uint32_t a : order) {
        std::int64_t cnt = 0;
        const auto pa = sys.point(a);
        for (std::uint32_t b : order) {
            const auto pb = sys.point(b);
            double dist = 0.0;
            for (int i = 0; i < sys.d; ++i)
                dist = std::max(dist,
                                std::abs(pa[static_cast<std::size_t>(i)] - pb[static_cast<std::size_t>(i)]));
            if (dist <= sys.lambdas[b]) ++cnt;
        }
        m = std::max(m, cnt);
    }
    // greedy first-fit colouring
    std::vector<int> color(order.size(), -1);
    int colors = 0;
    std::vector<char> used;
    for (std::size_t i = 0; i < order.size(); ++i) {
        used.assign(static_cast<std::size_t>(colors) + 1, 0);
        for (std::size_t k = 0; k < i; ++k)
            if (balls_intersect(sys, order[i], order[k])) used[static_cast<std::size_t>(color[k])] = 1;
        int c = 0;
        while (c < colors && used[static_cast<std::size_t>(c)]) ++c;
        color[i] = c;
        colors = std::max(colors, c + 1);
    }
    return {m, colors};
}

}  // namespace

RedundancyReport analyze(const PointScaleSystem& sys, int j_min, int j_max) {
    if (j_max < j_min) throw std::invalid_argument("analyze: empty j range");
    const ScaleBuckets buckets = bucket(sys);
    RedundancyReport rep;
    std::vector<double> xs, ys;
    for (int j = j_min; j <= j_max; ++j) {
        RedundancyRow row;
        row.j = j;
        const auto it = buckets.T.find(j);
        if (it == buckets.T.end() || it->second.empty()) {
            rep.rows.push_back(row);  // N_j = 0, skipped in the fit
            continue;
        }
        row.count = it->second.size();
        if (sys.d == 1) {
            row.nj_lo = row.nj_hi = row.m = interval_overlap(sys, it->second);
        } else {
            const auto [m, greedy] = multibracket(sys, it->second);
            row.m = m;
            row.nj_lo = m;
            row.nj_hi = greedy;
        }
        xs.push_back(j);
        ys.push_back(std::log2(static_cast<double>(row.nj_hi)));
        rep.rows.push_back(row);
    }
    if (xs.size() >= 2) {
        rep.fit = linear_fit(xs, ys);
        rep.slope = rep.fit.slope;
        for (std::size_t i = 1; i < xs.size(); ++i)
            rep.max_local_slope =
                std::max(rep.max_local_slope, (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));
    }
    rep.weakly_redundant_estimate = rep.slope < rep.threshold;
    return rep;
}

IrrationalityEstimate irrationality_measure(const AlphaDescriptor& alpha, int k_max) {
    if (alpha.is_rational())
        throw std::domain_error("irrationality_measure: rational alpha rejected");
    if (k_max < 2) throw std::invalid_argument("irrationality_measure: k_max must be >= 2");
    const auto a = alpha.coefficients(k_max);
    if (a.size() < 4)
        throw std::domain_error("irrationality_measure: expansion terminates or is ambiguous");

    IrrationalityEstimate est;
    constexpr __int128 kLimit = static_cast<__int128>(1) << 126;
    __int128 p_prev = 1, q_prev = 0;
    __int128 p_cur = static_cast<__int128>(a[0]), q_cur = 1;
    est.p.push_back(p_cur);
    est.q.push_back(q_cur);
    for (std::size_t k = 1; k < a.size(); ++k) {
        const auto ak = static_cast<__int128>(a[k]);
        if (q_cur > 0 && ak > (kLimit - q_prev) / q_cur) break;  // overflow guard
        const __int128 p_next = ak * p_cur + p_prev;
        const __int128 q_next = ak * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        est.p.push_back(p_cur);
        est.q.push_back(q_cur);
    }
    // xi_k from |alpha - p_k/q_k| < 1/(q_k q_{k+1})
    std::vector<double> mature;
    for (std::size_t k = 0; k + 1 < est.q.size(); ++k) {
        const double qk = static_cast<double>(est.q[k]);
        if (qk < 2.0) continue;
        const double qk1 = static_cast<double>(est.q[k + 1]);
        const double xi = 1.0 + std::log(qk1) / std::log(qk);
        est.xi.push_back(xi);
        est.xi_index.push_back(static_cast<int>(k));
        if (qk >= 32.0) mature.push_back(xi);
    }
    if (!est.xi.empty()) {
        const std::size_t tail = std::max<std::size_t>(2, est.xi.size() / 4);
        const std::size_t from = est.xi.size() - std::min(tail, est.xi.size());
        for (std::size_t i = from; i < est.xi.size(); ++i)
            est.xi_tail_max = std::max(est.xi_tail_max, est.xi[i]);
    }
    for (double v : mature) est.xi_mature_max = std::max(est.xi_mature_max, v);
    return est;
}

CrosscheckReport nalpha_redundancy_crosscheck(const AlphaDescriptor& alpha, std::uint64_t n_max,
                                              int j_min, int j_max) {
    CrosscheckReport rep;
    rep.redundancy = analyze(gen_nalpha(alpha, n_max), j_min, j_max);
    rep.irrationality = irrationality_measure(alpha);
    const bool slope_small = rep.redundancy.slope < rep.slope_threshold;
    const bool xi_near_two = rep.irrationality.xi_mature_max < rep.xi_threshold;
    rep.consistent = slope_small == xi_near_two;
    return rep;
}

}  // namespace ubiq
