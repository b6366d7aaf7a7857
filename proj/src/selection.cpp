#include "ubiq/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "ubiq/cgrid.hpp"
#include "ubiq/errors.hpp"

namespace ubiq {

EpsSchedule EpsSchedule::constant(double v) {
    if (!(v >= 0.0)) throw std::invalid_argument("EpsSchedule: eps must be >= 0");
    EpsSchedule e;
    e.kind = Kind::constant;
    e.value = v;
    return e;
}

EpsSchedule EpsSchedule::explicit_list(std::vector<double> v) {
    for (double x : v)
        if (!(x >= 0.0)) throw std::invalid_argument("EpsSchedule: eps must be >= 0");
    EpsSchedule e;
    e.kind = Kind::explicit_list;
    e.list = std::move(v);
    return e;
}

EpsSchedule EpsSchedule::from_gauges(GaugeSet g, double M) {
    EpsSchedule e;
    e.kind = Kind::gauge;
    e.gauges = g;
    e.M = M;
    return e;
}

double EpsSchedule::eval(std::size_t n, double lambda, double alpha, double rho) const {
    switch (kind) {
        case Kind::constant:
            return value;
        case Kind::explicit_list:
            if (n >= list.size()) throw std::invalid_argument("EpsSchedule: index beyond list");
            return list[n];
        case Kind::gauge: {
            // the gauges clamp above r_cap; match that here
            const double cap = gauges.phi.r_cap * (1.0 - 1e-9);
            return eps_schedule(M, alpha, gauges, std::min(lambda, cap), rho);
        }
    }
    return value;
}

void SelectionSpec::validate() const {
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("SelectionSpec: rho outside (0,1]");
    if (!(alpha >= 0.0)) throw std::invalid_argument("SelectionSpec: alpha must be >= 0");
    if (!(delta >= 1.0)) throw std::invalid_argument("SelectionSpec: delta must be >= 1");
    if (margin < 0) throw std::invalid_argument("SelectionSpec: margin must be >= 0");
}

SelectionResult select(const PointScaleSystem& sys, const BoxMeasure& mu,
                       const SelectionSpec& spec) {
    std::vector<std::uint32_t> all(sys.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
    return select(sys, mu, spec, all);
}

SelectionResult select(const PointScaleSystem& sys, const BoxMeasure& mu, const SelectionSpec& spec,
                       std::span<const std::uint32_t> indices) {
    spec.validate();
    if (sys.d != mu.geometry().d) throw std::invalid_argument("select: dimension mismatch");
    SelectionResult res;
    for (std::uint32_t n : indices) {
        const double lambda = sys.lambdas[n];
        const double r = std::pow(lambda, spec.rho);
        LogMassInterval bracket;
        try {
            bracket = mu.ball_mass(sys.point(n), std::min(r, 1.0), spec.margin);
        } catch (const resolution_error&) {
            res.below_resolution.push_back(n);
            continue;
        }
        const double eps = spec.eps.eval(n, lambda, spec.alpha, spec.rho);
        const double ln_l = std::log(lambda);
        const double lo_thr = spec.rho * (spec.alpha + eps) * ln_l;  // mass must be >= this
        const double hi_thr = spec.rho * (spec.alpha - eps) * ln_l;  // mass must be <= this
        if (bracket.lower >= lo_thr && bracket.upper <= hi_thr) {
            res.selected.push_back(n);
            res.brackets.push_back(bracket);
        } else if (bracket.upper < lo_thr || bracket.lower > hi_thr) {
            // certified out
        } else {
            res.indeterminate.push_back(n);
        }
    }
    return res;
}

namespace {

std::uint64_t count_boxes_d1(const PointScaleSystem& sys, std::span<const std::uint32_t> balls,
                             double delta, int c, int J) {
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    ranges.reserve(balls.size());
    for (std::uint32_t n : balls) {
        const double r = std::pow(sys.lambdas[n], delta);
        const IndexRange range = cover_range(sys.xs[n], r, c, J);
        if (!range.empty()) ranges.emplace_back(range.lo, range.hi);
    }
    std::sort(ranges.begin(), ranges.end());
    std::uint64_t total = 0;
    std::int64_t cur_lo = 0, cur_hi = -1;
    bool open = false;
    for (const auto& [lo, hi] : ranges) {
        if (!open) {
            cur_lo = lo;
            cur_hi = hi;
            open = true;
        } else if (lo <= cur_hi + 1) {
            cur_hi = std::max(cur_hi, hi);
        } else {
            total += static_cast<std::uint64_t>(cur_hi - cur_lo + 1);
            cur_lo = lo;
            cur_hi = hi;
        }
    }
    if (open) total += static_cast<std::uint64_t>(cur_hi - cur_lo + 1);
    return total;
}

std::uint64_t count_boxes_dn(const PointScaleSystem& sys, std::span<const std::uint32_t> balls,
                             double delta, int c, int J) {
    std::unordered_set<std::uint64_t> seen;
    const std::uint64_t n = pow_int(c, J);
    for (std::uint32_t b : balls) {
        const double r = std::pow(sys.lambdas[b], delta);
        const auto pt = sys.point(b);
        std::vector<IndexRange> ranges(pt.size());
        bool empty = false;
        std::uint64_t cells = 1;
        for (std::size_t i = 0; i < pt.size(); ++i) {
            ranges[i] = cover_range(pt[i], r, c, J);
            if (ranges[i].empty()) { empty = true; break; }
            cells *= static_cast<std::uint64_t>(ranges[i].hi - ranges[i].lo + 1);
            if (cells > (1ULL << 24)) throw resource_error("limsup_boxcount: cell budget exceeded");
        }
        if (empty) continue;
        std::vector<std::int64_t> k(pt.size());
        for (std::size_t i = 0; i < k.size(); ++i) k[i] = ranges[i].lo;
        for (;;) {
            std::uint64_t flat = 0;
            for (std::size_t i = 0; i < k.size(); ++i)
                flat = flat * n + static_cast<std::uint64_t>(k[i]);
            seen.insert(flat);
            if (seen.size() > (1ULL << 24))
                throw resource_error("limsup_boxcount: box budget exceeded");
            std::size_t i = 0;
            for (; i < k.size(); ++i) {
                if (k[i] < ranges[i].hi) { ++k[i]; break; }
                k[i] = ranges[i].lo;
            }
            if (i == k.size()) break;
        }
    }
    return seen.size();
}

std::uint64_t count_boxes(const PointScaleSystem& sys, std::span<const std::uint32_t> balls,
                          double delta, int c, int J) {
    return sys.d == 1 ? count_boxes_d1(sys, balls, delta, c, J)
                      : count_boxes_dn(sys, balls, delta, c, J);
}

}  // namespace

DimEstimate limsup_boxcount(const PointScaleSystem& sys, const SelectionResult& sel, double delta,
                            int grid_c, const BoxcountOptions& opts, std::optional<double> theory) {
    if (opts.J_max < opts.J_min) throw std::invalid_argument("limsup_boxcount: bad J window");
    DimEstimate est;
    est.tails = opts.tails;
    for (int J = opts.J_min; J <= opts.J_max; ++J) est.J_values.push_back(J);

    // fixed-tail counts (stabilization profile)
    est.tail_counts.resize(opts.tails.size());
    for (std::size_t t = 0; t < opts.tails.size(); ++t) {
        std::vector<std::uint32_t> balls;
        for (std::uint32_t n : sel.selected)
            if (n >= opts.tails[t]) balls.push_back(n);
        for (int J : est.J_values)
            est.tail_counts[t].push_back(count_boxes(sys, balls, delta, grid_c, J));
    }

    // critical-band counts: per J, only balls with lambda^delta comparable to
    // the box size enter (the economical cover of the upper-bound argument).
    const double log_c = std::log(grid_c);
    std::vector<double> xs, ys;
    for (int J : est.J_values) {
        const double lo = -(J + opts.buffer) * log_c;  // ln lambda^delta lower
        const double hi = -(J - opts.lead) * log_c;
        std::vector<std::uint32_t> balls;
        for (std::uint32_t n : sel.selected) {
            const double lnr = delta * std::log(sys.lambdas[n]);
            if (lnr >= lo && lnr <= hi) balls.push_back(n);
        }
        est.band_counts.push_back(count_boxes(sys, balls, delta, grid_c, J));
        if (est.band_counts.back() > 0) {
            xs.push_back(J);
            ys.push_back(std::log(static_cast<double>(est.band_counts.back())) / log_c);
        }
    }
    if (xs.size() >= 2) {
        est.fit = linear_fit(xs, ys);
        est.slope = est.fit.slope;
    }
    est.theory = theory;
    if (theory) est.gap = *theory - est.slope;
    return est;
}

std::vector<SaturationRow> saturation_scan(const PointScaleSystem& sys, const BoxMeasure& mu,
                                           const SelectionSpec& base, double beta,
                                           const std::vector<double>& deltas,
                                           const BoxcountOptions& opts) {
    std::vector<SaturationRow> rows;
    const SelectionResult sel = select(sys, mu, base);
    for (double delta : deltas) {
        if (!(delta >= 1.0)) throw std::invalid_argument("saturation_scan: delta must be >= 1");
        SaturationRow row;
        row.delta = delta;
        const DimFormulaResult dr =
            dim_formula({beta, base.rho, delta, mu.geometry().d});
        row.D_theory = dr.D;
        row.plateau = dr.saturated;
        const auto bound = theorem1_upper_bound(beta, base.rho, delta, mu.geometry().d);
        row.upper_bound = bound.value_or(0.0);
        const DimEstimate est = limsup_boxcount(sys, sel, delta, mu.geometry().c, opts, bound);
        row.slope = est.slope;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ubiq
