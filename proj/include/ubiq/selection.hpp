#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ubiq/gauges.hpp"
#include "ubiq/measure.hpp"
#include "ubiq/spectrum.hpp"
#include "ubiq/stats.hpp"
#include "ubiq/systems.hpp"

namespace ubiq {

struct EpsSchedule {
    enum class Kind { constant, explicit_list, gauge };
    Kind kind = Kind::constant;
    double value = 0.1;
    std::vector<double> list;   // per-index values
    GaugeSet gauges;            // gauge kind: eps from eps_schedule with constant M
    double M = 2.0;

    static EpsSchedule constant(double v);
    static EpsSchedule explicit_list(std::vector<double> v);
    static EpsSchedule from_gauges(GaugeSet g, double M = 2.0);

    double eval(std::size_t n, double lambda, double alpha, double rho) const;
};

struct SelectionSpec {
    double rho = 1.0;
    double alpha = 1.0;
    double delta = 1.0;
    EpsSchedule eps;
    int margin = 2;  // ball_mass resolution margin

    void validate() const;
};

// Index n is selected only when the mass bracket certifies
// lambda^(rho(alpha+eps)) <= mu(B(x_n, lambda^rho)) <= lambda^(rho(alpha-eps));
// indeterminate brackets are reported separately, never selected.
struct SelectionResult {
    std::vector<std::uint32_t> selected;
    std::vector<std::uint32_t> indeterminate;
    std::vector<std::uint32_t> below_resolution;
    // log-mass brackets of the selected balls, parallel to `selected`
    std::vector<LogMassInterval> brackets;
};

SelectionResult select(const PointScaleSystem& sys, const BoxMeasure& mu, const SelectionSpec& spec);
SelectionResult select(const PointScaleSystem& sys, const BoxMeasure& mu, const SelectionSpec& spec,
                       std::span<const std::uint32_t> indices);

// Finite-N surrogate of the limsup: counts generation-J boxes meeting
// union_{selected n >= N_tail} B(x_n, lambda_n^delta). The headline slope is
// fitted on the critical-band counts: per J only balls with
// lambda^delta within [c^-(J+buffer), c^-(J-lead)] contribute, which is the
// economical cover of the classical covering argument. Fixed-tail counts are
// reported alongside to expose stabilization.
struct BoxcountOptions {
    int J_min = 8;
    int J_max = 16;
    std::vector<std::size_t> tails{0};  // N_tail index starts
    int lead = 2;
    int buffer = 3;
};

struct DimEstimate {
    std::vector<int> J_values;
    std::vector<std::size_t> tails;
    std::vector<std::vector<std::uint64_t>> tail_counts;  // [tail][J]
    std::vector<std::uint64_t> band_counts;               // [J], critical band
    LinearFit fit;     // log_c band_count against J
    double slope = 0.0;
    std::optional<double> theory;  // theorem-1 upper bound if supplied
    double gap = 0.0;              // theory - slope when theory present
};

DimEstimate limsup_boxcount(const PointScaleSystem& sys, const SelectionResult& sel, double delta,
                            int grid_c, const BoxcountOptions& opts,
                            std::optional<double> theory = std::nullopt);

struct SaturationRow {
    double delta = 1.0;
    double slope = 0.0;
    double D_theory = 0.0;   // dim_formula at (beta, rho, delta)
    bool plateau = false;    // delta <= delta*
    double upper_bound = 0.0;
};

// delta-scan pairing measured slopes with D(beta,rho,delta); requires rho < 1
// for the saturation reading but accepts rho = 1 for comparison columns.
std::vector<SaturationRow> saturation_scan(const PointScaleSystem& sys, const BoxMeasure& mu,
                                           const SelectionSpec& base, double beta,
                                           const std::vector<double>& deltas,
                                           const BoxcountOptions& opts);

}  // namespace ubiq
