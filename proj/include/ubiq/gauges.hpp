#pragma once

#include <string>

namespace ubiq {

// Slowly varying gauge corrections used in the scaling conditions and in the
// Hausdorff-gauge xi_{rho,delta}. All families are evaluated at
// min(r, r_cap): below r_cap = e^-e they are positive, non-decreasing and
// vanish at 0+; above it they are clamped to their r_cap value.
struct Gauge {
    enum class Family {
        zero,             // identically 0
        sqrt_loglog,      // C |log r|^-1/2 (log log |log r|)^1/2
        sqrt_log_pow,     // C |log r|^-1/2 (log |log r|)^gamma
        loglog_inv_pow,   // (log |log r|)^-kappa
    };

    Family family = Family::zero;
    double C = 1.0;
    double gamma = 1.0;
    double kappa = 1.0;
    double r_cap = 0.065988035845312537;  // e^-e

    static Gauge zero() { return Gauge{}; }
    static Gauge sqrt_loglog(double C);
    static Gauge sqrt_log_pow(double C, double gamma);
    static Gauge loglog_inv_pow(double kappa);

    double operator()(double r) const;
    bool is_zero() const { return family == Family::zero; }
    std::string name() const;
};

// The gauge triple of a heterogeneous system; chi enters only when rho < 1.
struct GaugeSet {
    Gauge phi;   // analyzing-measure correction
    Gauge psi;   // mu-scaling correction
    Gauge chi;   // dilation correction (rho < 1 only)

    // xi_{rho,delta}(r) = (4+d) phi(r) + chi(r)
    double xi(double r, int d) const { return (4 + d) * phi(r) + chi(r); }
};

// Width of the admissible-exponent window at scale lambda: the largest of the
// two exponents eps± solving lambda^(alpha±eps±) = M^∓ (2 lambda)^(alpha ±
// psi(2 lambda) ± 2 alpha chi(2 lambda)). chi is ignored when rho = 1.
double eps_schedule(double M, double alpha, const GaugeSet& gauges, double lambda, double rho);

}  // namespace ubiq
