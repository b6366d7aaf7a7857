#include "ubiq/gauges.hpp"

#include <cmath>
#include <stdexcept>

namespace ubiq {

Gauge Gauge::sqrt_loglog(double C) {
    if (!(C >= 0.0)) throw std::invalid_argument("Gauge: C must be >= 0");
    Gauge g;
    g.family = Family::sqrt_loglog;
    g.C = C;
    return g;
}

Gauge Gauge::sqrt_log_pow(double C, double gamma) {
    if (!(C >= 0.0)) throw std::invalid_argument("Gauge: C must be >= 0");
    Gauge g;
    g.family = Family::sqrt_log_pow;
    g.C = C;
    g.gamma = gamma;
    return g;
}

Gauge Gauge::loglog_inv_pow(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("Gauge: kappa must be > 0");
    Gauge g;
    g.family = Family::loglog_inv_pow;
    g.kappa = kappa;
    return g;
}

double Gauge::operator()(double r) const {
    if (family == Family::zero) return 0.0;
    if (!(r > 0.0)) throw std::domain_error("Gauge: r must be positive");
    const double rr = r < r_cap ? r : r_cap;
    const double L = -std::log(rr);       // > e
    const double LL = std::log(L);        // > 1
    switch (family) {
        case Family::sqrt_loglog:
            return C * std::sqrt(std::log(LL) / L);
        case Family::sqrt_log_pow:
            return C * std::pow(LL, gamma) / std::sqrt(L);
        case Family::loglog_inv_pow:
            return std::pow(LL, -kappa);
        default:
            return 0.0;
    }
}

std::string Gauge::name() const {
    switch (family) {
        case Family::zero: return "zero";
        case Family::sqrt_loglog: return "sqrt_loglog";
        case Family::sqrt_log_pow: return "sqrt_log_pow";
        case Family::loglog_inv_pow: return "loglog_inv_pow";
    }
    return "?";
}

double eps_schedule(double M, double alpha, const GaugeSet& gauges, double lambda, double rho) {
    if (!(M >= 1.0)) throw std::invalid_argument("eps_schedule: M must be >= 1");
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("eps_schedule: rho outside (0,1]");
    if (!(lambda > 0.0) || lambda >= gauges.phi.r_cap)
        throw std::domain_error("eps_schedule: lambda outside gauge domain (0, r_cap)");

    const double ln_l = std::log(lambda);
    const double ln_2l = std::log(2.0 * lambda);
    const double psi = gauges.psi(2.0 * lambda);
    const double chi = rho < 1.0 ? gauges.chi(2.0 * lambda) : 0.0;
    const double corr = psi + 2.0 * alpha * chi;

    // lambda^(a+e+) = M^-1 (2l)^(a+corr)  =>  e+ ln l = -ln M + a ln 2 + corr ln(2l)
    const double eps_plus = (-std::log(M) + alpha * std::log(2.0) + corr * ln_2l) / ln_l;
    // lambda^(a-e-) = M (2l)^(a-corr)     =>  e- |ln l| = ln M + a ln 2 - corr ln(2l)
    const double eps_minus = (std::log(M) + alpha * std::log(2.0) - corr * ln_2l) / (-ln_l);
    return eps_plus > eps_minus ? eps_plus : eps_minus;
}

}  // namespace ubiq
