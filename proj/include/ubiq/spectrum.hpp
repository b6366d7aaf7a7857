#pragma once

#include <optional>
#include <vector>

#include "ubiq/measure.hpp"
#include "ubiq/stats.hpp"

namespace ubiq {

// tau_j(q) = -(1/j) log_c sum_k mu(I_{j,k})^q, computed by log-sum-exp over
// the stored generation. q < 0 requires full support.
double partition_exponent(const BoxMeasure& mu, double q, int j);

struct SpectrumTable {
    std::vector<double> q_grid;
    std::vector<int> j_values;
    std::vector<std::vector<double>> tau_j;  // [qi][ji]
    std::vector<double> tau;                 // fitted tau(q)
    std::vector<LinearFit> fits;             // per-q regression diagnostics
    std::vector<double> alpha_grid;
    std::vector<double> tau_star;            // -inf marks alpha outside the attained slope range

    // Largest concavity violation of the fitted tau over the grid (0 if concave).
    double concavity_defect() const;
};

// Windowed least-squares realization of the liminf: per q, the slope of
// -log_c sum mu(I_{j,k})^q against j over j in [j_min, j_max].
SpectrumTable tau_fit(const BoxMeasure& mu, const std::vector<double>& q_grid, int j_min, int j_max);

// Legendre transform over the finite q-grid: tau*(alpha) = min_q (alpha q -
// tau(q)). Alphas outside the attained chord-slope range get -inf; no
// extrapolation is performed.
void legendre(SpectrumTable& table, const std::vector<double>& alpha_grid);

// Closed forms for product multinomial measures (exact at every scale).
double multinomial_tau(const MultinomialSpec& spec, double q);
double multinomial_tau_prime(const MultinomialSpec& spec, double q);
// Entropy-type exponent at q=1: alpha = tau'(1) = sum_i sum_k -w log_c w,
// which equals tau*(alpha).
double multinomial_alpha1(const MultinomialSpec& spec);

struct DimFormulaInputs {
    double beta = 1.0;   // in (0, d]
    double rho = 1.0;    // in (0, 1]
    double delta = 1.0;  // >= 1
    int d = 1;
};

struct DimFormulaResult {
    double D = 0.0;
    double delta_star = 1.0;  // (d(1-rho)+rho beta)/beta
    bool saturated = false;   // delta <= delta_star
};

// D(beta,rho,delta) = min((d(1-rho)+rho beta)/delta, beta).
DimFormulaResult dim_formula(const DimFormulaInputs& in);

// min((d(1-rho)+rho t)/delta, t) for t = tau*(alpha) >= 0; nullopt when
// tau*(alpha) < 0 (the conditioned limsup set is empty).
std::optional<double> theorem1_upper_bound(double tau_star_alpha, double rho, double delta, int d);

}  // namespace ubiq
