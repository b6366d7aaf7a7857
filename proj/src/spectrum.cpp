#include "ubiq/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "ubiq/errors.hpp"

namespace ubiq {

namespace {

// log sum_k mu(I_{j,k})^q over a stored generation.
double log_partition_sum(std::span<const double> gen, double q) {
    double mmin = gen[0], mmax = gen[0];
    for (double v : gen) {
        if (v < mmin) mmin = v;
        if (v > mmax) mmax = v;
    }
    if (q < 0.0 && !std::isfinite(mmin))
        throw std::domain_error("partition sum: q < 0 needs full support (zero-mass box found)");
    const double top = q >= 0.0 ? q * mmax : q * mmin;
    double s = 0.0;
    for (double v : gen) s += std::exp(q * v - top);
    return top + std::log(s);
}

}  // namespace

double partition_exponent(const BoxMeasure& mu, double q, int j) {
    if (j < 1) throw std::invalid_argument("partition_exponent: j must be >= 1");
    const auto gen = mu.generation(j);
    return -log_partition_sum(gen, q) / (j * std::log(mu.geometry().c));
}

double SpectrumTable::concavity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < q_grid.size(); ++i) {
        const double h1 = q_grid[i] - q_grid[i - 1];
        const double h2 = q_grid[i + 1] - q_grid[i];
        const double second = (tau[i + 1] - tau[i]) / h2 - (tau[i] - tau[i - 1]) / h1;
        if (second > worst) worst = second;
    }
    return worst;
}

SpectrumTable tau_fit(const BoxMeasure& mu, const std::vector<double>& q_grid, int j_min, int j_max) {
    if (j_min < 1 || j_max > mu.stored_depth() || j_max < j_min)
        throw std::invalid_argument("tau_fit: j window outside stored depth");
    if (j_max - j_min + 1 < 4)
        throw std::invalid_argument("tau_fit: need at least 4 scales in the window");
    if (q_grid.empty()) throw std::invalid_argument("tau_fit: empty q grid");

    SpectrumTable t;
    t.q_grid = q_grid;
    for (int j = j_min; j <= j_max; ++j) t.j_values.push_back(j);
    const double log_c = std::log(mu.geometry().c);

    std::vector<double> xs(t.j_values.begin(), t.j_values.end());
    t.tau_j.resize(q_grid.size());
    t.tau.resize(q_grid.size());
    t.fits.resize(q_grid.size());
    std::vector<double> ys(t.j_values.size());
    for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
        auto& row = t.tau_j[qi];
        row.resize(t.j_values.size());
        for (std::size_t ji = 0; ji < t.j_values.size(); ++ji) {
            const int j = t.j_values[ji];
            const double lps = log_partition_sum(mu.generation(j), q_grid[qi]);
            ys[ji] = -lps / log_c;        // = j * tau_j(q)
            row[ji] = ys[ji] / j;
        }
        const LinearFit f = linear_fit(xs, ys);
        t.fits[qi] = f;
        t.tau[qi] = f.slope;
    }
    return t;
}

void legendre(SpectrumTable& table, const std::vector<double>& alpha_grid) {
    if (table.tau.size() != table.q_grid.size() || table.q_grid.size() < 2)
        throw std::invalid_argument("legendre: tau must be fitted on a grid of >= 2 points");
    double s_min = std::numeric_limits<double>::infinity();
    double s_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < table.q_grid.size(); ++i) {
        const double s =
            (table.tau[i + 1] - table.tau[i]) / (table.q_grid[i + 1] - table.q_grid[i]);
        s_min = std::min(s_min, s);
        s_max = std::max(s_max, s);
    }
    table.alpha_grid = alpha_grid;
    table.tau_star.assign(alpha_grid.size(), 0.0);
    for (std::size_t ai = 0; ai < alpha_grid.size(); ++ai) {
        const double a = alpha_grid[ai];
        const double tol = 1e-9 * (1.0 + std::abs(a));
        if (a < s_min - tol || a > s_max + tol) {
            table.tau_star[ai] = neg_inf;
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t qi = 0; qi < table.q_grid.size(); ++qi)
            best = std::min(best, a * table.q_grid[qi] - table.tau[qi]);
        table.tau_star[ai] = best;
    }
}

double multinomial_tau(const MultinomialSpec& spec, double q) {
    double tau = 0.0;
    for (const auto& row : spec.weights) {
        double z = 0.0;
        for (double w : row) z += std::pow(w, q);
        tau -= std::log(z) / std::log(spec.c);
    }
    return tau;
}

double multinomial_tau_prime(const MultinomialSpec& spec, double q) {
    double dtau = 0.0;
    for (const auto& row : spec.weights) {
        double z = 0.0, zl = 0.0;
        for (double w : row) {
            const double wq = std::pow(w, q);
            z += wq;
            zl += wq * std::log(w);
        }
        dtau -= zl / (z * std::log(spec.c));
    }
    return dtau;
}

double multinomial_alpha1(const MultinomialSpec& spec) { return multinomial_tau_prime(spec, 1.0); }

DimFormulaResult dim_formula(const DimFormulaInputs& in) {
    if (!(in.beta > 0.0 && in.beta <= in.d))
        throw std::invalid_argument("dim_formula: beta outside (0, d]");
    if (!(in.rho > 0.0 && in.rho <= 1.0))
        throw std::invalid_argument("dim_formula: rho outside (0, 1]");
    if (!(in.delta >= 1.0)) throw std::invalid_argument("dim_formula: delta must be >= 1");
    DimFormulaResult r;
    const double mixed = (in.d * (1.0 - in.rho) + in.rho * in.beta) / in.delta;
    r.D = std::min(mixed, in.beta);
    r.delta_star = (in.d * (1.0 - in.rho) + in.rho * in.beta) / in.beta;
    r.saturated = in.delta <= r.delta_star;
    return r;
}

std::optional<double> theorem1_upper_bound(double tau_star_alpha, double rho, double delta, int d) {
    if (!(rho > 0.0 && rho <= 1.0))
        throw std::invalid_argument("theorem1_upper_bound: rho outside (0, 1]");
    if (!(delta >= 1.0)) throw std::invalid_argument("theorem1_upper_bound: delta must be >= 1");
    if (tau_star_alpha < 0.0) return std::nullopt;  // the conditioned limsup set is empty
    const double mixed = (d * (1.0 - rho) + rho * tau_star_alpha) / delta;
    return std::min(mixed, tau_star_alpha);
}

}  // namespace ubiq
