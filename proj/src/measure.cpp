#include "ubiq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "ubiq/errors.hpp"
#include "ubiq/rng.hpp"
#include "ubiq/stats.hpp"

namespace ubiq {

namespace {

// Storage budget across all generations (doubles).
constexpr std::uint64_t kStorageBudget = 9ULL << 20;
constexpr std::uint64_t kEnumBudget = 1ULL << 22;

std::uint64_t tuple_count(int c, int d) {
    std::uint64_t t = 1;
    for (int i = 0; i < d; ++i) t *= static_cast<std::uint64_t>(c);
    return t;
}

// Deepest generation whose full tree fits the storage budget.
int feasible_store_depth(int c, int d, int J_max) {
    const std::uint64_t cd = tuple_count(c, d);
    std::uint64_t total = 1, gen = 1;
    int j = 0;
    while (j < J_max) {
        if (gen > (kStorageBudget - total) / cd) break;
        gen *= cd;
        total += gen;
        ++j;
    }
    return j;
}

int ceil_log_base(double inv_r, int c) {
    // smallest t >= 0 with c^t >= inv_r
    int t = 0;
    double p = 1.0;
    while (p < inv_r) {
        p *= c;
        ++t;
        if (t > 4096) throw std::domain_error("ceil_log_base: radius underflow");
    }
    return t;
}

}  // namespace

std::string to_string(MeasureKind k) {
    switch (k) {
        case MeasureKind::multinomial: return "multinomial";
        case MeasureKind::cascade: return "cascade";
        case MeasureKind::cpc: return "cpc";
        case MeasureKind::gibbs: return "gibbs";
    }
    return "?";
}

MeasureKind measure_kind_from_string(const std::string& s) {
    if (s == "multinomial") return MeasureKind::multinomial;
    if (s == "cascade") return MeasureKind::cascade;
    if (s == "cpc") return MeasureKind::cpc;
    if (s == "gibbs") return MeasureKind::gibbs;
    throw std::invalid_argument("unknown measure kind: " + s);
}

void MultinomialSpec::validate() const {
    if (c < 2 || d < 1) throw std::invalid_argument("MultinomialSpec: need c >= 2, d >= 1");
    if (static_cast<int>(weights.size()) != d)
        throw std::invalid_argument("MultinomialSpec: need one weight row per dimension");
    for (const auto& row : weights) {
        if (static_cast<int>(row.size()) != c)
            throw std::invalid_argument("MultinomialSpec: weight row size must equal c");
        double s = 0.0;
        for (double w : row) {
            if (!(w > 0.0))
                throw std::invalid_argument("MultinomialSpec: weights must be positive (full support)");
            s += w;
        }
        if (std::abs(s - 1.0) > 1e-12)
            throw std::invalid_argument("MultinomialSpec: weight row must sum to 1");
    }
}

MultinomialSpec MultinomialSpec::uniform(int c, int d) {
    MultinomialSpec s;
    s.c = c;
    s.d = d;
    s.weights.assign(static_cast<std::size_t>(d),
                     std::vector<double>(static_cast<std::size_t>(c), 1.0 / c));
    return s;
}

bool MultinomialSpec::is_uniform() const {
    for (const auto& row : weights)
        for (double w : row)
            if (std::abs(w - 1.0 / c) > 1e-15) return false;
    return true;
}

double MultinomialSpec::log_weight(int dim, int digit) const {
    return std::log(weights[static_cast<std::size_t>(dim)][static_cast<std::size_t>(digit)]);
}

double MultinomialSpec::log_box_mass(int j, std::span<const std::int64_t> k) const {
    double lm = 0.0;
    for (int i = 0; i < d; ++i) {
        std::int64_t v = k[static_cast<std::size_t>(i)];
        for (int m = 0; m < j; ++m) {
            lm += log_weight(i, static_cast<int>(v % c));
            v /= c;
        }
    }
    return lm;
}

MultinomialSpec tilt_multinomial(const MultinomialSpec& spec, double q) {
    spec.validate();
    MultinomialSpec out = spec;
    for (auto& row : out.weights) {
        double z = 0.0;
        for (double w : row) z += std::pow(w, q);
        for (double& w : row) w = std::pow(w, q) / z;
    }
    return out;
}

void CascadeGenerator::validate() const {
    switch (kind) {
        case Kind::constant:
            return;
        case Kind::gaussian:
            if (!(variance >= 0.0)) throw std::invalid_argument("CascadeGenerator: variance < 0");
            return;
        case Kind::log_discrete: {
            if (values.empty() || values.size() != probs.size())
                throw std::invalid_argument("CascadeGenerator: values/probs mismatch");
            double s = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (!(values[i] > 0.0)) throw std::invalid_argument("CascadeGenerator: values must be > 0");
                if (!(probs[i] >= 0.0)) throw std::invalid_argument("CascadeGenerator: probs must be >= 0");
                s += probs[i];
            }
            if (std::abs(s - 1.0) > 1e-12)
                throw std::invalid_argument("CascadeGenerator: probs must sum to 1");
            return;
        }
    }
}

double CascadeGenerator::log_mgf(double q) const {
    switch (kind) {
        case Kind::constant:
            return q * a;
        case Kind::gaussian:
            return q * mean + q * q * variance / 2.0;
        case Kind::log_discrete: {
            double m = neg_inf;
            std::vector<double> terms;
            terms.reserve(values.size());
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (probs[i] == 0.0) continue;
                terms.push_back(std::log(probs[i]) + q * std::log(values[i]));
            }
            (void)m;
            return log_sum_exp(terms);
        }
    }
    return 0.0;
}

double CascadeGenerator::log_mean_exp() const { return log_mgf(1.0); }

void CascadeSpec::validate() const {
    if (c < 2 || d < 1) throw std::invalid_argument("CascadeSpec: need c >= 2, d >= 1");
    if (depth < 1) throw std::invalid_argument("CascadeSpec: depth must be >= 1");
    gen.validate();
    if (!std::isfinite(gen.log_mean_exp()))
        throw construction_error("CascadeSpec: E[e^X] not finite");
    // theta'(1-) > 0 (non-degeneracy); finite-difference check suffices.
    const double h = 1e-6;
    if (!((theta(1.0) - theta(1.0 - h)) / h > 0.0))
        throw construction_error("CascadeSpec: degenerate cascade, theta'(1-) <= 0");
}

double CascadeSpec::L(double q) const { return d * std::log(c) + gen.log_mgf(q); }

double CascadeSpec::theta(double q) const { return (q * L(1.0) - L(q)) / std::log(c); }

void CpcSpec::validate() const {
    if (!(xi > 0.0)) throw std::invalid_argument("CpcSpec: xi must be > 0");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("CpcSpec: eps outside (0,1)");
    if (3.0 * expected_points_unit() > point_budget)
        throw resource_error("CpcSpec: eps too small for the configured point budget");
}

double GibbsPotential::eval(std::span<const double> x, int c, int d) const {
    switch (kind) {
        case Kind::constant:
            return value;
        case Kind::piecewise_gen1: {
            std::uint64_t cell = 0;
            for (int i = d - 1; i >= 0; --i) {
                auto digit = static_cast<std::uint64_t>(x[static_cast<std::size_t>(i)] * c);
                if (digit >= static_cast<std::uint64_t>(c)) digit = static_cast<std::uint64_t>(c) - 1;
                cell = cell * static_cast<std::uint64_t>(c) + digit;
            }
            return cell_values[cell];
        }
        case Kind::cosine: {
            double s = 0.0;
            for (double xi_ : x) s += std::cos(6.283185307179586476925286766559 * xi_);
            return value * s;
        }
        case Kind::custom:
            return fn(x);
    }
    return 0.0;
}

void GibbsSpec::validate() const {
    if (c < 2 || d < 1) throw std::invalid_argument("GibbsSpec: need c >= 2, d >= 1");
    if (depth < 1) throw std::invalid_argument("GibbsSpec: depth must be >= 1");
    if (phi.kind == GibbsPotential::Kind::piecewise_gen1 &&
        phi.cell_values.size() != tuple_count(c, d))
        throw std::invalid_argument("GibbsSpec: piecewise potential needs c^d cell values");
    if (phi.kind == GibbsPotential::Kind::custom && !phi.fn)
        throw std::invalid_argument("GibbsSpec: custom potential missing callable");
}

std::uint64_t BoxMeasure::path_of(int c, int j, std::span<const std::int64_t> k) {
    const int d = static_cast<int>(k.size());
    const std::uint64_t cd = tuple_count(c, d);
    std::uint64_t path = 0;
    std::uint64_t scale = pow_int(c, j);
    for (int m = 0; m < j; ++m) {
        scale /= static_cast<std::uint64_t>(c);
        std::uint64_t tuple = 0;
        for (int i = d - 1; i >= 0; --i) {
            const auto digit = static_cast<std::uint64_t>(
                (static_cast<std::uint64_t>(k[static_cast<std::size_t>(i)]) / scale) %
                static_cast<std::uint64_t>(c));
            tuple = tuple * static_cast<std::uint64_t>(c) + digit;
        }
        path = path * cd + tuple;
    }
    return path;
}

std::span<const double> BoxMeasure::generation(int j) const {
    if (j < 0 || j > J_store_)
        throw resolution_error("BoxMeasure::generation: generation not stored");
    return gens_[static_cast<std::size_t>(j)];
}

double BoxMeasure::log_mass(const CAdicBox& b) const {
    if (b.c != geom_.c || b.dim() != geom_.d)
        throw std::invalid_argument("BoxMeasure::log_mass: grid mismatch");
    return log_mass_k(b.j, b.k);
}

double BoxMeasure::log_mass_k(int j, std::span<const std::int64_t> k) const {
    if (j < 0 || j > J_max_)
        throw resolution_error("BoxMeasure::log_mass: generation beyond J_max");
    if (j <= J_store_)
        return gens_[static_cast<std::size_t>(j)][BoxMeasure::path_of(geom_.c, j, k)];
    if (mn_) return mn_->log_box_mass(j, k) + total_log_;
    throw resolution_error("BoxMeasure::log_mass: generation beyond stored depth");
}

const MultinomialSpec& BoxMeasure::multinomial_spec() const {
    if (!mn_) throw std::logic_error("BoxMeasure: not a multinomial measure");
    return *mn_;
}

LogMassInterval BoxMeasure::ball_mass(std::span<const double> center, double r, int margin) const {
    if (!(r > 0.0)) throw std::invalid_argument("ball_mass: radius must be positive");
    if (margin < 0) throw std::invalid_argument("ball_mass: margin must be >= 0");
    const int base_depth = ceil_log_base(1.0 / r, geom_.c);
    if (base_depth + margin > J_max_)
        throw resolution_error("ball_mass: radius below measure resolution");
    const int J = std::min(J_max_, base_depth + margin);
    const std::int64_t n = static_cast<std::int64_t>(pow_int(geom_.c, J));

    struct Dim { std::int64_t lo_up, hi_up, lo_in, hi_in; };
    std::vector<Dim> dims(center.size());
    bool inner_empty = false;
    std::uint64_t count_up = 1;
    for (std::size_t i = 0; i < center.size(); ++i) {
        const double lo = center[i] - r;
        const double hi = center[i] + r;
        if (lo >= 1.0 || hi <= 0.0) return {neg_inf, neg_inf};
        Dim dm;
        dm.lo_up = lo <= 0.0 ? 0 : floor_scaled(lo, geom_.c, J);
        dm.hi_up = hi >= 1.0 ? n - 1 : ceil_scaled(hi, geom_.c, J) - 1;
        dm.hi_up = std::min(dm.hi_up, n - 1);
        if (dm.hi_up < dm.lo_up) return {neg_inf, neg_inf};
        dm.lo_in = lo <= 0.0 ? 0 : ceil_scaled(lo, geom_.c, J);
        dm.hi_in = hi >= 1.0 ? n - 1 : floor_scaled(hi, geom_.c, J) - 1;
        dm.hi_in = std::min(dm.hi_in, n - 1);
        if (dm.hi_in < dm.lo_in) inner_empty = true;
        const auto len = static_cast<std::uint64_t>(dm.hi_up - dm.lo_up + 1);
        if (count_up > kEnumBudget / len)
            throw resource_error("ball_mass: enumeration budget exceeded");
        count_up *= len;
        dims[i] = dm;
    }

    std::vector<double> up_terms, in_terms;
    up_terms.reserve(count_up);
    std::vector<std::int64_t> k(center.size());
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = dims[i].lo_up;
    for (;;) {
        const double lm = log_mass_k(J, k);
        up_terms.push_back(lm);
        if (!inner_empty) {
            bool in = true;
            for (std::size_t i = 0; i < k.size(); ++i)
                if (k[i] < dims[i].lo_in || k[i] > dims[i].hi_in) { in = false; break; }
            if (in) in_terms.push_back(lm);
        }
        std::size_t i = 0;
        for (; i < k.size(); ++i) {
            if (k[i] < dims[i].hi_up) { ++k[i]; break; }
            k[i] = dims[i].lo_up;
        }
        if (i == k.size()) break;
    }
    return {log_sum_exp(in_terms), log_sum_exp(up_terms)};
}

double BoxMeasure::additivity_defect() const {
    const std::uint64_t cd = tuple_count(geom_.c, geom_.d);
    double worst = 0.0;
    for (int j = 0; j < J_store_; ++j) {
        const auto& par = gens_[static_cast<std::size_t>(j)];
        const auto& chl = gens_[static_cast<std::size_t>(j) + 1];
        for (std::size_t p = 0; p < par.size(); ++p) {
            const double lse =
                log_sum_exp(std::span<const double>(chl.data() + p * cd, cd));
            worst = std::max(worst, std::abs(lse - par[p]));
        }
    }
    return worst;
}

BoxMeasure BoxMeasure::from_parts(GridGeometry geom, MeasureKind kind, int J_max,
                                  std::vector<std::vector<double>> gens,
                                  std::optional<MultinomialSpec> mn, std::uint64_t seed,
                                  std::string spec_json) {
    BoxMeasure m;
    m.geom_ = geom;
    m.kind_ = kind;
    m.J_max_ = J_max;
    m.J_store_ = static_cast<int>(gens.size()) - 1;
    m.gens_ = std::move(gens);
    m.mn_ = std::move(mn);
    m.seed_ = seed;
    m.total_log_ = m.gens_.at(0).at(0);
    m.spec_json_ = std::move(spec_json);
    return m;
}

BoxMeasure build_multinomial(const MultinomialSpec& spec, int J_max) {
    spec.validate();
    if (J_max < 0) throw std::invalid_argument("build_multinomial: J_max must be >= 0");
    const GridGeometry geom(spec.c, spec.d);
    const int J_store = feasible_store_depth(spec.c, spec.d, J_max);
    const std::uint64_t cd = tuple_count(spec.c, spec.d);

    // log weight of one digit tuple across all coordinates
    std::vector<double> tuple_logw(cd, 0.0);
    for (std::uint64_t t = 0; t < cd; ++t) {
        std::uint64_t v = t;
        for (int i = 0; i < spec.d; ++i) {
            tuple_logw[t] += spec.log_weight(i, static_cast<int>(v % static_cast<std::uint64_t>(spec.c)));
            v /= static_cast<std::uint64_t>(spec.c);
        }
    }

    std::vector<std::vector<double>> gens(static_cast<std::size_t>(J_store) + 1);
    gens[0] = {0.0};
    for (int j = 0; j < J_store; ++j) {
        const auto& par = gens[static_cast<std::size_t>(j)];
        auto& chl = gens[static_cast<std::size_t>(j) + 1];
        chl.resize(par.size() * cd);
        for (std::size_t p = 0; p < par.size(); ++p)
            for (std::uint64_t t = 0; t < cd; ++t)
                chl[p * cd + t] = par[p] + tuple_logw[t];
    }

    nlohmann::json js{{"c", spec.c}, {"d", spec.d}, {"weights", spec.weights}};
    return BoxMeasure::from_parts(geom, MeasureKind::multinomial, J_max, std::move(gens), spec, 0,
                                  js.dump());
}

BoxMeasure build_cascade(const CascadeSpec& spec) {
    spec.validate();
    const GridGeometry geom(spec.c, spec.d);
    const int n = spec.depth;
    if (feasible_store_depth(spec.c, spec.d, n) < n)
        throw resource_error("build_cascade: depth exceeds storage budget");
    const std::uint64_t cd = tuple_count(spec.c, spec.d);
    const CounterRng rng(spec.seed);
    const double log_norm = spec.gen.log_mean_exp() + spec.d * std::log(spec.c);

    // Birkhoff-style partial sums of the X draws along each path.
    std::vector<std::vector<double>> gens(static_cast<std::size_t>(n) + 1);
    gens[0] = {0.0};
    for (int j = 1; j <= n; ++j) {
        const auto& par = gens[static_cast<std::size_t>(j) - 1];
        auto& cur = gens[static_cast<std::size_t>(j)];
        cur.resize(par.size() * cd);
        for (std::size_t p = 0; p < cur.size(); ++p) {
            double x = 0.0;
            switch (spec.gen.kind) {
                case CascadeGenerator::Kind::constant:
                    x = spec.gen.a;
                    break;
                case CascadeGenerator::Kind::gaussian:
                    x = rng.gaussian(spec.gen.mean, std::sqrt(spec.gen.variance),
                                     static_cast<std::uint64_t>(j), p);
                    break;
                case CascadeGenerator::Kind::log_discrete: {
                    const double u = rng.uniform(static_cast<std::uint64_t>(j), p);
                    double acc = 0.0;
                    std::size_t pick = spec.gen.values.size() - 1;
                    for (std::size_t t = 0; t < spec.gen.probs.size(); ++t) {
                        acc += spec.gen.probs[t];
                        if (u < acc) { pick = t; break; }
                    }
                    x = std::log(spec.gen.values[pick]);
                    break;
                }
            }
            cur[p] = par[p / cd] + x;
        }
    }
    // Leaf masses, then coarser masses by upward summation.
    for (auto& v : gens[static_cast<std::size_t>(n)]) v -= n * log_norm;
    for (int j = n - 1; j >= 0; --j) {
        auto& cur = gens[static_cast<std::size_t>(j)];
        const auto& chl = gens[static_cast<std::size_t>(j) + 1];
        for (std::size_t p = 0; p < cur.size(); ++p)
            cur[p] = log_sum_exp(std::span<const double>(chl.data() + p * cd, cd));
    }

    nlohmann::json gj;
    switch (spec.gen.kind) {
        case CascadeGenerator::Kind::constant:
            gj = {{"kind", "constant"}, {"a", spec.gen.a}};
            break;
        case CascadeGenerator::Kind::gaussian:
            gj = {{"kind", "gaussian"}, {"mean", spec.gen.mean}, {"variance", spec.gen.variance}};
            break;
        case CascadeGenerator::Kind::log_discrete:
            gj = {{"kind", "log_discrete"}, {"values", spec.gen.values}, {"probs", spec.gen.probs}};
            break;
    }
    nlohmann::json js{{"c", spec.c}, {"d", spec.d}, {"depth", spec.depth},
                      {"seed", spec.seed}, {"generator", gj}};
    return BoxMeasure::from_parts(geom, MeasureKind::cascade, n, std::move(gens), std::nullopt,
                                  spec.seed, js.dump());
}

BoxMeasure build_cpc(const CpcSpec& spec, int J_max) {
    spec.validate();
    const int c = 2;
    const GridGeometry geom(c, 1);
    if (J_max < 1) throw std::invalid_argument("build_cpc: J_max must be >= 1");
    if (feasible_store_depth(c, 1, J_max) < J_max)
        throw resource_error("build_cpc: J_max exceeds storage budget");
    const CounterRng rng(spec.seed);

    // Poisson cloud on [-1,2] x [eps,1] under xi ds dlambda / (2 lambda^2).
    const double strip_mean = 3.0 * spec.expected_points_unit();
    const std::uint64_t npts = rng.poisson(strip_mean, 0x9e1b);
    const double inv_eps = 1.0 / spec.eps;
    struct Event { double t; int delta; };
    std::vector<Event> events;
    events.reserve(2 * npts);
    for (std::uint64_t i = 0; i < npts; ++i) {
        const double s = -1.0 + 3.0 * rng.uniform(1, i);
        const double u = rng.uniform(2, i);
        const double lambda = 1.0 / (inv_eps - u * (inv_eps - 1.0));
        const double a = s - lambda, b = s + lambda;
        if (b <= 0.0 || a >= 1.0) continue;
        events.push_back({std::max(a, 0.0), +1});
        events.push_back({std::min(b, 1.0), -1});
    }
    std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
        return x.t < y.t || (x.t == y.t && x.delta > y.delta);
    });

    // Piecewise-constant covering number on [0,1].
    struct Segment { double a, b; int n; };
    std::vector<Segment> segs;
    double prev = 0.0;
    int depth_now = 0;
    for (const auto& e : events) {
        if (e.t > prev) {
            segs.push_back({prev, e.t, depth_now});
            prev = e.t;
        }
        depth_now += e.delta;
    }
    if (prev < 1.0) segs.push_back({prev, 1.0, depth_now});

    const double log_prefactor = spec.xi * (2.718281828459045235 - 1.0) * std::log(spec.eps);
    const std::uint64_t leaves = pow_int(c, J_max);
    std::vector<std::vector<double>> gens(static_cast<std::size_t>(J_max) + 1);
    auto& leaf = gens[static_cast<std::size_t>(J_max)];
    leaf.resize(leaves);
    const double h = 1.0 / static_cast<double>(leaves);
    std::size_t si = 0;
    std::vector<double> terms;
    for (std::uint64_t k = 0; k < leaves; ++k) {
        const double a = static_cast<double>(k) * h;
        const double b = a + h;
        while (si > 0 && segs[si].a > a) --si;
        while (si + 1 < segs.size() && segs[si].b <= a) ++si;
        terms.clear();
        for (std::size_t t = si; t < segs.size() && segs[t].a < b; ++t) {
            const double len = std::min(segs[t].b, b) - std::max(segs[t].a, a);
            if (len > 0.0) terms.push_back(std::log(len) + static_cast<double>(segs[t].n));
        }
        leaf[k] = log_sum_exp(terms) + log_prefactor;
    }
    for (int j = J_max - 1; j >= 0; --j) {
        auto& cur = gens[static_cast<std::size_t>(j)];
        const auto& chl = gens[static_cast<std::size_t>(j) + 1];
        cur.resize(chl.size() / static_cast<std::uint64_t>(c));
        for (std::size_t p = 0; p < cur.size(); ++p)
            cur[p] = log_sum_exp(std::span<const double>(chl.data() + p * static_cast<std::uint64_t>(c),
                                                         static_cast<std::uint64_t>(c)));
    }
    if (spec.renormalize) {
        const double total = gens[0][0];
        for (auto& g : gens)
            for (auto& v : g) v -= total;
    }

    nlohmann::json js{{"xi", spec.xi}, {"eps", spec.eps}, {"seed", spec.seed},
                      {"renormalize", spec.renormalize}};
    return BoxMeasure::from_parts(geom, MeasureKind::cpc, J_max, std::move(gens), std::nullopt,
                                  spec.seed, js.dump());
}

BoxMeasure build_gibbs_finite(const GibbsSpec& spec, int J_max) {
    spec.validate();
    const GridGeometry geom(spec.c, spec.d);
    const int n = spec.depth;
    if (J_max < n) throw std::invalid_argument("build_gibbs_finite: J_max must be >= depth");
    if (feasible_store_depth(spec.c, spec.d, J_max) < J_max)
        throw resource_error("build_gibbs_finite: J_max exceeds storage budget");
    const std::uint64_t cd = tuple_count(spec.c, spec.d);
    const std::uint64_t leaves = [&] {
        std::uint64_t l = 1;
        for (int j = 0; j < n; ++j) l *= cd;
        return l;
    }();

    // Birkhoff sums S_n(phi) at the lower-left corner of each depth-n box,
    // under T(x) = c x mod 1 coordinatewise. A corner's orbit is the digit
    // shift of its path.
    std::vector<double> birkhoff(leaves, 0.0);
    const std::uint64_t scale = pow_int(spec.c, n);
    std::vector<double> x(static_cast<std::size_t>(spec.d));
    std::vector<std::int64_t> k(static_cast<std::size_t>(spec.d));
    for (std::uint64_t p = 0; p < leaves; ++p) {
        // decode path -> per-coordinate index
        std::uint64_t rem = p;
        std::fill(k.begin(), k.end(), 0);
        for (int m = 0; m < n; ++m) {
            const std::uint64_t tuple =
                (rem / [&] { std::uint64_t s = 1; for (int t = 0; t < n - 1 - m; ++t) s *= cd; return s; }()) % cd;
            std::uint64_t tv = tuple;
            for (int i = 0; i < spec.d; ++i) {
                k[static_cast<std::size_t>(i)] =
                    k[static_cast<std::size_t>(i)] * spec.c +
                    static_cast<std::int64_t>(tv % static_cast<std::uint64_t>(spec.c));
                tv /= static_cast<std::uint64_t>(spec.c);
            }
        }
        (void)rem;
        double s = 0.0;
        for (int m = 0; m < n; ++m) {
            // T^m corner: keep digits m+1..n of each coordinate
            std::uint64_t shift_scale = 1;
            for (int t = 0; t < n - m; ++t) shift_scale *= static_cast<std::uint64_t>(spec.c);
            for (int i = 0; i < spec.d; ++i) {
                const auto kk = static_cast<std::uint64_t>(k[static_cast<std::size_t>(i)]) % shift_scale;
                x[static_cast<std::size_t>(i)] =
                    static_cast<double>(kk) / static_cast<double>(shift_scale);
            }
            s += spec.phi.eval(x, spec.c, spec.d);
        }
        birkhoff[p] = s;
    }
    (void)scale;

    const double logZ = log_sum_exp(birkhoff);
    std::vector<std::vector<double>> gens(static_cast<std::size_t>(J_max) + 1);
    gens[static_cast<std::size_t>(n)].resize(leaves);
    for (std::uint64_t p = 0; p < leaves; ++p)
        gens[static_cast<std::size_t>(n)][p] = birkhoff[p] - logZ;
    // uniform remainder below depth n
    for (int j = n + 1; j <= J_max; ++j) {
        const auto& par = gens[static_cast<std::size_t>(j) - 1];
        auto& cur = gens[static_cast<std::size_t>(j)];
        cur.resize(par.size() * cd);
        const double drop = std::log(static_cast<double>(cd));
        for (std::size_t p = 0; p < cur.size(); ++p) cur[p] = par[p / cd] - drop;
    }
    for (int j = n - 1; j >= 0; --j) {
        auto& cur = gens[static_cast<std::size_t>(j)];
        const auto& chl = gens[static_cast<std::size_t>(j) + 1];
        cur.resize(chl.size() / cd);
        for (std::size_t p = 0; p < cur.size(); ++p)
            cur[p] = log_sum_exp(std::span<const double>(chl.data() + p * cd, cd));
    }

    nlohmann::json pj;
    switch (spec.phi.kind) {
        case GibbsPotential::Kind::constant: pj = {{"kind", "constant"}, {"value", spec.phi.value}}; break;
        case GibbsPotential::Kind::piecewise_gen1:
            pj = {{"kind", "piecewise_gen1"}, {"cell_values", spec.phi.cell_values}};
            break;
        case GibbsPotential::Kind::cosine: pj = {{"kind", "cosine"}, {"amplitude", spec.phi.value}}; break;
        case GibbsPotential::Kind::custom: pj = {{"kind", "custom"}}; break;
    }
    nlohmann::json js{{"c", spec.c}, {"d", spec.d}, {"depth", spec.depth}, {"potential", pj}};
    return BoxMeasure::from_parts(geom, MeasureKind::gibbs, J_max, std::move(gens), std::nullopt, 0,
                                  js.dump());
}

}  // namespace ubiq
