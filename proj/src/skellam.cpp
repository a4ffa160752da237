#include "flowrecon/skellam.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "flowrecon/optim.hpp"

namespace flowrecon::skellam {

double SkellamParams::rho_plus() const {
    double denom = lambda_m_plus + lambda_m_minus;
    if (denom <= 0.0) throw std::domain_error("lambda_m_plus + lambda_m_minus must be positive");
    return lambda_m_plus / denom;
}

void SkellamParams::validate() const {
    for (double r : {lambda_lc_plus, lambda_lc_minus, lambda_m_plus, lambda_m_minus}) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw std::domain_error("rates must be finite, >= 0");
    }
    if (!(rho_agg >= 0.0 && rho_agg <= 1.0)) throw std::domain_error("rho_agg must be in [0,1]");
    (void)rho_plus();
}

std::vector<double> bessel_i_scaled(double x, int kmax) {
    std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    // Start far enough above both the largest requested order and the
    // argument for the downward recurrence to have converged.
    double top = std::max(static_cast<double>(kmax), x);
    int start = static_cast<int>(top + 20.0 + 12.0 * std::sqrt(top));
    double above = 0.0;   // I_{m+1} (unnormalized)
    double current = 1e-300;  // I_m
    double norm = 0.0;
    for (int m = start; m >= 1; --m) {
        double below = above + (2.0 * m / x) * current;
        if (m - 1 <= kmax) out[static_cast<std::size_t>(m - 1)] = below;
        above = current;
        current = below;
        if (m - 1 >= 1) norm += 2.0 * current;
        if (std::abs(current) > 1e250) {  // rescale to avoid overflow
            const double scale = 1e-250;
            above *= scale;
            current *= scale;
            norm *= scale;
            for (auto& v : out) v *= scale;
        }
    }
    norm += current;  // I_0 term; sum now equals e^x up to the seed scale
    for (auto& v : out) v /= norm;
    return out;
}

double poisson_cdf(long long n, double mu) {
    if (mu < 0.0) throw std::domain_error("poisson_cdf: negative mean");
    if (n < 0) return 0.0;
    if (mu == 0.0) return 1.0;
    double sum = 0.0;
    for (long long k = n; k >= 0; --k) {
        double lt = -mu + static_cast<double>(k) * std::log(mu) -
                    std::lgamma(static_cast<double>(k) + 1.0);
        double t = std::exp(lt);
        sum += t;
        if (t < sum * 1e-18) break;
    }
    return std::min(sum, 1.0);
}

namespace {

// log pmf of the Skellam distribution at k, given precomputed scaled Bessel
// values ib[|k|] = e^-x I_|k|(x) with x = 2 sqrt(mu1 mu2).
double log_pmf(long long k, double base, double half_log_ratio,
               const std::vector<double>& ib) {
    auto idx = static_cast<std::size_t>(k < 0 ? -k : k);
    if (idx >= ib.size() || ib[idx] <= 0.0) return -std::numeric_limits<double>::infinity();
    return base + static_cast<double>(k) * half_log_ratio + std::log(ib[idx]);
}

}  // namespace

double skellam_cdf(long long n, double mu1, double mu2) {
    if (mu1 < 0.0 || mu2 < 0.0 || !std::isfinite(mu1) || !std::isfinite(mu2))
        throw std::domain_error("skellam_cdf: means must be finite and >= 0");
    if (mu1 == 0.0 && mu2 == 0.0) return n >= 0 ? 1.0 : 0.0;
    if (mu2 == 0.0) return poisson_cdf(n, mu1);                       // difference = +N1
    if (mu1 == 0.0) return n >= 0 ? 1.0 : 1.0 - poisson_cdf(-n - 1, mu2);  // difference = -N2

    const double x = 2.0 * std::sqrt(mu1 * mu2);
    // e^{-(mu1+mu2)} e^{x} = e^{-(sqrt(mu1)-sqrt(mu2))^2} keeps terms bounded.
    const double base = -(mu1 + mu2) + x;
    const double half_log_ratio = 0.5 * (std::log(mu1) - std::log(mu2));
    const double mean = mu1 - mu2;

    int kmax = static_cast<int>(std::llabs(n)) + 64 +
               static_cast<int>(8.0 * std::sqrt(mu1 + mu2) + std::abs(mean));
    auto ib = [&](int km) { return bessel_i_scaled(x, km); };

    // Sum the smaller tail, walking away from the boundary term.
    bool lower = static_cast<double>(n) < mean;
    for (int attempt = 0; attempt < 8; ++attempt) {
        auto bess = ib(kmax);
        double sum = 0.0;
        bool converged = false;
        if (lower) {
            for (long long k = n;; --k) {
                if (static_cast<std::size_t>(std::llabs(k)) >= bess.size()) break;
                double t = std::exp(log_pmf(k, base, half_log_ratio, bess));
                sum += t;
                if (t <= (sum + 1e-300) * 1e-18) {
                    converged = true;
                    break;
                }
            }
            if (converged) return std::min(sum, 1.0);
        } else {
            for (long long k = n + 1;; ++k) {
                if (static_cast<std::size_t>(std::llabs(k)) >= bess.size()) break;
                double t = std::exp(log_pmf(k, base, half_log_ratio, bess));
                sum += t;
                if (t <= (sum + 1e-300) * 1e-18) {
                    converged = true;
                    break;
                }
            }
            if (converged) return std::clamp(1.0 - sum, 0.0, 1.0);
        }
        kmax *= 2;
    }
    throw std::runtime_error("skellam_cdf: tail sum failed to converge");
}

double p_before(TradeSide side, const SkellamParams& params, double gap) {
    if (gap < 0.0) throw std::domain_error("p_before: negative gap");
    double up = params.up_rate() * gap;
    double down = params.down_rate() * gap;
    return side == TradeSide::Buy ? skellam_cdf(0, down, up) : skellam_cdf(0, up, down);
}

double p_after(TradeSide side, const SkellamParams& params, double gap, bool aggressive) {
    if (gap < 0.0) throw std::domain_error("p_after: negative gap");
    double up = params.up_rate() * gap;
    double down = params.down_rate() * gap;
    if (!aggressive) {
        // The posterior non-impacting case mirrors the anterior case with
        // sides exchanged.
        return side == TradeSide::Buy ? skellam_cdf(0, up, down) : skellam_cdf(0, down, up);
    }
    return side == TradeSide::Buy ? skellam_cdf(-1, up, down) : skellam_cdf(-1, down, up);
}

double p_deterministic(const SkellamParams& params, double delta, double delta_lr) {
    const double d = delta - delta_lr;
    if (d == 0.0) return 1.0;  // instantaneous quote, no interfering events
    const double rho_plus = params.rho_plus();
    if (d > 0.0) {
        return rho_plus * p_before(TradeSide::Buy, params, d) +
               (1.0 - rho_plus) * p_before(TradeSide::Sell, params, d);
    }
    const double gap = -d;
    double passive = rho_plus * p_after(TradeSide::Buy, params, gap, false) +
                     (1.0 - rho_plus) * p_after(TradeSide::Sell, params, gap, false);
    double aggressive = rho_plus * p_after(TradeSide::Buy, params, gap, true) +
                        (1.0 - rho_plus) * p_after(TradeSide::Sell, params, gap, true);
    return (1.0 - params.rho_agg) * passive + params.rho_agg * aggressive;
}

LagDensity LagDensity::dirac(double value) {
    LagDensity d;
    d.kind = Kind::Dirac;
    d.dirac_value = value;
    return d;
}

LagDensity LagDensity::gaussian(double mean, double sd) {
    LagDensity d;
    d.kind = Kind::Gaussian;
    d.mean = mean;
    d.sd = sd;
    return d;
}

LagDensity LagDensity::empirical(std::vector<double> edges, std::vector<double> masses) {
    LagDensity d;
    d.kind = Kind::Empirical;
    d.edges = std::move(edges);
    d.weights = std::move(masses);
    d.validate();
    return d;
}

LagDensity LagDensity::uniform(double lo, double hi) {
    return empirical({lo, hi}, {1.0});
}

void LagDensity::validate() const {
    switch (kind) {
        case Kind::Dirac:
            return;
        case Kind::Gaussian:
            if (!(sd > 0.0) || !std::isfinite(mean)) throw std::domain_error("bad gaussian lag");
            return;
        case Kind::Empirical: {
            if (edges.size() != weights.size() + 1 || weights.empty())
                throw std::domain_error("empirical lag density: bad shape");
            for (std::size_t i = 0; i + 1 < edges.size(); ++i)
                if (!(edges[i] < edges[i + 1]))
                    throw std::domain_error("empirical lag density: edges not increasing");
            double total = std::accumulate(weights.begin(), weights.end(), 0.0);
            if (std::abs(total - 1.0) > 1e-9)
                throw std::domain_error("empirical lag density: masses must sum to 1");
            return;
        }
    }
}

double LagDensity::support_lo() const {
    switch (kind) {
        case Kind::Dirac: return dirac_value;
        case Kind::Gaussian: return mean - 8.0 * sd;
        case Kind::Empirical: return edges.front();
    }
    return 0.0;
}

double LagDensity::support_hi() const {
    switch (kind) {
        case Kind::Dirac: return dirac_value;
        case Kind::Gaussian: return mean + 8.0 * sd;
        case Kind::Empirical: return edges.back();
    }
    return 0.0;
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = simpson(a, b, fa, fm, fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Integrates over [a, b], splitting at the integrand discontinuity point if
// it falls inside.
double integrate_split(const std::function<double(double)>& f, double a, double b, double split,
                       double tol) {
    if (split > a && split < b)
        return integrate(f, a, split, tol * 0.5) + integrate(f, split, b, tol * 0.5);
    return integrate(f, a, b, tol);
}

}  // namespace

double p_expected(const SkellamParams& params, const LagDensity& f_delta, double delta_lr) {
    f_delta.validate();
    const double tol = 1e-8;
    switch (f_delta.kind) {
        case LagDensity::Kind::Dirac:
            return p_deterministic(params, f_delta.dirac_value, delta_lr);
        case LagDensity::Kind::Gaussian: {
            const double mean = f_delta.mean, sd = f_delta.sd;
            auto integrand = [&](double u) {
                double z = (u - mean) / sd;
                double pdf = std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
                return p_deterministic(params, u, delta_lr) * pdf;
            };
            return integrate_split(integrand, mean - 8.0 * sd, mean + 8.0 * sd, delta_lr, tol);
        }
        case LagDensity::Kind::Empirical: {
            double total = 0.0;
            for (std::size_t i = 0; i < f_delta.weights.size(); ++i) {
                double a = f_delta.edges[i], b = f_delta.edges[i + 1];
                double density = f_delta.weights[i] / (b - a);
                if (density == 0.0) continue;
                auto integrand = [&](double u) {
                    return p_deterministic(params, u, delta_lr) * density;
                };
                total += integrate_split(integrand, a, b, delta_lr, tol);
            }
            return total;
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

constexpr double kRateFloor = 1e-8;
constexpr double kRateCeil = 1e4;

double clamp_rate(double r) { return std::clamp(r, kRateFloor, kRateCeil); }

SkellamParams decode(const std::vector<double>& x) {
    SkellamParams p;
    p.lambda_lc_plus = clamp_rate(std::exp(x[0]));
    p.lambda_lc_minus = clamp_rate(std::exp(x[1]));
    p.lambda_m_plus = clamp_rate(std::exp(x[2]));
    p.lambda_m_minus = clamp_rate(std::exp(x[3]));
    p.rho_agg = 1.0 / (1.0 + std::exp(-x[4]));
    return p;
}

std::vector<double> encode(const SkellamParams& p) {
    auto safe_log = [](double v) { return std::log(clamp_rate(v)); };
    double rho = std::clamp(p.rho_agg, 1e-6, 1.0 - 1e-6);
    return {safe_log(p.lambda_lc_plus), safe_log(p.lambda_lc_minus), safe_log(p.lambda_m_plus),
            safe_log(p.lambda_m_minus), std::log(rho / (1.0 - rho))};
}

}  // namespace

CalibrationResult calibrate(const std::vector<CalibrationPoint>& curve,
                            const LagDensity& f_delta, const SkellamParams& init) {
    if (curve.size() < 5)
        throw std::invalid_argument("calibrate: need at least as many points as parameters (5)");
    init.validate();

    auto objective = [&](const std::vector<double>& x) {
        SkellamParams p = decode(x);
        double ss = 0.0;
        for (const auto& pt : curve) {
            double r = p_expected(p, f_delta, pt.delta_lr) - pt.accuracy;
            ss += r * r;
        }
        return ss;
    };

    auto nm = optim::nelder_mead(objective, encode(init), 0.5, 1e-12, 4000);

    CalibrationResult result;
    result.params = decode(nm.x);
    result.residual_norm = std::sqrt(nm.value);
    result.iterations = nm.iterations;
    double total_rate = result.params.up_rate() + result.params.down_rate();
    result.degenerate = total_rate <= 16.0 * kRateFloor;
    if (!nm.converged) throw CalibrationError("calibrate: optimizer did not converge", result);
    return result;
}

}  // namespace flowrecon::skellam
