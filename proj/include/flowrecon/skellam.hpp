#pragma once

#include <stdexcept>
#include <vector>

namespace flowrecon::skellam {

/// Intensities of the one-tick toy flow, events per second. The lambda_m
/// rates are the intensities of price-moving market orders per side.
struct SkellamParams {
    double lambda_lc_plus{0};
    double lambda_lc_minus{0};
    double lambda_m_plus{0};
    double lambda_m_minus{0};
    double rho_agg{0};  // fraction of market orders that move the price

    double up_rate() const { return lambda_lc_plus + lambda_m_plus; }
    double down_rate() const { return lambda_lc_minus + lambda_m_minus; }
    double rho_plus() const;  // fraction of buy market orders

    void validate() const;
};

enum class TradeSide { Buy, Sell };

/// Scaled modified Bessel functions e^-x I_k(x) for k = 0..kmax, by downward
/// (Miller) recurrence normalized with e^x = I_0 + 2 sum I_k.
std::vector<double> bessel_i_scaled(double x, int kmax);

/// CDF of the difference of two independent Poisson counts with means
/// (mu1, mu2): P(N1 - N2 <= n). Absolute error <= 1e-12.
double skellam_cdf(long long n, double mu1, double mu2);

double poisson_cdf(long long n, double mu);

/// Probability a trade is correctly signed by a quote anterior to its book
/// update, gap = delta - delta_lr > 0 in seconds.
double p_before(TradeSide side, const SkellamParams& params, double gap);

/// Posterior-quote case, gap = delta_lr - delta > 0. Aggressive trades carry
/// their own one-tick impact in the window.
double p_after(TradeSide side, const SkellamParams& params, double gap, bool aggressive);

/// Signing performance for a deterministic reporting lag delta. At
/// delta_lr == delta the quote is taken as instantaneous and the value is 1.
double p_deterministic(const SkellamParams& params, double delta, double delta_lr);

struct LagDensity {
    enum class Kind { Dirac, Gaussian, Empirical };

    Kind kind{Kind::Dirac};
    double dirac_value{0};
    double mean{0};
    double sd{0};
    std::vector<double> edges;    // bin edges, size() == weights.size() + 1
    std::vector<double> weights;  // probability mass per bin

    static LagDensity dirac(double value);
    static LagDensity gaussian(double mean, double sd);
    static LagDensity empirical(std::vector<double> edges, std::vector<double> masses);
    static LagDensity uniform(double lo, double hi);

    void validate() const;
    double support_lo() const;
    double support_hi() const;
};

/// Expected signing performance under a random reporting lag, Dirac densities
/// reduce to the deterministic value; quadrature tolerance 1e-8.
double p_expected(const SkellamParams& params, const LagDensity& f_delta, double delta_lr);

struct CalibrationPoint {
    double delta_lr{0};
    double accuracy{0};
};

struct CalibrationResult {
    SkellamParams params;
    double residual_norm{0};
    bool degenerate{false};  // fitted intensities collapsed to ~0
    int iterations{0};
};

class CalibrationError : public std::runtime_error {
public:
    CalibrationError(std::string what, CalibrationResult best)
        : std::runtime_error(std::move(what)), best_(std::move(best)) {}
    const CalibrationResult& best() const { return best_; }

private:
    CalibrationResult best_;
};

/// Unweighted least squares fit of the toy-model curve to an empirical
/// accuracy-vs-lag sweep, box-constrained via log/logit transforms.
CalibrationResult calibrate(const std::vector<CalibrationPoint>& curve,
                            const LagDensity& f_delta, const SkellamParams& init);

}  // namespace flowrecon::skellam
