#include "flowrecon/hawkes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "flowrecon/optim.hpp"

namespace flowrecon::hawkes {

void PointSeries::validate() const {
    if (!(end > start)) throw std::invalid_argument("point series: end must exceed start");
    double prev = start;
    for (double t : times) {
        if (!(t > prev))
            throw std::invalid_argument("point series: times must be strictly increasing");
        prev = t;
    }
    if (!times.empty() && times.back() > end)
        throw std::invalid_argument("point series: time beyond end of window");
}

PointSeries from_millis(const std::vector<std::int64_t>& times_ms, std::int64_t start_ms,
                        std::int64_t end_ms) {
    PointSeries s;
    s.start = static_cast<double>(start_ms) / 1000.0;
    s.end = static_cast<double>(end_ms) / 1000.0;
    s.times.reserve(times_ms.size());
    double prev = s.start - 1.0;
    for (std::size_t i = 0; i < times_ms.size(); ++i) {
        if (i > 0 && times_ms[i] < times_ms[i - 1])
            throw std::invalid_argument("from_millis: times must be non-decreasing");
        double t = static_cast<double>(times_ms[i]) / 1000.0;
        if (t <= prev) t = prev + 1e-6;  // spread ties by one microsecond
        s.times.push_back(t);
        prev = t;
    }
    if (!s.times.empty() && s.times.back() > s.end) s.end = s.times.back();
    s.validate();
    return s;
}

namespace {

// Shared core: events of `target` driven by kernel responses to events of
// `driver` (driver == target for self-excitation). Uses the standard
// recursive accumulator for the exponential kernel.
double log_likelihood_impl(const PointSeries& target, const PointSeries& driver,
                           const HawkesParams& p, bool self) {
    const double lambda0 = p.lambda0;
    const double alpha = p.alpha;
    const double beta = p.beta;
    if (!(lambda0 > 0) || alpha < 0 || !(beta > 0)) return -std::numeric_limits<double>::infinity();

    double ll = 0.0;
    if (self) {
        // A_i = sum_{j<i} exp(-beta (t_i - t_j)) via A_i = e^{-beta dt}(A_{i-1}+1).
        double acc = 0.0;
        double prev = 0.0;
        for (std::size_t i = 0; i < target.times.size(); ++i) {
            double t = target.times[i];
            if (i > 0) acc = std::exp(-beta * (t - prev)) * (acc + 1.0);
            prev = t;
            double lam = lambda0 + alpha * acc;
            if (!(lam > 0)) return -std::numeric_limits<double>::infinity();
            ll += std::log(lam);
        }
        for (double t : target.times)
            ll -= (alpha / beta) * (1.0 - std::exp(-beta * (target.end - t)));
    } else {
        // Merge walk: advance the driver accumulator to each target event.
        double acc = 0.0;           // sum over driver events strictly before current time
        double acc_time = driver.start;
        std::size_t j = 0;
        for (double t : target.times) {
            while (j < driver.times.size() && driver.times[j] < t) {
                acc = acc * std::exp(-beta * (driver.times[j] - acc_time)) + 1.0;
                acc_time = driver.times[j];
                ++j;
            }
            double lam = lambda0 + alpha * acc * std::exp(-beta * (t - acc_time));
            if (!(lam > 0)) return -std::numeric_limits<double>::infinity();
            ll += std::log(lam);
        }
        for (double s : driver.times) {
            if (s >= target.end) break;
            ll -= (alpha / beta) * (1.0 - std::exp(-beta * (target.end - s)));
        }
    }
    ll -= lambda0 * target.horizon();
    return ll;
}

// Log-likelihood plus its gradient in (lambda0, alpha, beta), one pass.
// Tracks A = sum exp(-beta u) and B = dA/d(-beta) = sum u exp(-beta u) over
// driver events, advanced with the same recursive decay as the likelihood.
double ll_with_grad(const PointSeries& target, const PointSeries& driver, const HawkesParams& p,
                    bool self, double grad[3]) {
    const double lambda0 = p.lambda0;
    const double alpha = p.alpha;
    const double beta = p.beta;
    grad[0] = grad[1] = grad[2] = 0.0;
    if (!(lambda0 > 0) || alpha < 0 || !(beta > 0)) return -std::numeric_limits<double>::infinity();

    double ll = 0.0;
    double acc = 0.0, bcc = 0.0;
    double acc_time = driver.start;
    std::size_t j = 0;
    auto advance = [&](double to) {
        double d = to - acc_time;
        if (d > 0) {
            double e = std::exp(-beta * d);
            bcc = (bcc + d * acc) * e;
            acc *= e;
            acc_time = to;
        }
    };
    for (std::size_t i = 0; i < target.times.size(); ++i) {
        double t = target.times[i];
        if (!self) {
            while (j < driver.times.size() && driver.times[j] < t) {
                advance(driver.times[j]);
                acc += 1.0;
                ++j;
            }
        }
        advance(t);
        double A = acc, B = bcc;
        double lam = lambda0 + alpha * A;
        if (!(lam > 0)) return -std::numeric_limits<double>::infinity();
        ll += std::log(lam);
        grad[0] += 1.0 / lam;
        grad[1] += A / lam;
        grad[2] += -alpha * B / lam;
        if (self) {
            // register this event as a driver for the ones after it
            acc += 1.0;
        }
    }
    // Compensator: lambda0 T + (alpha/beta) sum_s (1 - exp(-beta (T - s))).
    const double T = target.end;
    double comp_sum = 0.0;   // sum (1 - e^{-beta tau})
    double comp_tau = 0.0;   // sum tau e^{-beta tau}
    const std::vector<double>& drv = self ? target.times : driver.times;
    for (double s : drv) {
        if (s >= T) break;
        double tau = T - s;
        double e = std::exp(-beta * tau);
        comp_sum += 1.0 - e;
        comp_tau += tau * e;
    }
    ll -= lambda0 * target.horizon() + (alpha / beta) * comp_sum;
    grad[0] -= target.horizon();
    grad[1] -= comp_sum / beta;
    grad[2] += (alpha / (beta * beta)) * comp_sum - (alpha / beta) * comp_tau;
    return ll;
}

}  // namespace

double log_likelihood(const PointSeries& series, const HawkesParams& params,
                      const PointSeries* exciting) {
    series.validate();
    if (exciting) {
        exciting->validate();
        return log_likelihood_impl(series, *exciting, params, /*self=*/false);
    }
    return log_likelihood_impl(series, series, params, /*self=*/true);
}

double log_likelihood_brute(const PointSeries& series, const HawkesParams& params,
                            const PointSeries* exciting) {
    series.validate();
    const PointSeries& driver = exciting ? *exciting : series;
    const double lambda0 = params.lambda0;
    const double alpha = params.alpha;
    const double beta = params.beta;
    if (!(lambda0 > 0) || alpha < 0 || !(beta > 0)) return -std::numeric_limits<double>::infinity();

    double ll = -lambda0 * series.horizon();
    for (double t : series.times) {
        double lam = lambda0;
        for (double s : driver.times) {
            if (s >= t) break;
            lam += alpha * std::exp(-beta * (t - s));
        }
        if (!(lam > 0)) return -std::numeric_limits<double>::infinity();
        ll += std::log(lam);
    }
    for (double s : driver.times) {
        if (s >= series.end) break;
        ll -= (alpha / beta) * (1.0 - std::exp(-beta * (series.end - s)));
    }
    return ll;
}

FitResult fit(const PointSeries& series, const PointSeries* exciting, const FitOptions& opts) {
    series.validate();
    if (exciting) exciting->validate();
    FitResult best;
    best.log_likelihood = -std::numeric_limits<double>::infinity();
    if (series.times.size() < opts.min_events)
        throw FitError("hawkes fit: too few events", best);

    const double horizon = series.horizon();
    const double mean_rate = static_cast<double>(series.times.size()) / horizon;

    auto decode = [](const std::vector<double>& z) {
        HawkesParams p;
        p.lambda0 = std::exp(std::clamp(z[0], -30.0, 30.0));
        p.alpha = std::exp(std::clamp(z[1], -30.0, 30.0));
        p.beta = std::exp(std::clamp(z[2], -30.0, 30.0));
        return p;
    };
    const PointSeries& driver = exciting ? *exciting : series;
    const bool self = exciting == nullptr;
    auto objective = [&](const std::vector<double>& z) {
        double g[3];
        return -ll_with_grad(series, driver, decode(z), self, g);
    };
    // Gradient in log-parameters: chain rule multiplies by the parameter.
    auto gradient = [&](const std::vector<double>& z) {
        double g[3];
        HawkesParams p = decode(z);
        ll_with_grad(series, driver, p, self, g);
        return std::vector<double>{-g[0] * p.lambda0, -g[1] * p.alpha, -g[2] * p.beta};
    };

    // Multi-start over plausible branching ratios and timescales.
    const double ratios[] = {0.05, 0.2, 0.4, 0.6, 0.8, 0.3, 0.5, 0.7};
    const double betas[] = {0.5, 1.0, 2.0, 5.0, 0.2, 1.0, 3.0, 10.0};
    int total_iters = 0;
    for (int s = 0; s < opts.starts; ++s) {
        double r = ratios[s % 8];
        double b = betas[s % 8];
        std::vector<double> z0 = {std::log(std::max(mean_rate * (1.0 - r), 1e-6)),
                                  std::log(std::max(r * b, 1e-6)), std::log(b)};
        auto out = optim::bfgs_minimize_with_grad(objective, gradient, z0, 1e-7, 400);
        total_iters += out.iterations;
        double ll = -out.value;
        // Require a meaningful improvement before switching starts: on flat
        // (weak-excitation) ridges all starts tie in likelihood and the
        // tied maximizers can have arbitrary alpha/beta ratios.
        double margin = 1e-7 * (std::abs(best.log_likelihood) + 1.0);
        if (std::isfinite(ll) &&
            (!std::isfinite(best.log_likelihood) || ll > best.log_likelihood + margin)) {
            best.params = decode(out.x);
            best.log_likelihood = ll;
            best.converged = out.converged;
        }
    }
    best.iterations = total_iters;
    best.ratio = best.params.branching_ratio();
    best.stationary = best.ratio < 1.0;
    if (!std::isfinite(best.log_likelihood))
        throw FitError("hawkes fit: all starts failed", best);
    return best;
}

PointSeries simulate_hawkes(const HawkesParams& params, double horizon, std::uint64_t seed,
                            const PointSeries* exciting) {
    if (!(horizon > 0)) throw std::invalid_argument("simulate_hawkes: horizon must be positive");
    if (!(params.lambda0 > 0) || params.alpha < 0 || !(params.beta > 0))
        throw std::invalid_argument("simulate_hawkes: invalid parameters");
    if (!exciting && params.branching_ratio() >= 1.0)
        throw std::invalid_argument("simulate_hawkes: non-stationary (alpha/beta >= 1)");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(std::numeric_limits<double>::min(), 1.0);

    PointSeries out;
    out.start = 0.0;
    out.end = horizon;

    double t = 0.0;
    double acc = 0.0;       // kernel sum over past driving events at acc_time
    double acc_time = 0.0;
    std::size_t j = 0;      // next external driving event (cross model)
    const double beta = params.beta;

    auto intensity_at = [&](double when) {
        return params.lambda0 + params.alpha * acc * std::exp(-beta * (when - acc_time));
    };

    while (t < horizon) {
        double bound = intensity_at(t);
        // In the cross model intensity can jump up at the next driver event;
        // cap the candidate step at that event so the bound stays valid.
        double limit = horizon;
        if (exciting && j < exciting->times.size())
            limit = std::min(limit, exciting->times[j]);
        double w = -std::log(unif(rng)) / bound;
        if (t + w > limit) {
            t = limit;
            if (exciting && j < exciting->times.size() && t == exciting->times[j]) {
                acc = acc * std::exp(-beta * (t - acc_time)) + 1.0;
                acc_time = t;
                ++j;
            }
            continue;
        }
        t += w;
        if (unif(rng) * bound <= intensity_at(t)) {
            if (!out.times.empty() && t <= out.times.back()) t = out.times.back() + 1e-9;
            if (t >= horizon) break;
            out.times.push_back(t);
            if (!exciting) {
                acc = acc * std::exp(-beta * (t - acc_time)) + 1.0;
                acc_time = t;
            }
        }
    }
    out.validate();
    return out;
}

FlowComparison compare_flows(const PointSeries& raw_trades, const PointSeries& matched_flow,
                             Model model, const PointSeries* cancels,
                             const PointSeries* matched_cancels) {
    FlowComparison cmp;
    if (model == Model::Self) {
        cmp.raw = fit(raw_trades);
        cmp.matched = fit(matched_flow);
    } else {
        if (!cancels) throw std::invalid_argument("compare_flows: cross model needs cancels");
        cmp.raw = fit(*cancels, &raw_trades);
        cmp.matched = fit(matched_cancels ? *matched_cancels : *cancels, &matched_flow);
    }
    cmp.ratio_difference = cmp.raw.ratio - cmp.matched.ratio;
    return cmp;
}

}  // namespace flowrecon::hawkes
