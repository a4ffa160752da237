#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowrecon::hawkes {

/// Exponential-kernel Hawkes parameters: intensity lambda0 + sum over past
/// driving events of alpha * exp(-beta (t - s)).
struct HawkesParams {
    double lambda0{0};
    double alpha{0};
    double beta{1};

    double branching_ratio() const { return beta > 0.0 ? alpha / beta : 0.0; }
};

/// Event times in seconds, strictly increasing within [start, end].
struct PointSeries {
    std::vector<double> times;
    double start{0};
    double end{0};

    double horizon() const { return end - start; }
    void validate() const;
};

/// Makes strictly increasing times out of a millisecond-truncated sequence by
/// spreading tie groups with +1 microsecond steps, preserving order.
PointSeries from_millis(const std::vector<std::int64_t>& times_ms, std::int64_t start_ms,
                        std::int64_t end_ms);

/// Log-likelihood of the exponential-kernel model on `series`. When
/// `exciting` is given, the kernel integrates over the exciting series
/// (cross-excitation); otherwise the series excites itself.
double log_likelihood(const PointSeries& series, const HawkesParams& params,
                      const PointSeries* exciting = nullptr);

/// O(n * m) reference evaluation, for validating the recursive form.
double log_likelihood_brute(const PointSeries& series, const HawkesParams& params,
                            const PointSeries* exciting = nullptr);

struct FitResult {
    HawkesParams params;
    double ratio{0};  // alpha / beta
    double log_likelihood{0};
    bool converged{false};
    int iterations{0};
    bool stationary{true};  // ratio < 1
};

class FitError : public std::runtime_error {
public:
    FitError(std::string what, FitResult best)
        : std::runtime_error(std::move(what)), best_(std::move(best)) {}
    const FitResult& best() const { return best_; }

private:
    FitResult best_;
};

struct FitOptions {
    std::size_t min_events{100};
    int starts{8};
};

/// Maximum-likelihood fit via multi-start BFGS on log-transformed parameters.
FitResult fit(const PointSeries& series, const PointSeries* exciting = nullptr,
              const FitOptions& opts = {});

/// Exact simulation by Ogata thinning; deterministic per seed.
PointSeries simulate_hawkes(const HawkesParams& params, double horizon, std::uint64_t seed,
                            const PointSeries* exciting = nullptr);

enum class Model : std::uint8_t { Self, Cross };

struct FlowComparison {
    FitResult raw;
    FitResult matched;
    double ratio_difference{0};  // raw - matched
};

/// Reports the endogeneity ratio fitted on the raw trades series against the
/// one fitted on the matched flow series. Self model: each series excites
/// itself. Cross model: the cancel series is the target process, excited by
/// the raw series in one fit and by the matched series in the other;
/// `matched_cancels` defaults to `cancels` when null (shared target).
FlowComparison compare_flows(const PointSeries& raw_trades, const PointSeries& matched_flow,
                             Model model, const PointSeries* cancels = nullptr,
                             const PointSeries* matched_cancels = nullptr);

}  // namespace flowrecon::hawkes
