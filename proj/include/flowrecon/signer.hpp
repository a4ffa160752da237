#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowrecon/lob.hpp"
#include "flowrecon/tickdata.hpp"

namespace flowrecon::signing {

enum class Sign : std::int8_t { Sell = -1, Undecided = 0, Buy = 1 };

/// Quote-only Lee-Ready: compare the trade price with the midquote of the
/// last best-quote snapshot with timestamp <= trade time + lag_ms. Above the
/// mid is a buy, below a sell, at the mid (or with no quote yet) undecided.
std::vector<Sign> lee_ready_sign(const std::vector<tick::TradeRecord>& trades,
                                 const std::vector<lob::BestQuote>& quotes,
                                 std::int64_t lag_ms);

struct SignaturePerformance {
    std::int64_t lag_ms{0};
    std::size_t correct{0};
    std::size_t incorrect{0};
    std::size_t undecided{0};
    std::size_t excluded{0};  // trades with no reference sign

    std::size_t decided() const { return correct + incorrect; }
    std::size_t total() const { return correct + incorrect + undecided; }
    /// Undecided trades count against accuracy.
    double accuracy() const {
        return total() ? static_cast<double>(correct) / static_cast<double>(total()) : 0.0;
    }
    double accuracy_decided() const {
        return decided() ? static_cast<double>(correct) / static_cast<double>(decided()) : 0.0;
    }
};

/// Evaluates Lee-Ready against reference signs over a grid of lags.
/// reference[i] == Undecided excludes trade i from every lag's tally.
std::vector<SignaturePerformance> sweep(const std::vector<tick::TradeRecord>& trades,
                                        const std::vector<lob::BestQuote>& quotes,
                                        const std::vector<Sign>& reference,
                                        const std::vector<std::int64_t>& lags_ms);

/// Reference signs from a matched flow: Buy/Sell for trades matched to an
/// aggressor, Undecided for unmatched trades. `assignments[i]`, when present,
/// is the matched event index for trade line i.
std::vector<Sign> signs_from_flow(const lob::EventFlow& flow,
                                  const std::vector<std::optional<std::size_t>>& assignments);

/// Lag (row) maximizing accuracy; first one on ties.
std::size_t best_lag_index(const std::vector<SignaturePerformance>& perf);

std::string sweep_to_csv(const std::vector<SignaturePerformance>& perf);

}  // namespace flowrecon::signing
