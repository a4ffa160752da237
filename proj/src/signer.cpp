#include "flowrecon/signer.hpp"

#include <algorithm>
#include <sstream>

namespace flowrecon::signing {

std::vector<Sign> lee_ready_sign(const std::vector<tick::TradeRecord>& trades,
                                 const std::vector<lob::BestQuote>& quotes,
                                 std::int64_t lag_ms) {
    std::vector<Sign> signs(trades.size(), Sign::Undecided);
    // Quotes are time-ordered; the snapshot in force at time t is the last one
    // with timestamp <= t (left-continuous sampling).
    for (std::size_t i = 0; i < trades.size(); ++i) {
        std::int64_t query = trades[i].t.millis + lag_ms;
        auto it = std::upper_bound(quotes.begin(), quotes.end(), query,
                                   [](std::int64_t q, const lob::BestQuote& b) {
                                       return q < b.t.millis;
                                   });
        if (it == quotes.begin()) continue;  // no quote in force yet
        const lob::BestQuote& q = *std::prev(it);
        // Compare 2 * trade price against bid + ask, all in milli units.
        std::int64_t lhs = 2 * trades[i].price.milli;
        std::int64_t rhs = q.bid_milli + q.ask_milli;
        if (lhs > rhs)
            signs[i] = Sign::Buy;
        else if (lhs < rhs)
            signs[i] = Sign::Sell;
    }
    return signs;
}

std::vector<SignaturePerformance> sweep(const std::vector<tick::TradeRecord>& trades,
                                        const std::vector<lob::BestQuote>& quotes,
                                        const std::vector<Sign>& reference,
                                        const std::vector<std::int64_t>& lags_ms) {
    if (reference.size() != trades.size())
        throw std::invalid_argument("sweep: reference size must match trades");
    std::vector<SignaturePerformance> out;
    out.reserve(lags_ms.size());
    for (std::int64_t lag : lags_ms) {
        auto signs = lee_ready_sign(trades, quotes, lag);
        SignaturePerformance p;
        p.lag_ms = lag;
        for (std::size_t i = 0; i < trades.size(); ++i) {
            if (reference[i] == Sign::Undecided) {
                ++p.excluded;
            } else if (signs[i] == Sign::Undecided) {
                ++p.undecided;
            } else if (signs[i] == reference[i]) {
                ++p.correct;
            } else {
                ++p.incorrect;
            }
        }
        out.push_back(p);
    }
    return out;
}

std::vector<Sign> signs_from_flow(const lob::EventFlow& flow,
                                  const std::vector<std::optional<std::size_t>>& assignments) {
    std::vector<Sign> signs(assignments.size(), Sign::Undecided);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (!assignments[i]) continue;
        const lob::OrderEvent& ev = flow.events.at(*assignments[i]);
        if (ev.kind != lob::EventKind::Market || !ev.aggressor) continue;
        signs[i] = *ev.aggressor == lob::Aggressor::Buy ? Sign::Buy : Sign::Sell;
    }
    return signs;
}

std::size_t best_lag_index(const std::vector<SignaturePerformance>& perf) {
    if (perf.empty()) throw std::invalid_argument("best_lag_index: empty sweep");
    std::size_t best = 0;
    for (std::size_t i = 1; i < perf.size(); ++i)
        if (perf[i].accuracy() > perf[best].accuracy()) best = i;
    return best;
}

std::string sweep_to_csv(const std::vector<SignaturePerformance>& perf) {
    std::ostringstream os;
    os << "lag_ms,correct,incorrect,undecided,excluded,accuracy,accuracy_decided\n";
    os.precision(10);
    for (const auto& p : perf) {
        os << p.lag_ms << ',' << p.correct << ',' << p.incorrect << ',' << p.undecided << ','
           << p.excluded << ',' << p.accuracy() << ',' << p.accuracy_decided() << '\n';
    }
    return os.str();
}

}  // namespace flowrecon::signing
