#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowrecon/lob.hpp"
#include "flowrecon/tickdata.hpp"

namespace flowrecon::matching {

using lob::EventFlow;
using tick::TradeRecord;

enum class Procedure : std::uint8_t { M1, M2, M3 };

const char* procedure_name(Procedure p);

struct MatchConfig {
    Procedure procedure{Procedure::M3};
    double delta{0.4};         // matching window half-width, seconds
    int max_batch{9};          // N_b
    double batch_window{0.005};  // delta_b, seconds; 0 for M2, ignored for M1

    std::int64_t delta_ms() const { return static_cast<std::int64_t>(delta * 1000.0 + 0.5); }
    std::int64_t batch_window_ms() const {
        return static_cast<std::int64_t>(batch_window * 1000.0 + 0.5);
    }
};

struct Assignment {
    std::size_t event_index{0};
    std::int64_t lag_ms{0};  // tau_q - tau_t of the batch's first trade line
};

struct MatchResult {
    EventFlow flow;  // CANCELs relabeled MARKET where matched
    std::map<std::size_t, Assignment> assignments;  // trade line index -> assignment
    std::vector<std::size_t> unmatched_indices;
    std::vector<TradeRecord> unmatched;
    std::size_t total_trades{0};
};

MatchResult match1(const std::vector<TradeRecord>& trades, EventFlow flow, double delta);
MatchResult match2(const std::vector<TradeRecord>& trades, EventFlow flow, double delta,
                   int max_batch);
MatchResult match3(const std::vector<TradeRecord>& trades, EventFlow flow, double delta,
                   int max_batch, double batch_window);
MatchResult run_matching(const std::vector<TradeRecord>& trades, EventFlow flow,
                         const MatchConfig& config);

struct Histogram {
    double lo{0};
    double hi{0};
    std::vector<std::int64_t> counts;
    std::int64_t underflow{0};
    std::int64_t overflow{0};

    std::int64_t total() const;
};

Histogram make_histogram(const std::vector<double>& values, std::size_t bins, double lo,
                         double hi);

/// Two-sample Kolmogorov-Smirnov statistic, sup |F1 - F2|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

struct MatchReport {
    std::size_t total_trades{0};
    std::size_t matched_trades{0};
    double matched_fraction{0};
    Histogram lag_histogram;             // lag in ms
    Histogram unmatched_size_histogram;
    Histogram unmatched_time_histogram;  // seconds since midnight
    std::optional<double> ks_statistic_sizes;
};

MatchReport build_report(const MatchResult& result, const std::vector<TradeRecord>& trades);

/// `timestamp,kind,side,price,qty,aggressor` with empty aggressor for
/// non-market events.
std::string flow_to_csv(const EventFlow& flow);

std::string report_to_json(const MatchReport& report, const MatchConfig& config);
std::string histogram_to_csv(const Histogram& h);

}  // namespace flowrecon::matching
