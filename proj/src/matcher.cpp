#include "flowrecon/matcher.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace flowrecon::matching {

using lob::EventKind;
using tick::Price;
using tick::Qty;
using tick::Timestamp;

const char* procedure_name(Procedure p) {
    switch (p) {
        case Procedure::M1: return "M1";
        case Procedure::M2: return "M2";
        case Procedure::M3: return "M3";
    }
    return "?";
}

namespace {

struct Candidate {
    std::int64_t t_ms;
    std::size_t event_index;
    Qty qty;
};

// Cancel events indexed by price, each bucket sorted by time (events arrive
// time-ordered from the book replay).
using CancelIndex = std::unordered_map<std::int64_t, std::vector<Candidate>>;

CancelIndex build_cancel_index(const EventFlow& flow) {
    CancelIndex index;
    for (std::size_t i = 0; i < flow.events.size(); ++i) {
        const auto& e = flow.events[i];
        if (e.kind != EventKind::Cancel) continue;
        index[e.price.milli].push_back({e.t.millis, i, e.qty});
    }
    return index;
}

struct Batch {
    std::size_t first_line;
    std::size_t n_lines;
};

std::vector<Batch> build_batches(const std::vector<TradeRecord>& trades, Procedure proc,
                                 int max_batch, std::int64_t window_ms) {
    std::vector<Batch> batches;
    std::size_t i = 0;
    while (i < trades.size()) {
        std::size_t n = 1;
        if (proc != Procedure::M1) {
            auto limit = static_cast<std::size_t>(max_batch);
            std::int64_t span = proc == Procedure::M2 ? 0 : window_ms;
            while (n < limit && i + n < trades.size() &&
                   trades[i + n].price == trades[i].price &&
                   trades[i + n].t.millis - trades[i].t.millis <= span &&
                   trades[i + n].t.millis >= trades[i].t.millis) {
                ++n;
            }
        }
        batches.push_back({i, n});
        i += n;
    }
    return batches;
}

struct CompositionOutcome {
    std::size_t matched_lines{0};
    std::int64_t sum_abs_lag{0};
    std::size_t n_groups{0};
    // (first line offset, line count, candidate position in bucket slice)
    std::vector<std::array<std::size_t, 3>> matched_groups;
};

}  // namespace

MatchResult run_matching(const std::vector<TradeRecord>& trades, EventFlow flow,
                         const MatchConfig& config) {
    MatchResult result;
    result.total_trades = trades.size();

    CancelIndex index = build_cancel_index(flow);
    std::vector<char> consumed(flow.events.size(), 0);

    const std::int64_t delta_ms = config.delta_ms();
    const std::int64_t window_ms =
        config.procedure == Procedure::M3 ? config.batch_window_ms() : 0;
    const int max_batch = config.procedure == Procedure::M1 ? 1 : config.max_batch;

    auto batches = build_batches(trades, config.procedure, max_batch, window_ms);

    std::vector<Qty> prefix;  // per-batch prefix sums, reused
    for (const auto& batch : batches) {
        const auto& first = trades[batch.first_line];
        const std::int64_t t0 = first.t.millis;
        const std::int64_t lo = t0 - delta_ms;
        const std::int64_t hi = t0 + delta_ms;

        std::vector<Candidate> cands;
        if (auto it = index.find(first.price.milli); it != index.end()) {
            const auto& bucket = it->second;
            auto from = std::lower_bound(bucket.begin(), bucket.end(), lo,
                                         [](const Candidate& c, std::int64_t v) {
                                             return c.t_ms < v;
                                         });
            for (auto p = from; p != bucket.end() && p->t_ms <= hi; ++p)
                if (!consumed[p->event_index]) cands.push_back(*p);
        }

        auto mark_unmatched = [&](std::size_t off) {
            result.unmatched_indices.push_back(batch.first_line + off);
            result.unmatched.push_back(trades[batch.first_line + off]);
        };

        if (cands.empty()) {
            for (std::size_t off = 0; off < batch.n_lines; ++off) mark_unmatched(off);
            continue;
        }

        prefix.assign(batch.n_lines + 1, 0);
        for (std::size_t off = 0; off < batch.n_lines; ++off)
            prefix[off + 1] = prefix[off] + trades[batch.first_line + off].qty;

        // Try every division of the batch into contiguous groups and keep the
        // one matching the most trade lines; ties prefer tighter lags, then
        // fewer groups.
        CompositionOutcome best;
        bool have_best = false;
        const std::size_t k = batch.n_lines;
        const std::uint32_t masks = 1u << (k - 1);
        std::vector<char> used(cands.size());
        for (std::uint32_t mask = 0; mask < masks; ++mask) {
            CompositionOutcome cur;
            std::fill(used.begin(), used.end(), 0);
            std::size_t group_start = 0;
            for (std::size_t off = 0; off < k; ++off) {
                bool boundary = off + 1 == k || (mask >> off) & 1u;
                if (!boundary) continue;
                std::size_t group_len = off + 1 - group_start;
                Qty sum = prefix[off + 1] - prefix[group_start];
                ++cur.n_groups;
                // Best available candidate for this group: minimal |lag|,
                // then earlier event time, then earlier file position.
                std::size_t pick = cands.size();
                for (std::size_t c = 0; c < cands.size(); ++c) {
                    if (used[c] || cands[c].qty != sum) continue;
                    if (pick == cands.size()) {
                        pick = c;
                        continue;
                    }
                    auto abs_lag = [&](std::size_t idx) {
                        return std::llabs(cands[idx].t_ms - t0);
                    };
                    if (abs_lag(c) < abs_lag(pick) ||
                        (abs_lag(c) == abs_lag(pick) && cands[c].t_ms < cands[pick].t_ms)) {
                        pick = c;
                    }
                }
                if (pick != cands.size()) {
                    used[pick] = 1;
                    cur.matched_lines += group_len;
                    cur.sum_abs_lag += std::llabs(cands[pick].t_ms - t0);
                    cur.matched_groups.push_back({group_start, group_len, pick});
                }
                group_start = off + 1;
            }
            if (!have_best || cur.matched_lines > best.matched_lines ||
                (cur.matched_lines == best.matched_lines &&
                 (cur.sum_abs_lag < best.sum_abs_lag ||
                  (cur.sum_abs_lag == best.sum_abs_lag && cur.n_groups < best.n_groups)))) {
                best = std::move(cur);
                have_best = true;
            }
        }

        std::vector<char> line_matched(k, 0);
        for (const auto& [start, len, pick] : best.matched_groups) {
            const auto& cand = cands[pick];
            consumed[cand.event_index] = 1;
            auto& ev = flow.events[cand.event_index];
            ev.kind = EventKind::Market;
            ev.aggressor = ev.side == tick::Side::Ask ? lob::Aggressor::Buy
                                                      : lob::Aggressor::Sell;
            for (std::size_t off = start; off < start + len; ++off) {
                line_matched[off] = 1;
                result.assignments[batch.first_line + off] =
                    Assignment{cand.event_index, cand.t_ms - t0};
            }
        }
        for (std::size_t off = 0; off < k; ++off)
            if (!line_matched[off]) mark_unmatched(off);
    }

    result.flow = std::move(flow);
    return result;
}

MatchResult match1(const std::vector<TradeRecord>& trades, EventFlow flow, double delta) {
    MatchConfig cfg;
    cfg.procedure = Procedure::M1;
    cfg.delta = delta;
    return run_matching(trades, std::move(flow), cfg);
}

MatchResult match2(const std::vector<TradeRecord>& trades, EventFlow flow, double delta,
                   int max_batch) {
    MatchConfig cfg;
    cfg.procedure = Procedure::M2;
    cfg.delta = delta;
    cfg.max_batch = max_batch;
    cfg.batch_window = 0.0;
    return run_matching(trades, std::move(flow), cfg);
}

MatchResult match3(const std::vector<TradeRecord>& trades, EventFlow flow, double delta,
                   int max_batch, double batch_window) {
    MatchConfig cfg;
    cfg.procedure = Procedure::M3;
    cfg.delta = delta;
    cfg.max_batch = max_batch;
    cfg.batch_window = batch_window;
    return run_matching(trades, std::move(flow), cfg);
}

std::int64_t Histogram::total() const {
    return underflow + overflow + std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins, double lo,
                         double hi) {
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(bins, 0);
    if (bins == 0 || !(hi > lo)) return h;
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : values) {
        if (v < lo) {
            ++h.underflow;
        } else if (v >= hi) {
            ++h.overflow;
        } else {
            auto b = static_cast<std::size_t>((v - lo) / width);
            if (b >= bins) b = bins - 1;
            ++h.counts[b];
        }
    }
    return h;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

MatchReport build_report(const MatchResult& result, const std::vector<TradeRecord>& trades) {
    MatchReport report;
    report.total_trades = trades.size();
    report.matched_trades = trades.size() - result.unmatched.size();
    report.matched_fraction =
        trades.empty() ? 0.0
                       : static_cast<double>(report.matched_trades) /
                             static_cast<double>(trades.size());

    std::vector<double> lags;
    lags.reserve(result.assignments.size());
    for (const auto& [line, a] : result.assignments) lags.push_back(static_cast<double>(a.lag_ms));

    std::vector<double> matched_sizes;
    std::vector<double> unmatched_sizes;
    std::vector<double> unmatched_times;
    std::vector<char> is_unmatched(trades.size(), 0);
    for (auto idx : result.unmatched_indices) is_unmatched[idx] = 1;
    for (std::size_t i = 0; i < trades.size(); ++i) {
        if (is_unmatched[i]) {
            unmatched_sizes.push_back(static_cast<double>(trades[i].qty));
            unmatched_times.push_back(static_cast<double>(trades[i].t.millis) / 1000.0);
        } else {
            matched_sizes.push_back(static_cast<double>(trades[i].qty));
        }
    }

    auto span = [](const std::vector<double>& v, double pad) -> std::pair<double, double> {
        if (v.empty()) return {0.0, 1.0};
        auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        double lo = *mn, hi = *mx + pad;
        if (!(hi > lo)) hi = lo + 1.0;
        return {lo, hi};
    };

    auto [llo, lhi] = span(lags, 1.0);
    report.lag_histogram = make_histogram(lags, 50, llo, lhi);
    auto [slo, shi] = span(unmatched_sizes, 1.0);
    report.unmatched_size_histogram = make_histogram(unmatched_sizes, 50, slo, shi);
    auto [tlo, thi] = span(unmatched_times, 1.0);
    report.unmatched_time_histogram = make_histogram(unmatched_times, 50, tlo, thi);

    if (!matched_sizes.empty() && !unmatched_sizes.empty())
        report.ks_statistic_sizes = ks_two_sample(matched_sizes, unmatched_sizes);
    return report;
}

std::string flow_to_csv(const EventFlow& flow) {
    std::ostringstream out;
    out << "timestamp,kind,side,price,qty,aggressor\n";
    for (const auto& e : flow.events) {
        out << tick::format_timestamp(e.t) << ',' << lob::kind_name(e.kind) << ','
            << tick::side_char(e.side) << ',' << tick::format_price(e.price) << ',' << e.qty
            << ',';
        if (e.aggressor) out << lob::aggressor_name(*e.aggressor);
        out << '\n';
    }
    return out.str();
}

namespace {

nlohmann::json histogram_json(const Histogram& h) {
    return {{"lo", h.lo},
            {"hi", h.hi},
            {"counts", h.counts},
            {"underflow", h.underflow},
            {"overflow", h.overflow}};
}

}  // namespace

std::string report_to_json(const MatchReport& report, const MatchConfig& config) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["procedure"] = procedure_name(config.procedure);
    j["delta"] = config.delta;
    j["max_batch"] = config.max_batch;
    j["batch_window"] = config.batch_window;
    j["lag_reference"] = "first line of batch";
    j["total_trades"] = report.total_trades;
    j["matched_trades"] = report.matched_trades;
    j["matched_fraction"] = report.matched_fraction;
    j["lag_histogram_ms"] = histogram_json(report.lag_histogram);
    j["unmatched_size_histogram"] = histogram_json(report.unmatched_size_histogram);
    j["unmatched_time_histogram_s"] = histogram_json(report.unmatched_time_histogram);
    if (report.ks_statistic_sizes)
        j["ks_statistic_sizes"] = *report.ks_statistic_sizes;
    else
        j["ks_statistic_sizes"] = nullptr;
    return j.dump(2) + "\n";
}

std::string histogram_to_csv(const Histogram& h) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,count\n";
    if (h.counts.empty()) return out.str();
    const double width = (h.hi - h.lo) / static_cast<double>(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        out << h.lo + width * static_cast<double>(i) << ','
            << h.lo + width * static_cast<double>(i + 1) << ',' << h.counts[i] << '\n';
    }
    return out.str();
}

}  // namespace flowrecon::matching
