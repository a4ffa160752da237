#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowrecon/tickdata.hpp"

namespace flowrecon::lob {

using tick::Price;
using tick::Qty;
using tick::QuoteRecord;
using tick::Side;
using tick::Timestamp;

/// Visible book window: up to N (price, qty) levels per side, best first.
/// Ask prices strictly increase from best, bid prices strictly decrease.
struct BookSnapshot {
    struct Level {
        Price price;
        Qty qty{0};

        friend bool operator==(const Level&, const Level&) = default;
    };

    int depth{0};
    std::vector<Level> asks;  // best first
    std::vector<Level> bids;  // best first

    std::optional<Price> best_ask() const {
        if (asks.empty()) return std::nullopt;
        return asks.front().price;
    }
    std::optional<Price> best_bid() const {
        if (bids.empty()) return std::nullopt;
        return bids.front().price;
    }
    /// Mid-price in half-milli units (2 * mid), exact.
    std::optional<std::int64_t> mid_half_milli() const {
        if (asks.empty() || bids.empty()) return std::nullopt;
        return asks.front().price.milli + bids.front().price.milli;
    }

    const std::vector<Level>& side_levels(Side s) const { return s == Side::Ask ? asks : bids; }
    std::vector<Level>& side_levels(Side s) { return s == Side::Ask ? asks : bids; }

    friend bool operator==(const BookSnapshot&, const BookSnapshot&) = default;
};

/// Data corruption in the quotes stream (crossed or non-monotone ladder).
/// Carries both snapshots for diagnosis.
class CrossedBookError : public std::runtime_error {
public:
    CrossedBookError(std::string what, BookSnapshot before, BookSnapshot after)
        : std::runtime_error(std::move(what)),
          before_(std::move(before)),
          after_(std::move(after)) {}

    const BookSnapshot& before() const { return before_; }
    const BookSnapshot& after() const { return after_; }

private:
    BookSnapshot before_;
    BookSnapshot after_;
};

enum class EventKind : std::uint8_t { Limit, Cancel, Market };

enum class Aggressor : std::uint8_t { Buy, Sell };

struct OrderEvent {
    Timestamp t;
    EventKind kind{EventKind::Limit};
    Side side{Side::Ask};
    Price price;
    Qty qty{0};
    std::optional<Aggressor> aggressor;  // Market only

    friend bool operator==(const OrderEvent&, const OrderEvent&) = default;
};

const char* kind_name(EventKind k);
const char* aggressor_name(Aggressor a);

/// Consecutive quote records sharing one timestamp.
struct UpdateBatch {
    Timestamp t;
    std::vector<QuoteRecord> records;
};

std::vector<UpdateBatch> group_update_batches(const std::vector<QuoteRecord>& records);

/// Applies a batch price-keyed: each record fixes the quantity at its price
/// and its rank in the window, removing stale better prices the rank rules
/// out. Untouched prices keep their previous content; ladders are trimmed to
/// the configured depth. Throws CrossedBookError if the book ends up crossed.
BookSnapshot apply_batch(const BookSnapshot& prev, const UpdateBatch& batch);

/// Price-keyed diff. Appearance/disappearance at the deep edge of the window
/// is suppressed: those lines carry no order information.
std::vector<OrderEvent> diff_snapshots(const BookSnapshot& prev, const BookSnapshot& next,
                                       Timestamp t);

/// Best-quote series sampled after each update batch; enough to evaluate
/// mid-price queries without retaining whole snapshots.
struct BestQuote {
    Timestamp t;
    std::int64_t bid_milli{0};
    std::int64_t ask_milli{0};
};

struct EventFlow {
    std::vector<OrderEvent> events;
    std::vector<std::pair<Timestamp, BookSnapshot>> snapshots;  // optional, see options
    std::vector<BestQuote> best_quotes;
    BookSnapshot initial;  // state right after initialization
};

struct EventFlowOptions {
    int depth{10};
    bool record_snapshots{false};  // full snapshots are heavy on large feeds
};

/// Replays the quotes stream: initializes the book from the leading records,
/// then converts every update batch into LIMIT/CANCEL events. Market orders
/// still appear as cancellations at this stage.
EventFlow quotes_to_eventflow(const std::vector<QuoteRecord>& records,
                              const EventFlowOptions& opts = {});

}  // namespace flowrecon::lob
