#include "flowrecon/lob.hpp"

#include <algorithm>

namespace flowrecon::lob {

const char* kind_name(EventKind k) {
    switch (k) {
        case EventKind::Limit: return "LIMIT";
        case EventKind::Cancel: return "CANCEL";
        case EventKind::Market: return "MARKET";
    }
    return "?";
}

const char* aggressor_name(Aggressor a) { return a == Aggressor::Buy ? "BUY" : "SELL"; }

std::vector<UpdateBatch> group_update_batches(const std::vector<QuoteRecord>& records) {
    std::vector<UpdateBatch> out;
    for (const auto& r : records) {
        if (out.empty() || out.back().t != r.t) out.push_back(UpdateBatch{r.t, {}});
        out.back().records.push_back(r);
    }
    return out;
}

namespace {

using MaybeLevel = std::optional<BookSnapshot::Level>;

std::vector<BookSnapshot::Level> compress(const std::vector<MaybeLevel>& arr) {
    std::vector<BookSnapshot::Level> out;
    for (const auto& l : arr)
        if (l) out.push_back(*l);
    return out;
}

bool ladder_monotone(const std::vector<BookSnapshot::Level>& levels, Side side) {
    for (std::size_t i = 1; i < levels.size(); ++i) {
        bool ok = side == Side::Ask ? levels[i - 1].price < levels[i].price
                                    : levels[i - 1].price > levels[i].price;
        if (!ok) return false;
    }
    return true;
}

void validate(const BookSnapshot& prev, const BookSnapshot& next) {
    if (!ladder_monotone(next.asks, Side::Ask))
        throw CrossedBookError("non-monotone ask ladder", prev, next);
    if (!ladder_monotone(next.bids, Side::Bid))
        throw CrossedBookError("non-monotone bid ladder", prev, next);
    if (!next.asks.empty() && !next.bids.empty() &&
        next.bids.front().price >= next.asks.front().price)
        throw CrossedBookError("crossed book", prev, next);
}

}  // namespace

BookSnapshot apply_batch(const BookSnapshot& prev, const UpdateBatch& batch) {
    // Price-keyed application: each record states the quantity now resting at
    // its price and where that price ranks in the visible window. A feed is
    // free to republish only the levels that changed, so when a record places
    // a price at rank L while more than L-1 better prices are still held from
    // earlier snapshots, the surplus prices immediately above it are stale
    // and removed. Ladders stay sorted best-to-worst by construction and are
    // trimmed to the configured depth once the whole batch is applied.
    BookSnapshot next;
    next.depth = prev.depth;
    next.asks = prev.asks;
    next.bids = prev.bids;
    for (const auto& r : batch.records) {
        if (r.level < 1 || r.level > prev.depth) continue;  // outside the window
        auto& ladder = r.side == Side::Ask ? next.asks : next.bids;
        auto better = [&](Price a, Price b) {
            return r.side == Side::Ask ? a < b : a > b;
        };
        auto pos = std::lower_bound(ladder.begin(), ladder.end(), r.price,
                                    [&](const BookSnapshot::Level& l, Price p) {
                                        return better(l.price, p);
                                    });
        if (r.qty == 0) {
            if (pos != ladder.end() && pos->price == r.price) ladder.erase(pos);
            continue;
        }
        if (pos != ladder.end() && pos->price == r.price)
            pos->qty = r.qty;
        else
            pos = ladder.insert(pos, BookSnapshot::Level{r.price, r.qty});
        auto rank = pos - ladder.begin();  // number of strictly better prices
        while (rank > r.level - 1) {
            // Drop the stale price just above; freshly written better levels
            // (published best-to-worst) sit lower and are preserved.
            pos = ladder.erase(pos - 1);
            --rank;
        }
    }
    auto trim = [&](std::vector<BookSnapshot::Level>& ladder) {
        if (ladder.size() > static_cast<std::size_t>(prev.depth))
            ladder.resize(static_cast<std::size_t>(prev.depth));
    };
    trim(next.asks);
    trim(next.bids);
    validate(prev, next);
    return next;
}

std::vector<OrderEvent> diff_snapshots(const BookSnapshot& prev, const BookSnapshot& next,
                                       Timestamp t) {
    std::vector<OrderEvent> events;
    for (Side side : {Side::Ask, Side::Bid}) {
        const auto& pl = prev.side_levels(side);
        const auto& nl = next.side_levels(side);
        // "worse" = farther from the spread: greater for asks, smaller for bids.
        auto worse = [side](Price a, Price b) { return side == Side::Ask ? a > b : a < b; };

        auto find_qty = [](const std::vector<BookSnapshot::Level>& v,
                           Price p) -> std::optional<Qty> {
            for (const auto& l : v)
                if (l.price == p) return l.qty;
            return std::nullopt;
        };

        // Prices present in next, walked best to worst.
        for (const auto& l : nl) {
            auto prev_qty = find_qty(pl, l.price);
            if (!prev_qty) {
                // Newly revealed beyond the previously observed deep edge:
                // the window moved, this is not an order.
                if (!pl.empty() && worse(l.price, pl.back().price)) continue;
                events.push_back({t, EventKind::Limit, side, l.price, l.qty, std::nullopt});
            } else if (l.qty > *prev_qty) {
                events.push_back({t, EventKind::Limit, side, l.price, l.qty - *prev_qty,
                                  std::nullopt});
            } else if (l.qty < *prev_qty) {
                events.push_back({t, EventKind::Cancel, side, l.price, *prev_qty - l.qty,
                                  std::nullopt});
            }
        }
        // Prices that vanished.
        for (const auto& l : pl) {
            if (find_qty(nl, l.price)) continue;
            if (!nl.empty() && worse(l.price, nl.back().price)) continue;  // window shrank
            events.push_back({t, EventKind::Cancel, side, l.price, l.qty, std::nullopt});
        }
    }
    return events;
}

EventFlow quotes_to_eventflow(const std::vector<QuoteRecord>& records,
                              const EventFlowOptions& opts) {
    EventFlow flow;
    BookSnapshot book;
    book.depth = opts.depth;
    auto ask_init = std::vector<MaybeLevel>(static_cast<std::size_t>(opts.depth));
    auto bid_init = std::vector<MaybeLevel>(static_cast<std::size_t>(opts.depth));
    bool init_done[2] = {false, false};
    bool initial_captured = false;

    auto side_idx = [](Side s) { return s == Side::Ask ? 0 : 1; };

    auto sync_init = [&](Side s) {
        auto& arr = s == Side::Ask ? ask_init : bid_init;
        book.side_levels(s) = compress(arr);
    };

    UpdateBatch pending;
    bool has_pending = false;

    auto flush = [&]() {
        if (!has_pending) return;
        if (!initial_captured) {
            flow.initial = book;
            initial_captured = true;
        }
        BookSnapshot next = apply_batch(book, pending);
        auto events = diff_snapshots(book, next, pending.t);
        flow.events.insert(flow.events.end(), events.begin(), events.end());
        book = std::move(next);
        if (opts.record_snapshots) flow.snapshots.emplace_back(pending.t, book);
        if (!book.asks.empty() && !book.bids.empty())
            flow.best_quotes.push_back(
                {pending.t, book.bids.front().price.milli, book.asks.front().price.milli});
        pending.records.clear();
        has_pending = false;
    };

    for (const auto& r : records) {
        if (has_pending && pending.t != r.t) flush();
        int si = side_idx(r.side);
        if (!init_done[si]) {
            auto& arr = r.side == Side::Ask ? ask_init : bid_init;
            auto idx = static_cast<std::size_t>(r.level - 1);
            if (idx >= arr.size()) continue;  // beyond configured depth
            if (!arr[idx]) {
                arr[idx] = BookSnapshot::Level{r.price, r.qty};
                bool full = std::all_of(arr.begin(), arr.end(), [](const auto& l) {
                    return l.has_value();
                });
                if (full) init_done[si] = true;
                sync_init(r.side);
                if (init_done[si] && !book.asks.empty() && !book.bids.empty())
                    flow.best_quotes.push_back(
                        {r.t, book.bids.front().price.milli, book.asks.front().price.milli});
                continue;
            }
            // A rewrite of an already-populated level ends initialization:
            // from here on this side carries genuine updates.
            init_done[si] = true;
        }
        if (!has_pending) {
            pending.t = r.t;
            has_pending = true;
        }
        pending.records.push_back(r);
    }
    flush();
    if (!initial_captured) flow.initial = book;
    return flow;
}

}  // namespace flowrecon::lob
