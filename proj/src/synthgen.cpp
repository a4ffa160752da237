#include "flowrecon/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace flowrecon::synth {

skellam::SkellamParams FlowParams::skellam() const {
    skellam::SkellamParams p;
    p.lambda_lc_plus = lambda_lc_plus;
    p.lambda_lc_minus = lambda_lc_minus;
    p.lambda_m_plus = lambda_m_plus;
    p.lambda_m_minus = lambda_m_minus;
    p.rho_agg = rho_agg;
    return p;
}

void FlowParams::validate() const {
    if (lambda_lc_plus < 0 || lambda_lc_minus < 0 || lambda_m_plus < 0 || lambda_m_minus < 0)
        throw std::invalid_argument("flow params: negative intensity");
    if (rho_agg < 0 || rho_agg > 1) throw std::invalid_argument("flow params: rho_agg not in [0,1]");
    if ((lambda_m_plus > 0 || lambda_m_minus > 0) && rho_agg == 0)
        throw std::invalid_argument("flow params: market rates need rho_agg > 0");
    if (!(horizon_s > 0)) throw std::invalid_argument("flow params: horizon must be positive");
    if (tick_milli <= 0) throw std::invalid_argument("flow params: tick must be positive");
    if (depth < 1 || depth > 10) throw std::invalid_argument("flow params: depth not in [1,10]");
    if (initial_bid_milli <= tick_milli * (depth + 1))
        throw std::invalid_argument("flow params: initial bid too close to zero");
    if (min_event_gap_ms < 1) throw std::invalid_argument("flow params: event gap must be >= 1 ms");
    auto range_ok = [](Qty lo, Qty hi) { return lo >= 1 && hi >= lo; };
    if (!range_ok(ask_level_qty_lo, ask_level_qty_hi) ||
        !range_ok(bid_level_qty_lo, bid_level_qty_hi) ||
        !range_ok(ask_trade_qty_lo, ask_trade_qty_hi) ||
        !range_ok(bid_trade_qty_lo, bid_trade_qty_hi))
        throw std::invalid_argument("flow params: bad quantity range");
    if (ask_refill_threshold < 2 * ask_trade_qty_hi ||
        bid_refill_threshold < 2 * bid_trade_qty_hi)
        throw std::invalid_argument("flow params: refill threshold below twice max trade size");
    if (ask_level_qty_lo <= ask_refill_threshold || bid_level_qty_lo <= bid_refill_threshold)
        throw std::invalid_argument("flow params: level range must exceed refill threshold");
}

void ArtifactConfig::validate() const {
    lag_density.validate();
    if (split_min < 1 || split_max < split_min)
        throw std::invalid_argument("artifacts: bad split range");
    if (split_max > 9) throw std::invalid_argument("artifacts: split_max above batch capacity");
    if (split_jitter_ms < 0) throw std::invalid_argument("artifacts: negative jitter");
    if (iceberg_fraction < 0 || iceberg_fraction > 1 || offbook_fraction < 0 ||
        offbook_fraction > 1)
        throw std::invalid_argument("artifacts: fraction not in [0,1]");
    if (iceberg_hidden_lo < 1 || iceberg_hidden_hi < iceberg_hidden_lo)
        throw std::invalid_argument("artifacts: bad iceberg range");
    if (offbook_qty_lo < 1 || offbook_qty_hi < offbook_qty_lo)
        throw std::invalid_argument("artifacts: bad off-book range");
}

const char* label_name(LineLabel l) {
    switch (l) {
        case LineLabel::Event: return "EVENT";
        case LineLabel::IcebergResidual: return "ICEBERG_RESIDUAL";
        case LineLabel::OffBook: return "OFF_BOOK";
    }
    return "?";
}

namespace {

struct Level {
    std::int64_t price_milli{0};
    Qty qty{0};
};

using Ladder = std::deque<Level>;

QuoteRecord make_record(Timestamp t, Side side, int level, std::int64_t price_milli, Qty qty) {
    QuoteRecord r;
    r.t = t;
    r.side = side;
    r.level = level;
    r.price = Price{price_milli};
    r.qty = qty;
    return r;
}

void push_side_lines(std::vector<QuoteRecord>& out, Timestamp t, Side side,
                     const Ladder& ladder) {
    for (std::size_t i = 0; i < ladder.size(); ++i)
        out.push_back(make_record(t, side, static_cast<int>(i) + 1, ladder[i].price_milli,
                                  ladder[i].qty));
}

}  // namespace

GroundTruth simulate(const FlowParams& params) {
    params.validate();
    std::mt19937_64 rng(params.seed);
    auto draw_qty = [&](Qty lo, Qty hi) {
        return std::uniform_int_distribution<Qty>(lo, hi)(rng);
    };

    const std::int64_t tick = params.tick_milli;
    Ladder asks, bids;
    for (int i = 0; i < params.depth; ++i) {
        asks.push_back({params.initial_bid_milli + tick * (i + 1),
                        draw_qty(params.ask_level_qty_lo, params.ask_level_qty_hi)});
        bids.push_back({params.initial_bid_milli - tick * i,
                        draw_qty(params.bid_level_qty_lo, params.bid_level_qty_hi)});
    }

    GroundTruth gt;
    gt.params = params;
    gt.initial.depth = params.depth;
    for (const auto& l : asks) gt.initial.asks.push_back({Price{l.price_milli}, l.qty});
    for (const auto& l : bids) gt.initial.bids.push_back({Price{l.price_milli}, l.qty});
    gt.mid_path.push_back(
        {Timestamp{params.session_start_ms}, asks.front().price_milli + bids.front().price_milli});

    const double rate_up_lc = params.lambda_lc_plus;
    const double rate_down_lc = params.lambda_lc_minus;
    const double rate_buy = params.rho_agg > 0 ? params.lambda_m_plus / params.rho_agg : 0.0;
    const double rate_sell = params.rho_agg > 0 ? params.lambda_m_minus / params.rho_agg : 0.0;
    const double total = rate_up_lc + rate_down_lc + rate_buy + rate_sell;
    if (total <= 0) return gt;

    std::exponential_distribution<double> wait(total);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::int64_t last_ms = params.session_start_ms;
    const std::int64_t gap = params.min_event_gap_ms;
    double t = 0;

    auto next_ms = [&](double t_s) {
        std::int64_t ms = params.session_start_ms + std::llround(t_s * 1000.0);
        ms = std::max(ms, last_ms + gap);
        last_ms = ms;
        return ms;
    };

    auto record_mid = [&](Timestamp ts) {
        gt.mid_path.push_back({ts, asks.front().price_milli + bids.front().price_milli});
    };

    // Shift both sides one tick; `up` consumes the best ask. `market` turns
    // the consumed level into a trade print.
    auto shift = [&](Timestamp ts, bool up, bool market) {
        Ladder& gone = up ? asks : bids;
        Ladder& follow = up ? bids : asks;
        const Side gone_side = up ? Side::Ask : Side::Bid;
        const Side follow_side = up ? Side::Bid : Side::Ask;
        const std::int64_t dir = up ? tick : -tick;

        // Keep the deepest bid price strictly positive.
        if (!up && bids.back().price_milli - tick <= 0) return;

        Level hit = gone.front();
        OrderEvent ev;
        ev.t = ts;
        ev.side = gone_side;
        ev.price = Price{hit.price_milli};
        ev.qty = hit.qty;
        if (market) {
            ev.kind = EventKind::Market;
            ev.aggressor = up ? Aggressor::Buy : Aggressor::Sell;
        } else {
            ev.kind = EventKind::Cancel;
        }
        gt.events.push_back(ev);
        if (market)
            gt.prints.push_back({ts, gt.events.size() - 1, Price{hit.price_milli}, hit.qty,
                                 gone_side, true});

        gone.pop_front();
        if (up) {
            gone.push_back({gone.back().price_milli + tick,
                            draw_qty(params.ask_level_qty_lo, params.ask_level_qty_hi)});
        } else {
            gone.push_back({gone.back().price_milli - tick,
                            draw_qty(params.bid_level_qty_lo, params.bid_level_qty_hi)});
        }

        Qty follow_qty = up ? draw_qty(params.bid_level_qty_lo, params.bid_level_qty_hi)
                            : draw_qty(params.ask_level_qty_lo, params.ask_level_qty_hi);
        follow.push_front({follow.front().price_milli + dir, follow_qty});
        follow.pop_back();

        OrderEvent lim;
        lim.t = ts;
        lim.kind = EventKind::Limit;
        lim.side = follow_side;
        lim.price = Price{follow.front().price_milli};
        lim.qty = follow_qty;
        gt.events.push_back(lim);

        QuoteBatch qb;
        qb.t = ts;
        push_side_lines(qb.lines, ts, Side::Ask, asks);
        push_side_lines(qb.lines, ts, Side::Bid, bids);
        gt.quote_updates.push_back(std::move(qb));
        record_mid(ts);
    };

    auto partial = [&](Timestamp ts, bool buy) {
        Ladder& side = buy ? asks : bids;
        const Side s = buy ? Side::Ask : Side::Bid;
        Qty lo = buy ? params.ask_trade_qty_lo : params.bid_trade_qty_lo;
        Qty hi = buy ? params.ask_trade_qty_hi : params.bid_trade_qty_hi;
        Qty avail = side.front().qty;
        if (avail < 2) return;  // unreachable with valid thresholds
        Qty v = draw_qty(lo, std::min(hi, avail - 1));

        OrderEvent ev;
        ev.t = ts;
        ev.kind = EventKind::Market;
        ev.side = s;
        ev.price = Price{side.front().price_milli};
        ev.qty = v;
        ev.aggressor = buy ? Aggressor::Buy : Aggressor::Sell;
        gt.events.push_back(ev);
        gt.prints.push_back({ts, gt.events.size() - 1, ev.price, v, s, false});

        side.front().qty -= v;
        QuoteBatch qb;
        qb.t = ts;
        qb.lines.push_back(make_record(ts, s, 1, side.front().price_milli, side.front().qty));
        gt.quote_updates.push_back(std::move(qb));

        Qty threshold = buy ? params.ask_refill_threshold : params.bid_refill_threshold;
        if (side.front().qty <= threshold) {
            Timestamp rts{last_ms + gap};
            last_ms = rts.millis;
            Qty target = buy ? draw_qty(params.ask_level_qty_lo, params.ask_level_qty_hi)
                             : draw_qty(params.bid_level_qty_lo, params.bid_level_qty_hi);
            Qty add = target - side.front().qty;
            side.front().qty = target;
            OrderEvent lim;
            lim.t = rts;
            lim.kind = EventKind::Limit;
            lim.side = s;
            lim.price = Price{side.front().price_milli};
            lim.qty = add;
            gt.events.push_back(lim);
            QuoteBatch rb;
            rb.t = rts;
            rb.lines.push_back(make_record(rts, s, 1, side.front().price_milli, target));
            gt.quote_updates.push_back(std::move(rb));
        }
    };

    while (true) {
        t += wait(rng);
        if (t > params.horizon_s) break;
        Timestamp ts{next_ms(t)};
        double u = unif(rng) * total;
        if (u < rate_up_lc) {
            shift(ts, /*up=*/true, /*market=*/false);
        } else if (u < rate_up_lc + rate_down_lc) {
            shift(ts, /*up=*/false, /*market=*/false);
        } else if (u < rate_up_lc + rate_down_lc + rate_buy) {
            if (unif(rng) < params.rho_agg)
                shift(ts, /*up=*/true, /*market=*/true);
            else
                partial(ts, /*buy=*/true);
        } else {
            if (unif(rng) < params.rho_agg)
                shift(ts, /*up=*/false, /*market=*/true);
            else
                partial(ts, /*buy=*/false);
        }
    }
    return gt;
}

namespace {

double sample_lag(std::mt19937_64& rng, const skellam::LagDensity& d) {
    using Kind = skellam::LagDensity::Kind;
    switch (d.kind) {
        case Kind::Dirac:
            return d.dirac_value;
        case Kind::Gaussian:
            return std::normal_distribution<double>(d.mean, d.sd)(rng);
        case Kind::Empirical: {
            std::discrete_distribution<std::size_t> pick(d.weights.begin(), d.weights.end());
            std::size_t b = pick(rng);
            return std::uniform_real_distribution<double>(d.edges[b], d.edges[b + 1])(rng);
        }
    }
    return 0.0;
}

// Random composition of v into k positive parts (k <= v).
std::vector<Qty> split_parts(std::mt19937_64& rng, Qty v, int k) {
    if (k <= 1 || v < 2) return {v};
    k = static_cast<int>(std::min<Qty>(k, v));
    std::set<Qty> cuts;
    std::uniform_int_distribution<Qty> cut(1, v - 1);
    while (static_cast<int>(cuts.size()) < k - 1) cuts.insert(cut(rng));
    std::vector<Qty> parts;
    Qty prev = 0;
    for (Qty c : cuts) {
        parts.push_back(c - prev);
        prev = c;
    }
    parts.push_back(v - prev);
    return parts;
}

}  // namespace

RenderResult render(const GroundTruth& gt, const ArtifactConfig& config, std::uint64_t seed) {
    config.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    RenderResult out;
    std::vector<tick::TradeRecord> trades;
    std::vector<LabeledLine> labels;
    std::int64_t prev_trade_ms = std::numeric_limits<std::int64_t>::min();
    std::uniform_int_distribution<int> split_draw(config.split_min, config.split_max);

    auto push_line = [&](std::int64_t ms, std::int64_t price_milli, Qty qty, LineLabel label,
                         std::int64_t event_id) {
        ms = std::max(ms, prev_trade_ms);
        prev_trade_ms = ms;
        trades.push_back({Timestamp{ms}, Price{price_milli}, qty});
        labels.push_back({trades.size(), label, event_id});
    };

    for (const TradePrint& p : gt.prints) {
        const std::int64_t eid = static_cast<std::int64_t>(p.event_id);
        bool iceberg = !p.aggressive && config.iceberg_fraction > 0 &&
                       unif(rng) < config.iceberg_fraction;
        if (iceberg) {
            Qty hidden = std::uniform_int_distribution<Qty>(config.iceberg_hidden_lo,
                                                            config.iceberg_hidden_hi)(rng);
            push_line(p.t.millis, p.price.milli, p.qty + hidden, LineLabel::IcebergResidual, eid);
        } else {
            int k = split_draw(rng);
            auto parts = split_parts(rng, p.qty, k);
            std::vector<std::int64_t> offs(parts.size(), 0);
            for (std::size_t j = 1; j < parts.size(); ++j)
                offs[j] = std::uniform_int_distribution<std::int64_t>(
                    0, config.split_jitter_ms)(rng);
            std::sort(offs.begin(), offs.end());
            for (std::size_t j = 0; j < parts.size(); ++j)
                push_line(p.t.millis + offs[j], p.price.milli, parts[j], LineLabel::Event, eid);
        }
        if (config.offbook_fraction > 0 && unif(rng) < config.offbook_fraction) {
            std::int64_t tick = gt.params.tick_milli;
            std::int64_t price = p.price.milli + (unif(rng) < 0.5 ? tick : -tick);
            if (price <= 0) price = p.price.milli + tick;
            Qty q = std::uniform_int_distribution<Qty>(config.offbook_qty_lo,
                                                       config.offbook_qty_hi)(rng);
            push_line(prev_trade_ms, price, q, LineLabel::OffBook, -1);
        }
    }

    std::vector<QuoteRecord> quotes;
    const Timestamp t0{gt.params.session_start_ms};
    for (std::size_t i = 0; i < gt.initial.asks.size(); ++i)
        quotes.push_back(make_record(t0, Side::Ask, static_cast<int>(i) + 1,
                                     gt.initial.asks[i].price.milli, gt.initial.asks[i].qty));
    for (std::size_t i = 0; i < gt.initial.bids.size(); ++i)
        quotes.push_back(make_record(t0, Side::Bid, static_cast<int>(i) + 1,
                                     gt.initial.bids[i].price.milli, gt.initial.bids[i].qty));

    // Rendered quote order must follow true event order so that replaying the
    // file walks through the same book states; a one-millisecond floor keeps
    // distinct updates from merging into one batch.
    std::int64_t prev_q_ms = t0.millis;
    for (const QuoteBatch& qb : gt.quote_updates) {
        double lag = sample_lag(rng, config.lag_density);
        std::int64_t ms = qb.t.millis + std::llround(lag * 1000.0);
        ms = std::max(ms, prev_q_ms + 1);
        prev_q_ms = ms;
        for (QuoteRecord r : qb.lines) {
            r.t = Timestamp{ms};
            quotes.push_back(r);
        }
    }

    out.trades = tick::write_trades(trades);
    out.quotes = tick::write_quotes(quotes);
    out.labels = std::move(labels);
    return out;
}

std::string labels_to_csv(const std::vector<LabeledLine>& labels) {
    std::ostringstream os;
    os << "trade_line,label,event_id\n";
    for (const auto& l : labels)
        os << l.line << ',' << label_name(l.label) << ',' << l.event_id << '\n';
    return os.str();
}

std::vector<LabeledLine> labels_from_csv(const std::string& text) {
    std::vector<LabeledLine> out;
    std::istringstream is(text);
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::invalid_argument("labels csv: malformed line: " + line);
        LabeledLine l;
        l.line = std::stoull(line.substr(0, c1));
        std::string name = line.substr(c1 + 1, c2 - c1 - 1);
        if (name == "EVENT")
            l.label = LineLabel::Event;
        else if (name == "ICEBERG_RESIDUAL")
            l.label = LineLabel::IcebergResidual;
        else if (name == "OFF_BOOK")
            l.label = LineLabel::OffBook;
        else
            throw std::invalid_argument("labels csv: unknown label: " + name);
        l.event_id = std::stoll(line.substr(c2 + 1));
        out.push_back(l);
    }
    return out;
}

namespace {

void set_lag_key(skellam::LagDensity& d, bool& kind_seen, const std::string& key,
                 const std::string& value) {
    if (key == "lag_kind") {
        kind_seen = true;
        if (value == "dirac")
            d.kind = skellam::LagDensity::Kind::Dirac;
        else if (value == "gaussian")
            d.kind = skellam::LagDensity::Kind::Gaussian;
        else if (value == "uniform")
            d.kind = skellam::LagDensity::Kind::Empirical;
        else
            throw std::invalid_argument("scenario: unknown lag_kind: " + value);
    } else if (key == "lag_value") {
        d.dirac_value = std::stod(value);
    } else if (key == "lag_mean") {
        d.mean = std::stod(value);
    } else if (key == "lag_sd") {
        d.sd = std::stod(value);
    } else if (key == "lag_lo") {
        if (d.edges.size() != 2) d.edges = {0.0, 0.0};
        d.edges[0] = std::stod(value);
        d.weights = {1.0};
    } else if (key == "lag_hi") {
        if (d.edges.size() != 2) d.edges = {0.0, 0.0};
        d.edges[1] = std::stod(value);
        d.weights = {1.0};
    } else {
        throw std::invalid_argument("scenario: unknown key: " + key);
    }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    Scenario s;
    bool lag_kind_seen = false;
    std::istringstream is(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                        ": expected key = value");
        auto trim = [](std::string v) {
            auto b = v.find_first_not_of(" \t");
            auto e = v.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                        ": empty key or value");

        FlowParams& f = s.flow;
        ArtifactConfig& a = s.artifacts;
        if (key == "lambda_lc_plus") f.lambda_lc_plus = std::stod(value);
        else if (key == "lambda_lc_minus") f.lambda_lc_minus = std::stod(value);
        else if (key == "lambda_m_plus") f.lambda_m_plus = std::stod(value);
        else if (key == "lambda_m_minus") f.lambda_m_minus = std::stod(value);
        else if (key == "rho_agg") f.rho_agg = std::stod(value);
        else if (key == "horizon_s") f.horizon_s = std::stod(value);
        else if (key == "tick_milli") f.tick_milli = std::stoll(value);
        else if (key == "depth") f.depth = std::stoi(value);
        else if (key == "initial_bid_milli") f.initial_bid_milli = std::stoll(value);
        else if (key == "session_start_ms") f.session_start_ms = std::stoll(value);
        else if (key == "min_event_gap_ms") f.min_event_gap_ms = std::stoll(value);
        else if (key == "ask_level_qty_lo") f.ask_level_qty_lo = std::stoll(value);
        else if (key == "ask_level_qty_hi") f.ask_level_qty_hi = std::stoll(value);
        else if (key == "bid_level_qty_lo") f.bid_level_qty_lo = std::stoll(value);
        else if (key == "bid_level_qty_hi") f.bid_level_qty_hi = std::stoll(value);
        else if (key == "ask_trade_qty_lo") f.ask_trade_qty_lo = std::stoll(value);
        else if (key == "ask_trade_qty_hi") f.ask_trade_qty_hi = std::stoll(value);
        else if (key == "bid_trade_qty_lo") f.bid_trade_qty_lo = std::stoll(value);
        else if (key == "bid_trade_qty_hi") f.bid_trade_qty_hi = std::stoll(value);
        else if (key == "ask_refill_threshold") f.ask_refill_threshold = std::stoll(value);
        else if (key == "bid_refill_threshold") f.bid_refill_threshold = std::stoll(value);
        else if (key == "seed") f.seed = std::stoull(value);
        else if (key == "split_min") a.split_min = std::stoi(value);
        else if (key == "split_max") a.split_max = std::stoi(value);
        else if (key == "split_jitter_ms") a.split_jitter_ms = std::stoll(value);
        else if (key == "iceberg_fraction") a.iceberg_fraction = std::stod(value);
        else if (key == "offbook_fraction") a.offbook_fraction = std::stod(value);
        else if (key == "iceberg_hidden_lo") a.iceberg_hidden_lo = std::stoll(value);
        else if (key == "iceberg_hidden_hi") a.iceberg_hidden_hi = std::stoll(value);
        else if (key == "offbook_qty_lo") a.offbook_qty_lo = std::stoll(value);
        else if (key == "offbook_qty_hi") a.offbook_qty_hi = std::stoll(value);
        else if (key == "render_seed") s.render_seed = std::stoull(value);
        else set_lag_key(a.lag_density, lag_kind_seen, key, value);
    }
    if (s.artifacts.lag_density.kind == skellam::LagDensity::Kind::Empirical &&
        s.artifacts.lag_density.edges.size() == 2) {
        s.artifacts.lag_density =
            skellam::LagDensity::uniform(s.artifacts.lag_density.edges[0],
                                         s.artifacts.lag_density.edges[1]);
    }
    s.flow.validate();
    s.artifacts.validate();
    return s;
}

std::string format_scenario(const Scenario& s) {
    std::ostringstream os;
    os.precision(17);
    const FlowParams& f = s.flow;
    const ArtifactConfig& a = s.artifacts;
    os << "lambda_lc_plus = " << f.lambda_lc_plus << '\n'
       << "lambda_lc_minus = " << f.lambda_lc_minus << '\n'
       << "lambda_m_plus = " << f.lambda_m_plus << '\n'
       << "lambda_m_minus = " << f.lambda_m_minus << '\n'
       << "rho_agg = " << f.rho_agg << '\n'
       << "horizon_s = " << f.horizon_s << '\n'
       << "tick_milli = " << f.tick_milli << '\n'
       << "depth = " << f.depth << '\n'
       << "initial_bid_milli = " << f.initial_bid_milli << '\n'
       << "session_start_ms = " << f.session_start_ms << '\n'
       << "min_event_gap_ms = " << f.min_event_gap_ms << '\n'
       << "ask_level_qty_lo = " << f.ask_level_qty_lo << '\n'
       << "ask_level_qty_hi = " << f.ask_level_qty_hi << '\n'
       << "bid_level_qty_lo = " << f.bid_level_qty_lo << '\n'
       << "bid_level_qty_hi = " << f.bid_level_qty_hi << '\n'
       << "ask_trade_qty_lo = " << f.ask_trade_qty_lo << '\n'
       << "ask_trade_qty_hi = " << f.ask_trade_qty_hi << '\n'
       << "bid_trade_qty_lo = " << f.bid_trade_qty_lo << '\n'
       << "bid_trade_qty_hi = " << f.bid_trade_qty_hi << '\n'
       << "ask_refill_threshold = " << f.ask_refill_threshold << '\n'
       << "bid_refill_threshold = " << f.bid_refill_threshold << '\n'
       << "seed = " << f.seed << '\n';
    using Kind = skellam::LagDensity::Kind;
    switch (a.lag_density.kind) {
        case Kind::Dirac:
            os << "lag_kind = dirac\nlag_value = " << a.lag_density.dirac_value << '\n';
            break;
        case Kind::Gaussian:
            os << "lag_kind = gaussian\nlag_mean = " << a.lag_density.mean
               << "\nlag_sd = " << a.lag_density.sd << '\n';
            break;
        case Kind::Empirical:
            os << "lag_kind = uniform\nlag_lo = " << a.lag_density.edges.front()
               << "\nlag_hi = " << a.lag_density.edges.back() << '\n';
            break;
    }
    os << "split_min = " << a.split_min << '\n'
       << "split_max = " << a.split_max << '\n'
       << "split_jitter_ms = " << a.split_jitter_ms << '\n'
       << "iceberg_fraction = " << a.iceberg_fraction << '\n'
       << "offbook_fraction = " << a.offbook_fraction << '\n'
       << "iceberg_hidden_lo = " << a.iceberg_hidden_lo << '\n'
       << "iceberg_hidden_hi = " << a.iceberg_hidden_hi << '\n'
       << "offbook_qty_lo = " << a.offbook_qty_lo << '\n'
       << "offbook_qty_hi = " << a.offbook_qty_hi << '\n'
       << "render_seed = " << s.render_seed << '\n';
    return os.str();
}

}  // namespace flowrecon::synth
