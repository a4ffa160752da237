#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowrecon/lob.hpp"
#include "flowrecon/skellam.hpp"
#include "flowrecon/tickdata.hpp"

namespace flowrecon::synth {

using lob::Aggressor;
using lob::BookSnapshot;
using lob::EventKind;
using lob::OrderEvent;
using tick::Price;
using tick::Qty;
using tick::QuoteRecord;
using tick::Side;
using tick::Timestamp;

/// One-tick-regime flow simulator parameters. Price-moving flows are
/// homogeneous Poisson: full-best-queue cancellations at rate lambda_lc per
/// side, aggressive market orders at rate lambda_m per side. Market orders
/// are aggressive with probability rho_agg, so the total market-order rate
/// per side is lambda_m / rho_agg.
///
/// Quantity ranges are deliberately side-disjoint (ask levels vs bid levels,
/// ask partials vs bid partials) so that a trade line can never quantity-match
/// a book decrement of the wrong side.
struct FlowParams {
    double lambda_lc_plus{5.0};   // full cancel of best ask (mid up), events/s
    double lambda_lc_minus{5.0};  // full cancel of best bid (mid down)
    double lambda_m_plus{1.0};    // aggressive buy (consumes best ask, mid up)
    double lambda_m_minus{1.0};   // aggressive sell
    double rho_agg{0.6};

    double horizon_s{600.0};
    std::int64_t tick_milli{10};
    int depth{5};
    std::int64_t initial_bid_milli{100000};
    std::int64_t session_start_ms{36'000'000};  // 10:00:00
    std::int64_t min_event_gap_ms{1};

    // Displayed-quantity ranges (inclusive).
    Qty ask_level_qty_lo{100}, ask_level_qty_hi{180};
    Qty bid_level_qty_lo{300}, bid_level_qty_hi{380};
    Qty ask_trade_qty_lo{1}, ask_trade_qty_hi{10};
    Qty bid_trade_qty_lo{11}, bid_trade_qty_hi{20};
    // Best-level replenishment trigger. The bid threshold sits above the ask
    // level range so full-level quantities stay side-disjoint too.
    Qty ask_refill_threshold{20}, bid_refill_threshold{220};

    std::uint64_t seed{1};

    /// The toy-model intensities this flow realizes.
    skellam::SkellamParams skellam() const;
    void validate() const;
};

/// Feed-production artifacts applied when rendering the true flow into files.
struct ArtifactConfig {
    skellam::LagDensity lag_density{skellam::LagDensity::dirac(0.0)};  // quotes vs trades
    int split_min{1};  // trades-file lines per market order, uniform
    int split_max{1};
    std::int64_t split_jitter_ms{3};  // max timestamp spread within a split
    double iceberg_fraction{0.0};     // hidden-liquidity executions
    double offbook_fraction{0.0};     // extra lines with no book counterpart

    // Hidden quantity added to an iceberg trade print; outside every
    // displayed-quantity range so the line cannot match any book decrement.
    Qty iceberg_hidden_lo{1000}, iceberg_hidden_hi{4999};
    Qty offbook_qty_lo{10000}, offbook_qty_hi{19999};

    void validate() const;
};

struct TradePrint {
    Timestamp t;
    std::size_t event_id{0};  // index into GroundTruth::events
    Price price;
    Qty qty{0};
    Side side{Side::Ask};  // side whose liquidity was consumed
    bool aggressive{false};
};

struct QuoteBatch {
    Timestamp t;
    std::vector<QuoteRecord> lines;  // level-indexed records for this update
};

struct MidPoint {
    Timestamp t;
    std::int64_t half_milli{0};  // bid + ask, exact
};

struct GroundTruth {
    FlowParams params;
    BookSnapshot initial;
    std::vector<OrderEvent> events;  // true flow, Market events carry aggressor
    std::vector<TradePrint> prints;
    std::vector<QuoteBatch> quote_updates;  // book publication, pre-lag
    std::vector<MidPoint> mid_path;
};

enum class LineLabel : std::uint8_t { Event, IcebergResidual, OffBook };

const char* label_name(LineLabel l);

struct LabeledLine {
    std::size_t line{0};  // 1-based trades-file line number
    LineLabel label{LineLabel::Event};
    std::int64_t event_id{-1};  // -1 for off-book lines
};

struct RenderResult {
    std::string trades;
    std::string quotes;
    std::vector<LabeledLine> labels;  // one per trades-file line, in order
};

/// Simulates the true order flow through the minimal matching engine.
/// Deterministic per params.seed.
GroundTruth simulate(const FlowParams& params);

/// Renders the true flow into trades/quotes file bytes with artifacts.
/// Quote updates are written at trade time plus a lag drawn per update;
/// rendered quote order is kept identical to the true event order so the
/// files always replay to a consistent book. Deterministic per seed.
RenderResult render(const GroundTruth& gt, const ArtifactConfig& config, std::uint64_t seed);

std::string labels_to_csv(const std::vector<LabeledLine>& labels);
std::vector<LabeledLine> labels_from_csv(const std::string& text);

/// Flat `key = value` scenario files covering every FlowParams/ArtifactConfig
/// field; unknown keys are rejected.
struct Scenario {
    FlowParams flow;
    ArtifactConfig artifacts;
    std::uint64_t render_seed{1};
};

Scenario parse_scenario(const std::string& text);
std::string format_scenario(const Scenario& s);

}  // namespace flowrecon::synth
