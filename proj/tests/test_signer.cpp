#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <optional>
#include <vector>

#include "flowrecon/lob.hpp"
#include "flowrecon/signer.hpp"
#include "flowrecon/tickdata.hpp"

using namespace flowrecon;
using namespace flowrecon::signing;
using lob::BestQuote;
using tick::TradeRecord;

namespace {

TradeRecord trade(std::int64_t t_ms, std::int64_t price_milli, tick::Qty qty = 1) {
    return {{t_ms}, {price_milli}, qty};
}

}  // namespace

TEST_CASE("sign trichotomy against the prevailing midquote") {
    std::vector<BestQuote> quotes = {{{1000}, 100000, 102000}};  // mid 101
    auto signs = lee_ready_sign({trade(1500, 102000),   // above mid
                                 trade(1500, 100500),   // below mid
                                 trade(1500, 101000)},  // exactly at mid
                                quotes, 0);
    REQUIRE(signs.size() == 3);
    CHECK(signs[0] == Sign::Buy);
    CHECK(signs[1] == Sign::Sell);
    CHECK(signs[2] == Sign::Undecided);
}

TEST_CASE("no quote at or before the query time leaves the trade undecided") {
    std::vector<BestQuote> quotes = {{{1000}, 100000, 102000}};
    auto signs = lee_ready_sign({trade(500, 102000)}, quotes, 0);
    CHECK(signs[0] == Sign::Undecided);
    // The snapshot exactly at the query time counts.
    signs = lee_ready_sign({trade(1000, 102000)}, quotes, 0);
    CHECK(signs[0] == Sign::Buy);
    signs = lee_ready_sign({trade(1500, 102000)}, std::vector<BestQuote>{}, 0);
    CHECK(signs[0] == Sign::Undecided);
}

TEST_CASE("the query lag shifts which snapshot prevails") {
    std::vector<BestQuote> quotes = {
        {{1000}, 100000, 102000},  // mid 101
        {{2000}, 102000, 104000},  // mid 103
    };
    auto t = trade(1500, 102000);
    CHECK(lee_ready_sign({t}, quotes, 0)[0] == Sign::Buy);      // vs mid 101
    CHECK(lee_ready_sign({t}, quotes, 499)[0] == Sign::Buy);    // still the first
    CHECK(lee_ready_sign({t}, quotes, 500)[0] == Sign::Sell);   // vs mid 103
    CHECK(lee_ready_sign({t}, quotes, -499)[0] == Sign::Buy);   // 1001 >= 1000
    CHECK(lee_ready_sign({t}, quotes, -501)[0] == Sign::Undecided);
}

TEST_CASE("sweep tallies correct, incorrect, undecided, and excluded") {
    std::vector<BestQuote> quotes = {
        {{1000}, 100000, 102000},  // mid 101
        {{2000}, 102000, 104000},  // mid 103
    };
    std::vector<TradeRecord> trades = {
        trade(1500, 102000),  // Buy at lag 0, Sell at lag 500
        trade(1500, 101000),  // at mid 101: undecided at lag 0
        trade(1500, 100500),  // Sell at lag 0
        trade(1500, 103500),  // Buy at either lag; reference undecided
    };
    std::vector<Sign> reference = {Sign::Buy, Sign::Buy, Sign::Buy, Sign::Undecided};
    auto perf = sweep(trades, quotes, reference, {0, 500});
    REQUIRE(perf.size() == 2);

    CHECK(perf[0].lag_ms == 0);
    CHECK(perf[0].correct == 1);    // the first trade
    CHECK(perf[0].incorrect == 1);  // the third
    CHECK(perf[0].undecided == 1);  // the second
    CHECK(perf[0].excluded == 1);   // the reference-less fourth, at every lag
    CHECK(perf[0].total() == 3);
    // Undecided counts against accuracy but not against decided accuracy.
    CHECK(perf[0].accuracy() == doctest::Approx(1.0 / 3.0));
    CHECK(perf[0].accuracy_decided() == doctest::Approx(0.5));

    CHECK(perf[1].lag_ms == 500);
    CHECK(perf[1].correct == 0);  // the first flips to Sell vs mid 103
    CHECK(perf[1].incorrect == 3);
    CHECK(perf[1].undecided == 0);
    CHECK(perf[1].excluded == 1);
}

TEST_CASE("reference signs come from matched aggressors") {
    lob::EventFlow flow;
    flow.events = {
        {{1000}, lob::EventKind::Market, tick::Side::Ask, {102000}, 5, lob::Aggressor::Buy},
        {{2000}, lob::EventKind::Market, tick::Side::Bid, {100000}, 7, lob::Aggressor::Sell},
    };
    std::vector<std::optional<std::size_t>> assignments = {std::size_t{0}, std::nullopt,
                                                           std::size_t{1}};
    auto signs = signs_from_flow(flow, assignments);
    REQUIRE(signs.size() == 3);
    CHECK(signs[0] == Sign::Buy);
    CHECK(signs[1] == Sign::Undecided);
    CHECK(signs[2] == Sign::Sell);
}

TEST_CASE("best lag picks the first accuracy maximum") {
    std::vector<SignaturePerformance> perf(3);
    perf[0] = {0, 5, 5, 0, 0};
    perf[1] = {10, 8, 2, 0, 0};
    perf[2] = {20, 8, 2, 0, 0};
    CHECK(best_lag_index(perf) == 1);
}

TEST_CASE("sweep serializes to CSV") {
    std::vector<SignaturePerformance> perf = {{-50, 3, 1, 1, 2}};
    auto csv = sweep_to_csv(perf);
    CHECK(csv.find("lag_ms,correct,incorrect,undecided,excluded,accuracy,accuracy_decided\n") ==
          0);
    CHECK(csv.find("-50,3,1,1,2,0.6,0.75") != std::string::npos);
}
