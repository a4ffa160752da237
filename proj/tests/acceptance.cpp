// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] is the path to the flowrecon CLI binary (used by the
// manifest reproducibility criterion).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "flowrecon/hawkes.hpp"
#include "flowrecon/lob.hpp"
#include "flowrecon/matcher.hpp"
#include "flowrecon/signer.hpp"
#include "flowrecon/skellam.hpp"
#include "flowrecon/synthgen.hpp"
#include "flowrecon/tickdata.hpp"

namespace fs = std::filesystem;
using namespace flowrecon;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
    std::printf("criterion %d (%s): %s%s%s\n", idx, name.c_str(), ok ? "PASS" : "FAIL",
                detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

lob::EventFlow replay(const std::string& quotes_csv, int depth) {
    lob::EventFlowOptions opts;
    opts.depth = depth;
    return lob::quotes_to_eventflow(tick::parse_quotes(std::string_view(quotes_csv), depth),
                                    opts);
}

// ---------------------------------------------------------------------------
// Criterion 1: golden micro-feed fixtures.

const char kShiftQuotes[] =
    "34819.37,A,1,27.54,326\n34819.37,A,2,27.545,530\n34819.37,A,3,27.55,989\n"
    "34819.37,A,4,27.555,318\n34819.37,A,5,27.56,79\n34819.37,A,6,27.565,275\n"
    "34819.37,A,7,27.57,468\n34819.37,A,8,27.58,100\n34819.37,A,9,27.585,612\n"
    "34819.37,A,10,27.59,1638\n"
    "34819.37,A,1,27.52,66\n34819.37,A,2,27.54,326\n34819.37,A,3,27.545,530\n"
    "34819.37,A,4,27.55,989\n34819.37,A,5,27.555,318\n34819.37,A,6,27.56,79\n"
    "34819.37,A,7,27.565,275\n34819.37,A,8,27.57,468\n34819.37,A,9,27.58,100\n"
    "34819.37,A,10,27.585,612\n";

const char kDepletionQuotes[] =
    "32472.086,B,1,27.32,267\n32472.086,B,2,27.31,500\n32472.086,B,3,27.29,585\n"
    "32472.086,B,4,27.285,127\n32472.086,B,5,27.27,500\n32472.086,B,6,27.2,300\n"
    "32472.086,B,7,27.16,500\n32472.086,B,8,27.155,200\n32472.086,B,9,27.15,1750\n"
    "32472.086,B,10,27.1,223\n32472.086,B,2,27.31,710\n"
    "32472.252,B,1,27.31,710\n32472.252,B,2,27.29,585\n32472.252,B,3,27.285,127\n"
    "32472.252,B,4,27.27,500\n32472.252,B,5,27.2,300\n32472.252,B,6,27.16,500\n"
    "32472.252,B,7,27.155,200\n32472.252,B,8,27.15,1750\n32472.252,B,9,27.1,223\n"
    "32472.252,B,10,27.095,598\n";

const char kAggregationQuotes[] =
    "32951.419,A,1,27.45,482\n32951.419,A,2,27.455,730\n32951.419,A,3,27.465,200\n"
    "32951.419,A,4,27.47,200\n32951.419,A,5,27.475,200\n32951.419,A,6,27.48,279\n"
    "32951.419,A,7,27.485,1813\n32951.419,A,8,27.495,529\n32951.419,A,9,27.5,3030\n"
    "32951.419,A,10,27.505,200\n32951.419,A,1,27.455,730\n";

const char kLooseQuotes[] =
    "33046.84,A,1,27.535,3951\n33085.836,B,1,27.51,2264\n"
    "33095.297,B,1,27.51,839\n33095.31,A,1,27.535,3601\n";

const char kLooseTrades[] =
    "33095.296,27.51,100\n33095.296,27.51,202\n33095.296,27.51,303\n"
    "33095.296,27.51,486\n33095.296,27.51,334\n"
    "33095.296,27.535,210\n33095.299,27.535,140\n";

struct MarketRow {
    std::int64_t t_ms;
    char side;
    std::int64_t price_milli;
    tick::Qty qty;

    friend bool operator==(const MarketRow&, const MarketRow&) = default;
};

std::vector<MarketRow> market_rows(const lob::EventFlow& flow) {
    std::vector<MarketRow> rows;
    for (const auto& e : flow.events)
        if (e.kind == lob::EventKind::Market)
            rows.push_back({e.t.millis, tick::side_char(e.side), e.price.milli, e.qty});
    return rows;
}

void criterion_1() {
    auto t0 = Clock::now();
    std::ostringstream why;
    bool ok = true;

    {  // Quotes-only shift: exactly one LIMIT A 27.52 66.
        auto flow = replay(kShiftQuotes, 10);
        bool good = flow.events.size() == 1 &&
                    flow.events[0] ==
                        lob::OrderEvent{{34819370}, lob::EventKind::Limit, tick::Side::Ask,
                                        {27520}, 66, std::nullopt};
        if (!good) {
            ok = false;
            why << "shift fixture produced " << flow.events.size() << " events; ";
        }
    }
    {  // Exact single-line match: MARKET B 27.32 267.
        auto trades = tick::parse_trades(std::string_view("32472.252,27.32,267\n"));
        auto res = matching::match1(trades, replay(kDepletionQuotes, 10), 0.4);
        auto rows = market_rows(res.flow);
        if (!(res.unmatched.empty() && rows.size() == 1 &&
              rows[0] == MarketRow{32472252, 'B', 27320, 267})) {
            ok = false;
            why << "single-line fixture mismatch; ";
        }
    }
    {  // Same-timestamp aggregation: MARKET A 27.45 482, 7 ms lag.
        auto trades =
            tick::parse_trades(std::string_view("32951.412,27.45,300\n32951.412,27.45,182\n"));
        auto res = matching::match2(trades, replay(kAggregationQuotes, 10), 0.4, 9);
        auto rows = market_rows(res.flow);
        if (!(res.unmatched.empty() && rows.size() == 1 &&
              rows[0] == MarketRow{32951419, 'A', 27450, 482} &&
              res.assignments.at(0).lag_ms == 7)) {
            ok = false;
            why << "aggregation fixture mismatch; ";
        }
    }
    {  // Loose aggregation: MARKET B 27.51 1425 and MARKET A 27.535 350.
        auto trades = tick::parse_trades(std::string_view(kLooseTrades));
        auto res = matching::match3(trades, replay(kLooseQuotes, 1), 0.4, 9, 0.005);
        auto rows = market_rows(res.flow);
        if (!(res.unmatched.empty() && rows.size() == 2 &&
              rows[0] == MarketRow{33095297, 'B', 27510, 1425} &&
              rows[1] == MarketRow{33095310, 'A', 27535, 350})) {
            ok = false;
            why << "loose-aggregation fixture mismatch; ";
        }
    }
    double dt = seconds_since(t0);
    if (dt >= 1.0) {
        ok = false;
        why << "runtime " << dt << " s >= 1 s; ";
    }
    std::ostringstream detail;
    detail << "4 fixtures, " << std::fixed << dt << " s";
    report(1, "golden fixtures", ok, ok ? detail.str() : why.str());
}

// ---------------------------------------------------------------------------
// Criterion 2: matching oracle exactness on artifact feeds.

synth::FlowParams busy_params(std::uint64_t seed, double horizon_s) {
    synth::FlowParams p;
    p.lambda_lc_plus = p.lambda_lc_minus = 2.0;
    p.lambda_m_plus = p.lambda_m_minus = 0.6;
    p.rho_agg = 0.6;
    p.horizon_s = horizon_s;
    p.min_event_gap_ms = 8;
    p.seed = seed;
    return p;
}

void criterion_2() {
    auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream why;
    std::size_t total_lines = 0;
    for (std::uint64_t seed = 1; seed <= 20 && ok; ++seed) {
        auto gt = synth::simulate(busy_params(seed, 1500.0));
        synth::ArtifactConfig ac;
        ac.lag_density = skellam::LagDensity::uniform(0.05, 0.15);
        ac.split_min = 1;
        ac.split_max = 5;
        ac.split_jitter_ms = 3;
        auto r = synth::render(gt, ac, seed * 7919 + 3);
        auto trades = tick::parse_trades(std::string_view(r.trades));
        total_lines += trades.size();

        auto res = matching::match3(trades, replay(r.quotes, 5), 0.4, 9, 0.005);
        if (!res.unmatched.empty()) {
            ok = false;
            why << "seed " << seed << ": " << res.unmatched.size() << " unmatched of "
                << trades.size();
            break;
        }
        for (const auto& [line, a] : res.assignments) {
            const auto& truth = gt.events.at(
                static_cast<std::size_t>(r.labels.at(line).event_id));
            const auto& got = res.flow.events.at(a.event_index);
            if (!got.aggressor || got.aggressor != truth.aggressor) {
                ok = false;
                why << "seed " << seed << ": wrong aggressor on line " << line + 1;
                break;
            }
        }
        if (!ok) break;

        bool any_split = false;
        std::set<std::int64_t> seen;
        for (const auto& lab : r.labels) any_split |= !seen.insert(lab.event_id).second;
        auto res1 = matching::match1(trades, replay(r.quotes, 5), 0.4);
        if (any_split && res1.assignments.size() >= res.assignments.size()) {
            ok = false;
            why << "seed " << seed << ": singleton matching not strictly worse ("
                << res1.assignments.size() << " vs " << res.assignments.size() << ")";
        }
    }
    double dt = seconds_since(t0);
    if (ok && dt >= 30.0) {
        ok = false;
        why << "runtime " << dt << " s >= 30 s";
    }
    std::ostringstream detail;
    detail << "20 seeds, " << total_lines << " trade lines, " << std::fixed << dt << " s";
    report(2, "matching oracle exactness", ok, ok ? detail.str() : why.str());
}

// ---------------------------------------------------------------------------
// Criterion 3: unmatched set equals the labeled artifact lines.

void criterion_3() {
    bool ok = true;
    std::ostringstream why;
    std::size_t total_artifacts = 0;
    for (std::uint64_t seed = 1; seed <= 10 && ok; ++seed) {
        auto gt = synth::simulate(busy_params(seed + 100, 800.0));
        synth::ArtifactConfig ac;
        ac.lag_density = skellam::LagDensity::uniform(0.05, 0.15);
        ac.iceberg_fraction = 0.1;
        ac.offbook_fraction = 0.05;
        auto r = synth::render(gt, ac, seed * 104729 + 11);
        auto trades = tick::parse_trades(std::string_view(r.trades));
        auto res = matching::match3(trades, replay(r.quotes, 5), 0.4, 9, 0.005);

        std::set<std::size_t> unmatched(res.unmatched_indices.begin(),
                                        res.unmatched_indices.end());
        std::set<std::size_t> labeled;
        for (const auto& lab : r.labels)
            if (lab.label != synth::LineLabel::Event) labeled.insert(lab.line - 1);
        total_artifacts += labeled.size();
        if (labeled.empty()) {
            ok = false;
            why << "seed " << seed << ": no artifact lines generated";
        } else if (unmatched != labeled) {
            ok = false;
            why << "seed " << seed << ": unmatched set (" << unmatched.size()
                << ") differs from labeled artifacts (" << labeled.size() << ")";
        }
    }
    std::ostringstream detail;
    detail << "10 seeds, " << total_artifacts << " artifact lines, exact set equality";
    report(3, "artifact accounting", ok, ok ? detail.str() : why.str());
}

// ---------------------------------------------------------------------------
// Criterion 4: procedure monotonicity on randomized scenarios.

void criterion_4() {
    std::mt19937_64 rng(20240817);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    bool ok = true;
    std::ostringstream why;
    for (int i = 0; i < 100 && ok; ++i) {
        synth::FlowParams p;
        p.lambda_lc_plus = uni(0.5, 3.0);
        p.lambda_lc_minus = uni(0.5, 3.0);
        p.lambda_m_plus = uni(0.1, 1.0);
        p.lambda_m_minus = uni(0.1, 1.0);
        p.rho_agg = uni(0.3, 0.9);
        p.horizon_s = uni(50.0, 150.0);
        p.min_event_gap_ms = 1 + static_cast<std::int64_t>(rng() % 8);
        p.seed = rng();
        synth::ArtifactConfig ac;
        double lo = uni(0.0, 0.1), hi = lo + uni(0.01, 0.15);
        ac.lag_density = skellam::LagDensity::uniform(lo, hi);
        ac.split_min = 1;
        ac.split_max = 1 + static_cast<int>(rng() % 5);
        ac.split_jitter_ms = static_cast<std::int64_t>(rng() % 4);
        ac.iceberg_fraction = uni(0.0, 0.1);
        ac.offbook_fraction = uni(0.0, 0.1);

        auto gt = synth::simulate(p);
        auto r = synth::render(gt, ac, rng());
        auto trades = tick::parse_trades(std::string_view(r.trades));
        if (trades.empty()) continue;
        auto m1 = matching::match1(trades, replay(r.quotes, p.depth), 0.4).assignments.size();
        auto m2 =
            matching::match2(trades, replay(r.quotes, p.depth), 0.4, 9).assignments.size();
        auto m3 = matching::match3(trades, replay(r.quotes, p.depth), 0.4, 9, 0.005)
                      .assignments.size();
        if (m1 > m2 || m2 > m3) {
            ok = false;
            why << "scenario " << i << ": matched counts " << m1 << " / " << m2 << " / "
                << m3;
        }
    }
    report(4, "procedure monotonicity", ok, ok ? "100 randomized scenarios" : why.str());
}

// ---------------------------------------------------------------------------
// Criterion 5: Skellam numerics against brute-force summation.

double poisson_log_pmf(long long k, double mu) {
    return -mu + static_cast<double>(k) * std::log(mu) -
           std::lgamma(static_cast<double>(k) + 1);
}

double brute_cdf(long long n, double mu1, double mu2) {
    auto tail = [](double mu) {
        return static_cast<long long>(mu + 40.0 * std::sqrt(mu + 1.0) + 60.0);
    };
    double total = 0.0;
    const long long jmax = mu2 == 0.0 ? 0 : tail(mu2);
    for (long long j = 0; j <= jmax; ++j) {
        const double pj = mu2 == 0.0 ? 1.0 : std::exp(poisson_log_pmf(j, mu2));
        const long long imax = n + j;
        if (imax < 0) continue;
        double cdf1 = 0.0;
        if (mu1 == 0.0) {
            cdf1 = 1.0;
        } else {
            const long long icap = std::min(imax, tail(mu1));
            for (long long i = 0; i <= icap; ++i) cdf1 += std::exp(poisson_log_pmf(i, mu1));
        }
        total += pj * cdf1;
    }
    return total;
}

void criterion_5() {
    const double mus[] = {0.0, 0.1, 1.0, 5.0, 20.0};
    double worst_brute = 0.0, worst_sym = 0.0;
    for (double mu1 : mus) {
        for (double mu2 : mus) {
            for (long long n = -5; n <= 5; ++n) {
                worst_brute = std::max(
                    worst_brute,
                    std::abs(skellam::skellam_cdf(n, mu1, mu2) - brute_cdf(n, mu1, mu2)));
                worst_sym = std::max(
                    worst_sym, std::abs(skellam::skellam_cdf(n, mu1, mu2) +
                                        skellam::skellam_cdf(-n - 1, mu2, mu1) - 1.0));
            }
        }
    }
    bool ok = worst_brute < 1e-10 && worst_sym < 1e-12;
    std::ostringstream detail;
    detail << "max |cdf - brute| = " << worst_brute << ", max symmetry defect = " << worst_sym;
    report(5, "difference-of-Poissons numerics", ok, detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 6: signing accuracy vs the toy model, Monte Carlo.

void criterion_6() {
    auto t0 = Clock::now();
    synth::FlowParams fp;
    fp.lambda_lc_plus = fp.lambda_lc_minus = 0.5;
    fp.lambda_m_plus = fp.lambda_m_minus = 0.1;
    fp.rho_agg = 0.6;
    fp.depth = 3;
    fp.horizon_s = 300000.0;
    fp.seed = 11;
    synth::ArtifactConfig ac;
    ac.lag_density = skellam::LagDensity::dirac(0.1);

    auto gt = synth::simulate(fp);
    auto r = synth::render(gt, ac, 3);
    auto trades = tick::parse_trades(std::string_view(r.trades));
    auto flow = replay(r.quotes, fp.depth);

    std::vector<signing::Sign> ref(trades.size(), signing::Sign::Undecided);
    for (const auto& lab : r.labels) {
        const auto& ev = gt.events.at(static_cast<std::size_t>(lab.event_id));
        ref[lab.line - 1] = *ev.aggressor == lob::Aggressor::Buy ? signing::Sign::Buy
                                                                 : signing::Sign::Sell;
    }

    // Lag grid: the density is a point mass at 0.1 s, where the model value
    // is exactly 1 by convention; the grid brackets it without touching it.
    std::vector<double> grid;
    for (double s = -0.3; s <= 0.301; s += 0.05)
        if (std::abs(s - 0.1) > 1e-9) grid.push_back(s);
    for (double s : {0.06, 0.08, 0.09, 0.11, 0.12, 0.14}) grid.push_back(s);
    std::vector<std::int64_t> lags_ms;
    for (double s : grid) lags_ms.push_back(std::llround(s * 1000.0));

    auto perf = signing::sweep(trades, flow.best_quotes, ref, lags_ms);
    auto params = fp.skellam();

    bool ok = trades.size() >= 100000;
    std::ostringstream why;
    if (!ok) why << "only " << trades.size() << " trades";
    double worst_z = 0.0;
    double dip_acc = 2.0, dip_lag = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double acc = perf[i].accuracy();
        double model = skellam::p_expected(params, ac.lag_density, grid[i]);
        double se =
            std::sqrt(model * (1.0 - model) / static_cast<double>(perf[i].total()));
        double z = se > 0.0 ? (acc - model) / se : 0.0;
        worst_z = std::max(worst_z, std::abs(z));
        if (acc < dip_acc) {
            dip_acc = acc;
            dip_lag = grid[i];
        }
        if (std::abs(z) > 2.0) {
            ok = false;
            why << "lag " << grid[i] << ": empirical " << acc << " vs model " << model
                << " (z = " << z << "); ";
        }
    }
    if (!(dip_lag >= 0.05 && dip_lag <= 0.15)) {
        ok = false;
        why << "accuracy dip at lag " << dip_lag << " outside [0.05, 0.15]; ";
    }
    double dt = seconds_since(t0);
    if (dt >= 300.0) {
        ok = false;
        why << "runtime " << dt << " s >= 300 s; ";
    }
    std::ostringstream detail;
    detail << trades.size() << " trades, max |z| = " << worst_z << ", dip at "
           << dip_lag << " s, " << std::fixed << dt << " s";
    report(6, "model vs Monte Carlo signing", ok, ok ? detail.str() : why.str());
}

// ---------------------------------------------------------------------------
// Criterion 7: self-excitation parameter recovery.

void criterion_7() {
    hawkes::HawkesParams gen{1.0, 0.5, 1.0};
    int recovered = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto s = hawkes::simulate_hawkes(gen, 5000.0, seed);  // ~1e4 events
        auto res = hawkes::fit(s);
        if (std::abs(res.ratio - 0.5) <= 0.1) ++recovered;
    }

    auto small = hawkes::simulate_hawkes(gen, 600.0, 4242);  // ~1e3 events
    double worst = 0.0;
    for (auto p : {hawkes::HawkesParams{1.0, 0.5, 1.0}, hawkes::HawkesParams{0.6, 0.3, 2.0},
                   hawkes::HawkesParams{2.0, 1.0, 4.0}}) {
        double a = hawkes::log_likelihood(small, p);
        double b = hawkes::log_likelihood_brute(small, p);
        worst = std::max(worst, std::abs(a - b) / (std::abs(b) + 1.0));
    }

    bool ok = recovered >= 18 && worst < 1e-9;
    std::ostringstream detail;
    detail << recovered << "/20 seeds within 0.1, recursive-vs-brute relative gap = " << worst;
    report(7, "self-excitation recovery", ok, detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 8: raw vs matched endogeneity on split feeds.

void criterion_8() {
    int self_ok = 0, cross_ok = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto gt = synth::simulate(busy_params(seed, 1500.0));
        synth::ArtifactConfig ac;
        ac.lag_density = skellam::LagDensity::uniform(0.05, 0.15);
        ac.split_min = 3;
        ac.split_max = 3;
        ac.split_jitter_ms = 3;
        auto r = synth::render(gt, ac, seed * 977 + 5);
        auto trades = tick::parse_trades(std::string_view(r.trades));
        auto res = matching::match3(trades, replay(r.quotes, 5), 0.4, 9, 0.005);

        std::vector<std::int64_t> raw_ms, matched_ms, raw_cancel_ms, matched_cancel_ms;
        for (const auto& t : trades) raw_ms.push_back(t.t.millis);
        std::int64_t lo = raw_ms.front(), hi = raw_ms.back();
        for (const auto& ev : res.flow.events) {
            lo = std::min(lo, ev.t.millis);
            hi = std::max(hi, ev.t.millis);
            if (ev.kind == lob::EventKind::Market) {
                matched_ms.push_back(ev.t.millis);
                raw_cancel_ms.push_back(ev.t.millis);  // unmatched view: still a cancel
            } else if (ev.kind == lob::EventKind::Cancel) {
                raw_cancel_ms.push_back(ev.t.millis);
                matched_cancel_ms.push_back(ev.t.millis);
            }
        }
        auto raw = hawkes::from_millis(raw_ms, lo - 1, hi);
        auto matched = hawkes::from_millis(matched_ms, lo - 1, hi);
        auto raw_cancels = hawkes::from_millis(raw_cancel_ms, lo - 1, hi);
        auto matched_cancels = hawkes::from_millis(matched_cancel_ms, lo - 1, hi);

        auto s = hawkes::compare_flows(raw, matched, hawkes::Model::Self);
        auto c = hawkes::compare_flows(raw, matched, hawkes::Model::Cross, &raw_cancels,
                                       &matched_cancels);
        if (s.raw.ratio > s.matched.ratio) ++self_ok;
        if (c.raw.ratio > c.matched.ratio) ++cross_ok;
    }
    bool ok = self_ok >= 18 && cross_ok >= 18;
    std::ostringstream detail;
    detail << "self " << self_ok << "/20, cross " << cross_ok
           << "/20 seeds with raw ratio above matched";
    report(8, "split-feed endogeneity inflation", ok, detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 9: manifest re-execution reproduces outputs byte for byte.

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_9(const std::string& cli) {
    bool ok = true;
    std::ostringstream why;
    auto base = fs::temp_directory_path() / "flowrecon-acceptance";
    fs::remove_all(base);
    fs::create_directories(base);

    auto run = [&](const std::string& args) {
        std::string cmd = "'" + cli + "' " + args + " >/dev/null 2>&1";
        return std::system(cmd.c_str());
    };

    // A synthetic feed to drive every subcommand.
    auto sim_dir = (base / "sim").string();
    {
        synth::Scenario sc;
        sc.flow = busy_params(3, 200.0);
        sc.artifacts.lag_density = skellam::LagDensity::uniform(0.05, 0.15);
        sc.artifacts.split_max = 4;
        sc.artifacts.iceberg_fraction = 0.05;
        sc.artifacts.offbook_fraction = 0.02;
        sc.render_seed = 17;
        std::ofstream(base / "scenario.txt") << synth::format_scenario(sc);
    }

    std::vector<std::pair<std::string, std::string>> runs = {
        {"sim", "--output-dir '" + sim_dir + "' simulate --scenario '" +
                    (base / "scenario.txt").string() + "'"},
        {"match", ""},
        {"sign", ""},
        {"skellam",
         "--output-dir '" + (base / "skellam").string() +
             "' skellam --mode curve --lag-grid -0.3:0.3:0.02 --lag-kind uniform "
             "--lag-lo 0.05 --lag-hi 0.15"},
        {"hawkes", ""},
    };
    std::string feed_args = " --trades '" + sim_dir + "/trades.csv' --quotes '" + sim_dir +
                            "/quotes.csv' --depth 5";
    runs[1].second = "--output-dir '" + (base / "match").string() + "' match" + feed_args;
    runs[2].second = "--output-dir '" + (base / "sign").string() + "' sign" + feed_args +
                     " --lag-grid -0.2:0.2:0.05";
    runs[4].second = "--output-dir '" + (base / "hawkes").string() + "' hawkes" + feed_args +
                     " --model self --date acc";

    for (const auto& [name, args] : runs) {
        if (run(args) != 0) {
            ok = false;
            why << name << ": run failed; ";
            continue;
        }
        auto first = base / name;
        auto redo = base / (name + "-redo");
        if (run("--output-dir '" + redo.string() + "' report --manifest '" +
                (first / "manifest.json").string() + "'") != 0) {
            ok = false;
            why << name << ": re-execution failed; ";
            continue;
        }
        std::size_t compared = 0;
        for (const auto& entry : fs::directory_iterator(first)) {
            auto fname = entry.path().filename();
            if (!fs::exists(redo / fname)) {
                ok = false;
                why << name << ": missing " << fname.string() << " on re-run; ";
                continue;
            }
            ++compared;
            if (slurp(entry.path()) != slurp(redo / fname)) {
                ok = false;
                why << name << ": " << fname.string() << " differs; ";
            }
        }
        if (compared == 0) {
            ok = false;
            why << name << ": produced no outputs; ";
        }
    }
    fs::remove_all(base);
    report(9, "manifest reproducibility", ok,
           ok ? "5 subcommands re-executed byte-identically" : why.str());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-flowrecon-cli>\n");
        return 2;
    }
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9(argv[1]);
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
