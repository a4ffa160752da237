// flowrecon: reconstructs message-level order flow from trades/quotes tick
// files, signs trades, evaluates signing models, and fits Hawkes models.
// Every run writes a manifest; `flowrecon report --manifest <file>`
// re-executes a run and reproduces its outputs byte for byte.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "flowrecon/hawkes.hpp"
#include "flowrecon/lob.hpp"
#include "flowrecon/matcher.hpp"
#include "flowrecon/signer.hpp"
#include "flowrecon/skellam.hpp"
#include "flowrecon/synthgen.hpp"
#include "flowrecon/tickdata.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace flowrecon;

namespace {

constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& bytes) {
    if (!p.parent_path().empty()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << bytes;
}

// Grid spec: either "a,b,c" or "start:stop:step" (inclusive stop), seconds.
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double start{}, stop{}, step{};
        char c1{}, c2{};
        std::istringstream is(spec);
        if (!(is >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw ConfigError("bad grid spec: " + spec);
        for (double v = start; v <= stop + step * 1e-9; v += step) out.push_back(v);
        return out;
    }
    std::istringstream is(spec);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw ConfigError("empty grid spec: " + spec);
    return out;
}

matching::MatchConfig match_config_from(const json& o) {
    matching::MatchConfig cfg;
    std::string proc = o.at("procedure").get<std::string>();
    if (proc == "m1")
        cfg.procedure = matching::Procedure::M1;
    else if (proc == "m2")
        cfg.procedure = matching::Procedure::M2;
    else if (proc == "m3")
        cfg.procedure = matching::Procedure::M3;
    else
        throw ConfigError("unknown procedure: " + proc);
    cfg.delta = o.at("delta").get<double>();
    cfg.max_batch = o.at("max_batch").get<int>();
    cfg.batch_window = o.at("batch_window").get<double>();
    if (cfg.delta < 0 || cfg.max_batch < 1 || cfg.batch_window < 0)
        throw ConfigError("invalid matching parameters");
    return cfg;
}

skellam::SkellamParams skellam_params_from(const json& o) {
    skellam::SkellamParams p;
    p.lambda_lc_plus = o.at("lambda_lc_plus").get<double>();
    p.lambda_lc_minus = o.at("lambda_lc_minus").get<double>();
    p.lambda_m_plus = o.at("lambda_m_plus").get<double>();
    p.lambda_m_minus = o.at("lambda_m_minus").get<double>();
    p.rho_agg = o.at("rho_agg").get<double>();
    p.validate();
    return p;
}

skellam::LagDensity lag_density_from(const json& o) {
    std::string kind = o.at("lag_kind").get<std::string>();
    if (kind == "dirac") return skellam::LagDensity::dirac(o.at("lag_value").get<double>());
    if (kind == "gaussian")
        return skellam::LagDensity::gaussian(o.at("lag_mean").get<double>(),
                                             o.at("lag_sd").get<double>());
    if (kind == "uniform")
        return skellam::LagDensity::uniform(o.at("lag_lo").get<double>(),
                                            o.at("lag_hi").get<double>());
    throw ConfigError("unknown lag kind: " + kind);
}

void write_manifest(const fs::path& outdir, const std::string& subcommand, const json& options,
                    const std::vector<std::string>& outputs) {
    json m;
    m["schema_version"] = kSchemaVersion;
    m["tool"] = "flowrecon";
    m["subcommand"] = subcommand;
    m["options"] = options;
    m["outputs"] = outputs;
    write_file(outdir / "manifest.json", m.dump(2) + "\n");
}

struct LoadedFeed {
    std::vector<tick::TradeRecord> trades;
    lob::EventFlow flow;
};

LoadedFeed load_feed(const json& o) {
    LoadedFeed f;
    std::string trades_text = read_file(o.at("trades").get<std::string>());
    std::string quotes_text = read_file(o.at("quotes").get<std::string>());
    f.trades = tick::parse_trades(std::string_view(trades_text));
    lob::EventFlowOptions opts;
    opts.depth = o.value("depth", 10);
    f.flow = lob::quotes_to_eventflow(
        tick::parse_quotes(std::string_view(quotes_text), opts.depth), opts);
    return f;
}

void cmd_match(const json& o, const fs::path& outdir) {
    auto cfg = match_config_from(o);
    auto feed = load_feed(o);
    auto result = matching::run_matching(feed.trades, std::move(feed.flow), cfg);
    auto report = matching::build_report(result, feed.trades);

    write_file(outdir / "flow.csv", matching::flow_to_csv(result.flow));
    write_file(outdir / "report.json", matching::report_to_json(report, cfg));
    write_file(outdir / "lag_histogram.csv", matching::histogram_to_csv(report.lag_histogram));
    write_file(outdir / "unmatched_size_histogram.csv",
               matching::histogram_to_csv(report.unmatched_size_histogram));
    write_file(outdir / "unmatched_time_histogram.csv",
               matching::histogram_to_csv(report.unmatched_time_histogram));
    write_manifest(outdir, "match", o,
                   {"flow.csv", "report.json", "lag_histogram.csv",
                    "unmatched_size_histogram.csv", "unmatched_time_histogram.csv"});
}

void cmd_sign(const json& o, const fs::path& outdir) {
    auto cfg = match_config_from(o);
    auto feed = load_feed(o);
    auto result = matching::run_matching(feed.trades, std::move(feed.flow), cfg);

    std::vector<std::optional<std::size_t>> assignments(feed.trades.size());
    for (const auto& [line, a] : result.assignments) assignments[line] = a.event_index;
    auto reference = signing::signs_from_flow(result.flow, assignments);

    std::vector<std::int64_t> lags_ms;
    for (double s : o.at("lag_grid").get<std::vector<double>>())
        lags_ms.push_back(std::llround(s * 1000.0));
    auto perf = signing::sweep(feed.trades, result.flow.best_quotes, reference, lags_ms);
    write_file(outdir / "sweep.csv", signing::sweep_to_csv(perf));
    write_manifest(outdir, "sign", o, {"sweep.csv"});
}

void cmd_skellam(const json& o, const fs::path& outdir) {
    auto density = lag_density_from(o);
    if (o.at("mode").get<std::string>() == "curve") {
        auto params = skellam_params_from(o);
        std::ostringstream os;
        os.precision(12);
        os << "delta_lr,probability\n";
        for (double lr : o.at("lag_grid").get<std::vector<double>>())
            os << lr << ',' << skellam::p_expected(params, density, lr) << '\n';
        write_file(outdir / "curve.csv", os.str());
        write_manifest(outdir, "skellam", o, {"curve.csv"});
        return;
    }
    if (o.at("mode").get<std::string>() != "calibrate")
        throw ConfigError("skellam mode must be curve or calibrate");

    std::string text = read_file(o.at("curve").get<std::string>());
    std::vector<skellam::CalibrationPoint> curve;
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
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("bad curve line: " + line);
        curve.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    auto init = skellam_params_from(o);
    auto result = skellam::calibrate(curve, density, init);
    json out;
    out["schema_version"] = kSchemaVersion;
    out["params"] = {{"lambda_lc_plus", result.params.lambda_lc_plus},
                     {"lambda_lc_minus", result.params.lambda_lc_minus},
                     {"lambda_m_plus", result.params.lambda_m_plus},
                     {"lambda_m_minus", result.params.lambda_m_minus},
                     {"rho_agg", result.params.rho_agg}};
    out["residual_norm"] = result.residual_norm;
    out["degenerate"] = result.degenerate;
    out["iterations"] = result.iterations;
    write_file(outdir / "calibration.json", out.dump(2) + "\n");
    write_manifest(outdir, "skellam", o, {"calibration.json"});
}

void cmd_simulate(const json& o, const fs::path& outdir) {
    auto scenario = synth::parse_scenario(read_file(o.at("scenario").get<std::string>()));
    auto gt = synth::simulate(scenario.flow);
    auto rendered = synth::render(gt, scenario.artifacts, scenario.render_seed);
    write_file(outdir / "trades.csv", rendered.trades);
    write_file(outdir / "quotes.csv", rendered.quotes);
    write_file(outdir / "labels.csv", synth::labels_to_csv(rendered.labels));
    write_file(outdir / "scenario.txt", synth::format_scenario(scenario));
    write_manifest(outdir, "simulate", o,
                   {"trades.csv", "quotes.csv", "labels.csv", "scenario.txt"});
}

void cmd_hawkes(const json& o, const fs::path& outdir) {
    auto cfg = match_config_from(o);
    auto feed = load_feed(o);
    auto result = matching::run_matching(feed.trades, std::move(feed.flow), cfg);

    std::vector<std::int64_t> raw_ms, matched_ms, cancels_raw_ms, cancels_matched_ms;
    for (const auto& tr : feed.trades) raw_ms.push_back(tr.t.millis);
    for (const auto& ev : result.flow.events) {
        if (ev.kind == lob::EventKind::Market) {
            matched_ms.push_back(ev.t.millis);
            cancels_raw_ms.push_back(ev.t.millis);  // pre-matching, this was a cancel
        } else if (ev.kind == lob::EventKind::Cancel) {
            cancels_raw_ms.push_back(ev.t.millis);
            cancels_matched_ms.push_back(ev.t.millis);
        }
    }
    std::int64_t start_ms = raw_ms.empty() ? 0 : raw_ms.front();
    std::int64_t end_ms = raw_ms.empty() ? 1 : raw_ms.back();
    for (const auto& ev : result.flow.events) {
        start_ms = std::min(start_ms, ev.t.millis);
        end_ms = std::max(end_ms, ev.t.millis);
    }
    start_ms -= 1;  // series times must be strictly after the window start
    auto raw = hawkes::from_millis(raw_ms, start_ms, end_ms);
    auto matched = hawkes::from_millis(matched_ms, start_ms, end_ms);
    auto cancels_raw = hawkes::from_millis(cancels_raw_ms, start_ms, end_ms);
    auto cancels_matched = hawkes::from_millis(cancels_matched_ms, start_ms, end_ms);

    std::string model = o.at("model").get<std::string>();
    hawkes::FlowComparison cmp;
    if (model == "self")
        cmp = hawkes::compare_flows(raw, matched, hawkes::Model::Self);
    else if (model == "cross")
        cmp = hawkes::compare_flows(raw, matched, hawkes::Model::Cross, &cancels_raw,
                                    &cancels_matched);
    else
        throw ConfigError("model must be self or cross");

    std::string date = o.value("date", std::string("NA"));
    std::ostringstream os;
    os.precision(12);
    os << "date,flow_kind,lambda0,alpha,beta,ratio,loglik,converged\n";
    auto row = [&](const char* kind, const hawkes::FitResult& r) {
        os << date << ',' << kind << ',' << r.params.lambda0 << ',' << r.params.alpha << ','
           << r.params.beta << ',' << r.ratio << ',' << r.log_likelihood << ','
           << (r.converged ? 1 : 0) << '\n';
    };
    row("raw", cmp.raw);
    row("matched", cmp.matched);
    write_file(outdir / "comparison.csv", os.str());
    write_manifest(outdir, "hawkes", o, {"comparison.csv"});
}

void dispatch(const std::string& subcommand, const json& options, const fs::path& outdir) {
    if (subcommand == "match")
        cmd_match(options, outdir);
    else if (subcommand == "sign")
        cmd_sign(options, outdir);
    else if (subcommand == "skellam")
        cmd_skellam(options, outdir);
    else if (subcommand == "simulate")
        cmd_simulate(options, outdir);
    else if (subcommand == "hawkes")
        cmd_hawkes(options, outdir);
    else
        throw ConfigError("unknown subcommand in manifest: " + subcommand);
}

fs::path default_outdir() {
    if (const char* env = std::getenv("FLOWRECON_OUTPUT_DIR")) return env;
    return ".";
}

// Flag bundles shared by the feed-consuming subcommands.
struct MatchFlags {
    std::string trades;
    std::string quotes;
    std::string procedure{"m3"};
    double delta{0.4};
    int max_batch{9};
    double batch_window{0.005};
    int depth{10};

    void attach(CLI::App* app) {
        app->add_option("--trades", trades, "trades CSV path")->required();
        app->add_option("--quotes", quotes, "quotes CSV path")->required();
        app->add_option("--procedure", procedure, "matching procedure: m1|m2|m3");
        app->add_option("--delta", delta, "matching window half-width, seconds");
        app->add_option("--max-batch", max_batch, "max lines aggregated per order");
        app->add_option("--batch-window", batch_window, "batch timestamp window, seconds");
        app->add_option("--depth", depth, "book depth to reconstruct");
    }
    void fill(json& o) const {
        o["trades"] = trades;
        o["quotes"] = quotes;
        o["procedure"] = procedure;
        o["delta"] = delta;
        o["max_batch"] = max_batch;
        o["batch_window"] = batch_window;
        o["depth"] = depth;
    }
};

struct SkellamFlags {
    double lc_plus{5.0}, lc_minus{5.0}, m_plus{1.0}, m_minus{1.0}, rho{0.6};

    void attach(CLI::App* app) {
        app->add_option("--lambda-lc-plus", lc_plus, "up-move cancel intensity (events/s)");
        app->add_option("--lambda-lc-minus", lc_minus, "down-move cancel intensity");
        app->add_option("--lambda-m-plus", m_plus, "up-move market intensity");
        app->add_option("--lambda-m-minus", m_minus, "down-move market intensity");
        app->add_option("--rho-agg", rho, "aggressive fraction of market orders");
    }
    void fill(json& o) const {
        o["lambda_lc_plus"] = lc_plus;
        o["lambda_lc_minus"] = lc_minus;
        o["lambda_m_plus"] = m_plus;
        o["lambda_m_minus"] = m_minus;
        o["rho_agg"] = rho;
    }
};

struct LagFlags {
    std::string kind{"dirac"};
    double value{0.0}, mean{0.1}, sd{0.02}, lo{0.05}, hi{0.15};

    void attach(CLI::App* app) {
        app->add_option("--lag-kind", kind, "reporting-lag density: dirac|gaussian|uniform");
        app->add_option("--lag-value", value, "dirac lag value, seconds");
        app->add_option("--lag-mean", mean, "gaussian lag mean, seconds");
        app->add_option("--lag-sd", sd, "gaussian lag standard deviation, seconds");
        app->add_option("--lag-lo", lo, "uniform lag lower bound, seconds");
        app->add_option("--lag-hi", hi, "uniform lag upper bound, seconds");
    }
    void fill(json& o) const {
        o["lag_kind"] = kind;
        o["lag_value"] = value;
        o["lag_mean"] = mean;
        o["lag_sd"] = sd;
        o["lag_lo"] = lo;
        o["lag_hi"] = hi;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flowrecon: order-flow reconstruction from trades/quotes tick files"};
    app.require_subcommand(1);

    std::string outdir_flag = default_outdir().string();
    app.add_option("--output-dir", outdir_flag,
                   "output directory (default: $FLOWRECON_OUTPUT_DIR or .)");
    int jobs = 1;
    app.add_option("--jobs", jobs, "parallelism across independent seeds/days")
        ->check(CLI::PositiveNumber);

    MatchFlags f_match, f_sign, f_hawkes;
    SkellamFlags f_skellam;
    LagFlags f_lag;
    std::string sign_grid = "-0.3:0.3:0.02";
    std::string skellam_grid = "-0.3:0.3:0.02";
    std::string skellam_mode = "curve";
    std::string skellam_curve;
    std::string scenario_path;
    std::string hawkes_model = "self";
    std::string hawkes_date = "NA";
    std::string manifest_path;

    auto* c_match = app.add_subcommand("match", "match trades lines to book events");
    f_match.attach(c_match);

    auto* c_sign = app.add_subcommand("sign", "evaluate quote-based signing across lags");
    f_sign.attach(c_sign);
    c_sign->add_option("--lag-grid", sign_grid, "grid of lags, seconds (list or start:stop:step)");

    auto* c_skellam = app.add_subcommand("skellam", "toy-model curves and calibration");
    c_skellam->add_option("--mode", skellam_mode, "curve | calibrate");
    c_skellam->add_option("--curve", skellam_curve, "empirical curve CSV (calibrate mode)");
    c_skellam->add_option("--lag-grid", skellam_grid, "grid of quote lags, seconds");
    f_skellam.attach(c_skellam);
    f_lag.attach(c_skellam);

    auto* c_sim = app.add_subcommand("simulate", "generate a synthetic feed from a scenario");
    c_sim->add_option("--scenario", scenario_path, "scenario key=value file")->required();

    auto* c_hawkes = app.add_subcommand("hawkes", "endogeneity comparison raw vs matched");
    f_hawkes.attach(c_hawkes);
    c_hawkes->add_option("--model", hawkes_model, "self | cross");
    c_hawkes->add_option("--date", hawkes_date, "date label for the comparison CSV");

    auto* c_report = app.add_subcommand("report", "re-execute a run from its manifest");
    c_report->add_option("--manifest", manifest_path, "manifest.json of a previous run")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    (void)jobs;  // accepted for interface stability; runs here are single-feed
    fs::path outdir = outdir_flag;
    try {
        if (c_match->parsed()) {
            json o;
            f_match.fill(o);
            cmd_match(o, outdir);
        } else if (c_sign->parsed()) {
            json o;
            f_sign.fill(o);
            o["lag_grid"] = parse_grid(sign_grid);
            cmd_sign(o, outdir);
        } else if (c_skellam->parsed()) {
            json o;
            o["mode"] = skellam_mode;
            if (!skellam_curve.empty()) o["curve"] = skellam_curve;
            o["lag_grid"] = parse_grid(skellam_grid);
            f_skellam.fill(o);
            f_lag.fill(o);
            cmd_skellam(o, outdir);
        } else if (c_sim->parsed()) {
            json o;
            o["scenario"] = scenario_path;
            cmd_simulate(o, outdir);
        } else if (c_hawkes->parsed()) {
            json o;
            f_hawkes.fill(o);
            o["model"] = hawkes_model;
            o["date"] = hawkes_date;
            cmd_hawkes(o, outdir);
        } else if (c_report->parsed()) {
            json manifest = json::parse(read_file(manifest_path));
            if (manifest.at("schema_version").get<int>() != kSchemaVersion)
                throw ConfigError("unsupported manifest schema version");
            dispatch(manifest.at("subcommand").get<std::string>(), manifest.at("options"),
                     outdir);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const tick::ParseError& e) {
        std::cerr << "data error at line " << e.line_no() << " [" << e.line() << "]: " << e.what()
                  << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
