// delaycast command-line tool: trace generation, SPI estimation, parameter
// sweeps, classical heuristics, analogue forecasting, horizon and data-length
// studies. All outputs are deterministic for a fixed flag set and input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "delaycast/dynamics.hpp"
#include "delaycast/error.hpp"
#include "delaycast/forecast.hpp"
#include "delaycast/heuristics.hpp"
#include "delaycast/infotheory.hpp"
#include "delaycast/io.hpp"
#include "delaycast/parallel.hpp"
#include "delaycast/sweep.hpp"
#include "delaycast/timeseries.hpp"

using nlohmann::json;
using namespace delaycast;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

// Integer flag grammar: "a..b" (inclusive range), "a,b,c" (list), or "a".
std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const int lo = std::stoi(text.substr(0, dots));
        const int hi = std::stoi(text.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument("range '" + text + "' is descending");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) out.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty integer list '" + text + "'");
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw data_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw data_error("write failed on '" + path + "'");
}

json selection_json(const Selection& sel) {
    return json{{"m", sel.m},
                {"tau", sel.tau},
                {"value", sel.value},
                {"rule", sel.rule == Selection::Rule::plateau_min_m ? "plateau_min_m" : "global_argmax"}};
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
    std::string system;
    std::string out;
    int steps = 60000;
    int discard = 10000;
    double dt = 0.0; // 0: keep the system default (1/64 flows, 1 maps)
    int observable = 0;
    int sites = 22;
    double forcing = 5.0;
    double sigma = 10.0, rho = 28.0, beta = 8.0 / 3.0;
    double henon_a = 1.4, henon_b = 0.3;
    double logistic_r = 3.65;
    std::vector<double> initial_state;
    double perturb_ic = 0.0;
    std::uint64_t seed = 42;
};

int run_generate(const GenerateArgs& args) {
    const BenchmarkSystem system = benchmark_system_from_string(args.system);

    SystemParams params;
    params.lorenz96_sites = args.sites;
    params.forcing = args.forcing;
    params.sigma = args.sigma;
    params.rho = args.rho;
    params.beta = args.beta;
    params.henon_a = args.henon_a;
    params.henon_b = args.henon_b;
    params.logistic_r = args.logistic_r;

    GenerationProtocol proto = default_protocol(system, params);
    proto.total_steps = args.steps;
    proto.discard = args.discard;
    if (args.dt > 0.0) proto.dt = args.dt;
    proto.observable_index = args.observable;
    if (!args.initial_state.empty()) proto.initial_state = args.initial_state;
    if (args.perturb_ic > 0.0) {
        std::mt19937_64 rng(args.seed);
        std::uniform_real_distribution<double> unit(-args.perturb_ic, args.perturb_ic);
        for (double& v : proto.initial_state) v += unit(rng);
    }

    const TimeSeries ts = generate_benchmark_trace(system, proto, params);
    save_timeseries_csv(ts, args.out);

    json sidecar;
    sidecar["system"] = args.system;
    sidecar["samples"] = ts.length();
    sidecar["seed"] = args.seed;
    sidecar["protocol"] = {{"total_steps", proto.total_steps},
                           {"discard", proto.discard},
                           {"dt", proto.dt},
                           {"observable_index", proto.observable_index},
                           {"initial_state", proto.initial_state}};
    switch (system) {
        case BenchmarkSystem::lorenz63:
            sidecar["params"] = {{"sigma", params.sigma}, {"rho", params.rho}, {"beta", params.beta}};
            break;
        case BenchmarkSystem::lorenz96:
            sidecar["params"] = {{"k", params.lorenz96_sites}, {"f", params.forcing}};
            break;
        case BenchmarkSystem::henon:
            sidecar["params"] = {{"a", params.henon_a}, {"b", params.henon_b}};
            break;
        case BenchmarkSystem::logistic:
            sidecar["params"] = {{"r", params.logistic_r}};
            break;
    }
    write_text(args.out + ".json", sidecar.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// spi

struct SpiArgs {
    std::string input;
    std::string out;
    int m = 2, tau = 1, p = 1;
    int knn = 4;
    std::string estimator = "ksg2";
    double bandwidth = 0.2;
    int threads = 0;
    std::uint64_t seed = 42;
};

int run_spi(const SpiArgs& args) {
    const TimeSeries ts = load_timeseries_csv(args.input);
    SpiRequest req;
    req.params = {args.m, args.tau, args.p};
    req.k = args.knn;
    req.estimator = args.estimator == "box" ? MiEstimator::box_kernel : MiEstimator::ksg2;
    req.box_bandwidth = args.bandwidth;
    req.options.jitter_seed = args.seed;
    req.options.threads = args.threads > 0 ? args.threads : default_thread_count();

    const MIEstimate est = spi(ts, req);
    json doc;
    doc["value_nats"] = est.value;
    doc["value_bits"] = est.value / std::log(2.0);
    doc["estimator"] = est.estimator == MiEstimator::box_kernel ? "box_kernel" : "ksg2";
    doc["k_or_r"] = est.k_or_r;
    doc["n_samples"] = est.n_samples;
    doc["params"] = {{"m", args.m}, {"tau", args.tau}, {"p", args.p}};
    write_text(args.out, doc.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    std::string input;
    std::string m_range = "2..15";
    std::string tau_range = "1..50";
    int p = 1;
    int knn = 4;
    bool with_mase = false;
    double train_fraction = 0.9;
    int neighbors = 1;
    int window = -1;
    double plateau = 0.05;
    std::string out;
    std::string json_out;
    int threads = 0;
    std::uint64_t seed = 42;
};

int run_sweep(const SweepArgs& args) {
    const TimeSeries ts = load_timeseries_csv(args.input);
    SweepOptions opts;
    opts.k = args.knn;
    opts.jitter_seed = args.seed;
    opts.threads = args.threads > 0 ? args.threads : default_thread_count();
    opts.train_fraction = args.train_fraction;
    opts.forecast.num_neighbors = args.neighbors;
    opts.forecast.exclusion_window = args.window;

    const auto grid = grid_sweep(ts, parse_int_list(args.m_range), parse_int_list(args.tau_range),
                                 args.p, args.with_mase, opts);
    write_heatmap_csv(grid, args.out);

    if (!args.json_out.empty()) {
        const Selection sel = select_spi_optimal(grid, args.plateau);
        json doc;
        doc["m_values"] = grid.m_values;
        doc["tau_values"] = grid.tau_values;
        doc["p"] = grid.p;
        json spi_rows = json::array();
        for (int mi = 0; mi < static_cast<int>(grid.m_values.size()); ++mi) {
            json row = json::array();
            for (int ti = 0; ti < static_cast<int>(grid.tau_values.size()); ++ti) {
                const double v = grid.spi(mi, ti);
                row.push_back(std::isfinite(v) ? json(v) : json(nullptr));
            }
            spi_rows.push_back(row);
        }
        doc["spi"] = spi_rows;
        if (grid.has_mase()) {
            json mase_rows = json::array();
            for (int mi = 0; mi < static_cast<int>(grid.m_values.size()); ++mi) {
                json row = json::array();
                for (int ti = 0; ti < static_cast<int>(grid.tau_values.size()); ++ti) {
                    const double v = (*grid.mase)(mi, ti);
                    row.push_back(std::isfinite(v) ? json(v) : json(nullptr));
                }
                mase_rows.push_back(row);
            }
            doc["mase"] = mase_rows;
            // argmin over MASE cells
            double best = std::numeric_limits<double>::infinity();
            int bm = -1, bt = -1;
            for (int mi = 0; mi < static_cast<int>(grid.m_values.size()); ++mi) {
                for (int ti = 0; ti < static_cast<int>(grid.tau_values.size()); ++ti) {
                    const double v = (*grid.mase)(mi, ti);
                    if (std::isfinite(v) && v < best) {
                        best = v;
                        bm = mi;
                        bt = ti;
                    }
                }
            }
            if (bm >= 0) {
                doc["argmin_mase"] = {{"m", grid.m_values[bm]}, {"tau", grid.tau_values[bt]}, {"value", best}};
            }
        } else {
            doc["mase"] = nullptr;
        }
        doc["selection"] = selection_json(sel);
        json failures = json::array();
        for (const auto& f : grid.failures) {
            failures.push_back({{"m", f.m}, {"tau", f.tau}, {"error", f.error}});
        }
        doc["failures"] = failures;
        write_text(args.json_out, doc.dump(2) + "\n");
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// heuristics

struct HeuristicsArgs {
    std::string input;
    int tau_max = 50;
    int bins = 32;
    double noise_mult = 5.0;
    int m_max = 15;
    double rtol = 10.0;
    double atol = 2.0;
    double threshold = 0.001;
    int theiler = -1;
    int tau_override = 0;
    std::string out_curves;
    std::string out;
};

int run_heuristics(const HeuristicsArgs& args) {
    const TimeSeries ts = load_timeseries_csv(args.input);
    const auto ami = ami_first_minimum_tau(ts, args.tau_max, args.bins, args.noise_mult);

    std::optional<HeuristicResult> fnn;
    int fnn_tau = args.tau_override;
    if (fnn_tau == 0 && ami.status == HeuristicResult::Status::ok) fnn_tau = *ami.value;
    if (fnn_tau > 0) {
        fnn = fnn_dimension(ts, fnn_tau, args.m_max, args.rtol, args.atol, args.threshold,
                            args.theiler);
    }

    if (!args.out_curves.empty()) {
        std::ofstream curves(args.out_curves);
        if (!curves) throw data_error("cannot write '" + args.out_curves + "'");
        curves << "kind,parameter,statistic\n";
        for (const auto& [tau, v] : ami.diagnostic_curve) {
            curves << "ami," << tau << ',' << format_double(v) << '\n';
        }
        if (fnn) {
            for (const auto& [m, v] : fnn->diagnostic_curve) {
                curves << "fnn," << m << ',' << format_double(v) << '\n';
            }
        }
    }

    json doc;
    doc["ami"] = {{"status", ami.status == HeuristicResult::Status::ok ? "ok" : "failed"}};
    if (ami.value) doc["ami"]["tau"] = *ami.value;
    if (fnn) {
        doc["fnn"] = {{"status", fnn->status == HeuristicResult::Status::ok ? "ok" : "failed"},
                      {"tau_used", fnn_tau}};
        if (fnn->value) doc["fnn"]["m"] = *fnn->value;
    } else {
        doc["fnn"] = {{"status", "failed"}, {"reason", "no tau available (ami failed; pass --tau)"}};
    }
    write_text(args.out, doc.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// forecast

struct ForecastArgs {
    std::string input;
    int m = 2, tau = 1, p = 1;
    double train_fraction = 0.9;
    int n = 0, k = 0;
    int neighbors = 1;
    int window = -1;
    std::string mode = "rolling";
    bool static_model = false;
    std::string out_pred;
    std::string out;
};

int run_forecast(const ForecastArgs& args) {
    const TimeSeries ts = load_timeseries_csv(args.input);
    int n = args.n, k = args.k;
    if (n <= 0 || k <= 0) {
        n = static_cast<int>(ts.length() * args.train_fraction);
        k = ts.length() - n;
    }
    ForecastConfig config;
    config.num_neighbors = args.neighbors;
    config.exclusion_window = args.window;
    config.rebuild_every_step = !args.static_model;
    config.horizon_mode = args.mode == "direct" ? ForecastConfig::HorizonMode::direct_p_step
                                                : ForecastConfig::HorizonMode::rolling_one_step;

    const auto result = rolling_forecast(ts, {args.m, args.tau, args.p}, n, k, config);

    if (!args.out_pred.empty()) {
        std::ofstream pred(args.out_pred);
        if (!pred) throw data_error("cannot write '" + args.out_pred + "'");
        pred << "index,prediction,truth\n";
        for (std::size_t i = 0; i < result.predictions.size(); ++i) {
            pred << (n + static_cast<int>(i)) << ',' << format_double(result.predictions[i]) << ','
                 << format_double(result.truth[i]) << '\n';
        }
    }

    json doc;
    doc["params"] = {{"m", args.m}, {"tau", args.tau}, {"p", args.p}};
    doc["config"] = {{"num_neighbors", config.num_neighbors},
                     {"exclusion_window", config.exclusion_window},
                     {"rebuild_every_step", config.rebuild_every_step},
                     {"horizon_mode", args.mode == "direct" ? "direct_p_step" : "rolling_one_step"}};
    doc["n"] = n;
    doc["k"] = k;
    doc["mase"] = result.mase;
    write_text(args.out, doc.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// horizon

struct HorizonArgs {
    std::string input;
    std::string m_list = "2";
    std::string tau_list = "1";
    std::string p_range = "1..100";
    int knn = 4;
    bool ratio = false;
    std::string out;
    int threads = 0;
    std::uint64_t seed = 42;
};

int run_horizon(const HorizonArgs& args) {
    const TimeSeries ts = load_timeseries_csv(args.input);
    const auto ms = parse_int_list(args.m_list);
    const auto taus = parse_int_list(args.tau_list);
    const auto ps = parse_int_list(args.p_range);

    std::ofstream out(args.out);
    if (!out) throw data_error("cannot write '" + args.out + "'");

    if (args.ratio) {
        if (ms.size() != 1 || taus.size() != 1) {
            throw std::invalid_argument("--ratio needs a single --m and a single --tau");
        }
        EstimatorOptions opts;
        opts.jitter_seed = args.seed;
        opts.threads = args.threads > 0 ? args.threads : default_thread_count();
        const int p_max = *std::max_element(ps.begin(), ps.end());
        out << "p,spi,entropy,ratio\n";
        for (const auto& pt : r_of_p(ts, ms[0], taus[0], p_max, args.knn, opts)) {
            out << pt.p << ',' << format_double(pt.spi) << ',' << format_double(pt.entropy) << ',';
            if (pt.ratio) out << format_double(*pt.ratio);
            out << '\n';
        }
        return kExitOk;
    }

    if (ms.size() > 1 && taus.size() > 1) {
        throw std::invalid_argument("vary either m or tau, not both (one of --m/--tau must be single)");
    }
    HorizonSpec spec;
    if (taus.size() > 1) {
        spec.vary = HorizonSpec::Vary::tau;
        spec.fixed = ms[0];
        spec.varied = taus;
    } else {
        spec.vary = HorizonSpec::Vary::m;
        spec.fixed = taus[0];
        spec.varied = ms;
    }
    spec.p_values = ps;

    SweepOptions opts;
    opts.k = args.knn;
    opts.jitter_seed = args.seed;
    opts.threads = args.threads > 0 ? args.threads : default_thread_count();

    out << "p,m,tau,spi,error\n";
    for (const auto& pt : horizon_curves(ts, spec, opts)) {
        out << pt.p << ',' << pt.m << ',' << pt.tau << ',';
        if (pt.error.empty()) out << format_double(pt.spi) << ",\n";
        else out << ',' << pt.error << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// datalength

struct DataLengthArgs {
    std::string input;
    std::string lengths;
    std::string m_set = "2,4,8";
    int tau = 1;
    int p = 1;
    int knn = 4;
    std::string out;
    int threads = 0;
    std::uint64_t seed = 42;
};

int run_datalength(const DataLengthArgs& args) {
    const TimeSeries ts = load_timeseries_csv(args.input);
    SweepOptions opts;
    opts.k = args.knn;
    opts.jitter_seed = args.seed;
    opts.threads = args.threads > 0 ? args.threads : default_thread_count();

    std::ofstream out(args.out);
    if (!out) throw data_error("cannot write '" + args.out + "'");
    out << "length,m,spi,error\n";
    for (const auto& pt :
         data_length_curve(ts, parse_int_list(args.lengths), parse_int_list(args.m_set), args.tau,
                           args.p, opts)) {
        out << pt.length << ',' << pt.m << ',';
        if (pt.error.empty()) out << format_double(pt.spi) << ",\n";
        else out << ',' << pt.error << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"delay-coordinate reconstruction parameter selection and analogue forecasting"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* cmd_gen = app.add_subcommand("generate", "generate a benchmark system trace as CSV");
    cmd_gen->add_option("--system", gen.system, "lorenz63 | lorenz96 | henon | logistic")->required();
    cmd_gen->add_option("--out", gen.out, "output CSV path (a .json sidecar is written next to it)")->required();
    cmd_gen->add_option("--steps", gen.steps, "total iteration steps");
    cmd_gen->add_option("--discard", gen.discard, "transient steps to drop");
    cmd_gen->add_option("--dt", gen.dt, "integration step for flows (decimal; 1/64 = 0.015625)");
    cmd_gen->add_option("--observable", gen.observable, "state component to record");
    cmd_gen->add_option("--k", gen.sites, "lorenz96 site count K");
    cmd_gen->add_option("--f", gen.forcing, "lorenz96 forcing F");
    cmd_gen->add_option("--sigma", gen.sigma, "lorenz63 sigma");
    cmd_gen->add_option("--rho", gen.rho, "lorenz63 rho");
    cmd_gen->add_option("--beta", gen.beta, "lorenz63 beta");
    cmd_gen->add_option("--a", gen.henon_a, "henon a");
    cmd_gen->add_option("--b", gen.henon_b, "henon b");
    cmd_gen->add_option("--r", gen.logistic_r, "logistic r");
    cmd_gen->add_option("--x0", gen.initial_state, "initial state override (repeat per component)");
    cmd_gen->add_option("--perturb-ic", gen.perturb_ic, "uniform perturbation amplitude for the initial state");
    cmd_gen->add_option("--seed", gen.seed, "seed for stochastic choices");

    SpiArgs sp;
    auto* cmd_spi = app.add_subcommand("spi", "shared-prediction-information of one reconstruction");
    cmd_spi->add_option("--input", sp.input, "input series CSV")->required();
    cmd_spi->add_option("--m", sp.m, "embedding dimension");
    cmd_spi->add_option("--tau", sp.tau, "delay (samples)");
    cmd_spi->add_option("--p", sp.p, "prediction horizon (samples)");
    cmd_spi->add_option("--knn", sp.knn, "KSG neighbor count");
    cmd_spi->add_option("--estimator", sp.estimator, "ksg2 | box");
    cmd_spi->add_option("--bandwidth", sp.bandwidth, "box-kernel bandwidth");
    cmd_spi->add_option("--out", sp.out, "output JSON path (default stdout)");
    cmd_spi->add_option("--threads", sp.threads, "worker threads (default: hardware)");
    cmd_spi->add_option("--seed", sp.seed, "jitter seed");

    SweepArgs sw;
    auto* cmd_sweep = app.add_subcommand("sweep", "exhaustive (m, tau) grid of SPI and optional MASE");
    cmd_sweep->add_option("--input", sw.input, "input series CSV")->required();
    cmd_sweep->add_option("--m", sw.m_range, "m range, e.g. 2..15");
    cmd_sweep->add_option("--tau", sw.tau_range, "tau range, e.g. 1..50");
    cmd_sweep->add_option("--p", sw.p, "prediction horizon");
    cmd_sweep->add_option("--knn", sw.knn, "KSG neighbor count");
    cmd_sweep->add_flag("--mase", sw.with_mase, "also score a rolling analogue forecast per cell");
    cmd_sweep->add_option("--train-fraction", sw.train_fraction, "train fraction of the fixed MASE split");
    cmd_sweep->add_option("--neighbors", sw.neighbors, "analogues averaged per prediction");
    cmd_sweep->add_option("--window", sw.window, "temporal exclusion window (-1: (m-1)tau+p)");
    cmd_sweep->add_option("--plateau", sw.plateau, "plateau fraction for the selection rule");
    cmd_sweep->add_option("--out", sw.out, "heatmap CSV path")->required();
    cmd_sweep->add_option("--json", sw.json_out, "optional JSON document (matrices + selection)");
    cmd_sweep->add_option("--threads", sw.threads, "worker threads (default: hardware)");
    cmd_sweep->add_option("--seed", sw.seed, "jitter seed");

    HeuristicsArgs he;
    auto* cmd_heur = app.add_subcommand("heuristics", "classical tau (AMI) and m (FNN) selection");
    cmd_heur->add_option("--input", he.input, "input series CSV")->required();
    cmd_heur->add_option("--tau-max", he.tau_max, "largest delay scanned");
    cmd_heur->add_option("--bins", he.bins, "AMI histogram bins");
    cmd_heur->add_option("--noise-mult", he.noise_mult, "AMI prominence threshold, in bias-floor units");
    cmd_heur->add_option("--m-max", he.m_max, "largest dimension scanned");
    cmd_heur->add_option("--rtol", he.rtol, "FNN relative inflation threshold");
    cmd_heur->add_option("--atol", he.atol, "FNN absolute threshold (stddev units)");
    cmd_heur->add_option("--threshold", he.threshold, "acceptable false-neighbor fraction");
    cmd_heur->add_option("--theiler", he.theiler, "temporal exclusion (-1: 2*tau*m)");
    cmd_heur->add_option("--tau", he.tau_override, "force the FNN delay (default: the AMI selection)");
    cmd_heur->add_option("--out-curves", he.out_curves, "diagnostic curves CSV path");
    cmd_heur->add_option("--out", he.out, "selection JSON path (default stdout)");

    ForecastArgs fc;
    auto* cmd_fc = app.add_subcommand("forecast", "rolling method-of-analogues forecast with MASE");
    cmd_fc->add_option("--input", fc.input, "input series CSV")->required();
    cmd_fc->add_option("--m", fc.m, "embedding dimension");
    cmd_fc->add_option("--tau", fc.tau, "delay (samples)");
    cmd_fc->add_option("--p", fc.p, "prediction horizon");
    cmd_fc->add_option("--train-fraction", fc.train_fraction, "train fraction when --n/--k are absent");
    cmd_fc->add_option("--n", fc.n, "training length");
    cmd_fc->add_option("--k", fc.k, "test length");
    cmd_fc->add_option("--neighbors", fc.neighbors, "analogues averaged per prediction");
    cmd_fc->add_option("--window", fc.window, "temporal exclusion window (-1: (m-1)tau+p)");
    cmd_fc->add_option("--mode", fc.mode, "rolling | direct");
    cmd_fc->add_flag("--static-model", fc.static_model, "freeze the model at the training prefix");
    cmd_fc->add_option("--out-pred", fc.out_pred, "predictions CSV path");
    cmd_fc->add_option("--out", fc.out, "summary JSON path (default stdout)");

    HorizonArgs hz;
    auto* cmd_hz = app.add_subcommand("horizon", "SPI across prediction horizons");
    cmd_hz->add_option("--input", hz.input, "input series CSV")->required();
    cmd_hz->add_option("--m", hz.m_list, "m value or list (vary m with a fixed tau)");
    cmd_hz->add_option("--tau", hz.tau_list, "tau value or range (vary tau with a fixed m)");
    cmd_hz->add_option("--p", hz.p_range, "horizon range, e.g. 1..100");
    cmd_hz->add_option("--knn", hz.knn, "KSG neighbor count");
    cmd_hz->add_flag("--ratio", hz.ratio, "emit the predictability ratio SPI(p)/H instead");
    cmd_hz->add_option("--out", hz.out, "output CSV path")->required();
    cmd_hz->add_option("--threads", hz.threads, "worker threads (default: hardware)");
    cmd_hz->add_option("--seed", hz.seed, "jitter seed");

    DataLengthArgs dl;
    auto* cmd_dl = app.add_subcommand("datalength", "SPI on ascending prefixes of a series");
    cmd_dl->add_option("--input", dl.input, "input series CSV")->required();
    cmd_dl->add_option("--lengths", dl.lengths, "ascending prefix lengths, e.g. 10000,100000,400000")->required();
    cmd_dl->add_option("--m-set", dl.m_set, "dimensions to evaluate");
    cmd_dl->add_option("--tau", dl.tau, "fixed delay");
    cmd_dl->add_option("--p", dl.p, "prediction horizon");
    cmd_dl->add_option("--knn", dl.knn, "KSG neighbor count");
    cmd_dl->add_option("--out", dl.out, "output CSV path")->required();
    cmd_dl->add_option("--threads", dl.threads, "worker threads (default: hardware)");
    cmd_dl->add_option("--seed", dl.seed, "jitter seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (cmd_gen->parsed()) return run_generate(gen);
        if (cmd_spi->parsed()) return run_spi(sp);
        if (cmd_sweep->parsed()) return run_sweep(sw);
        if (cmd_heur->parsed()) return run_heuristics(he);
        if (cmd_fc->parsed()) return run_forecast(fc);
        if (cmd_hz->parsed()) return run_horizon(hz);
        if (cmd_dl->parsed()) return run_datalength(dl);
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
