#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lrbench/data.hpp"
#include "lrbench/metrics.hpp"
#include "lrbench/model.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace lrbench;

constexpr const char* kThreadsEnvVar = "LRBENCH_THREADS";

struct Options {
    std::string data = "blobs";
    std::optional<std::size_t> limit_rows;
    double alpha = 0.1;
    double epsilon = 0.01;
    std::size_t max_iters = 10000;
    std::string backend = "seq";
    unsigned threads = 0;
    double test_fraction = 0.2;
    bool standardize = true;
    std::uint64_t seed = 7;
    std::size_t reps = 3;
    std::string out;
    double threshold = 0.5;
    std::size_t rows = 0;
    std::size_t features = 0;
    double separation = 8.0;
    std::string model = "train_result.json";
};

struct Usage {
    std::string message;
};

CLI::Option* add_dataset_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--data", o.data, "CSV path, or 'blobs'/'random' for synthetic data");
    cmd->add_option("--limit-rows", o.limit_rows, "read at most N rows");
    cmd->add_option("--rows", o.rows, "synthetic dataset size (blobs default 200, random 1000)");
    cmd->add_option("--features", o.features,
                    "synthetic feature count (blobs default 2, random 10)");
    cmd->add_option("--separation", o.separation, "blob cluster separation (default 8)");
    cmd->add_option("--test-fraction", o.test_fraction, "held-out fraction (default 0.2)");
    cmd->add_flag("--standardize,!--no-standardize", o.standardize,
                  "standardize features with train statistics (default on)");
    cmd->add_option("--seed", o.seed, "seed for generation and splitting (default 7)");
    return cmd->add_option("--threads", o.threads,
                           "parallel worker count (default: hardware concurrency)");
}

void add_fit_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--alpha", o.alpha, "learning rate (default 0.1)");
    cmd->add_option("--epsilon", o.epsilon, "gradient-norm stopping tolerance (default 0.01)");
    cmd->add_option("--max-iters", o.max_iters, "iteration cap (default 10000)");
}

void resolve_threads_env(const CLI::Option* flag, Options& o) {
    if (flag->count() > 0) return;
    const char* env = std::getenv(kThreadsEnvVar);
    if (!env || !*env) return;
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
    if (ec != std::errc() || *ptr != '\0') {
        std::fprintf(stderr, "warning: ignoring invalid %s value '%s'\n", kThreadsEnvVar, env);
        return;
    }
    o.threads = value;
}

void validate_common(const Options& o) {
    if (!(o.test_fraction >= 0.0) || !(o.test_fraction < 1.0)) {
        throw Usage{"--test-fraction must lie in [0,1)"};
    }
    if (o.limit_rows && *o.limit_rows < 1) throw Usage{"--limit-rows must be at least 1"};
    TrainConfig probe;
    probe.alpha = o.alpha;
    probe.epsilon = o.epsilon;
    probe.max_iters = o.max_iters;
    try {
        probe.validate();
    } catch (const std::invalid_argument& e) {
        throw Usage{e.what()};
    }
}

Backend parse_backend(const std::string& name) {
    if (name == "seq" || name == "sequential") return Backend::sequential;
    if (name == "par" || name == "parallel") return Backend::parallel;
    throw Usage{"--backend must be seq or par"};
}

DatasetSpec make_spec(const Options& o) {
    DatasetSpec spec;
    if (o.data == "blobs") {
        spec.source = BlobsSource{o.seed, o.rows ? o.rows : 200, o.features ? o.features : 2,
                                  o.separation};
    } else if (o.data == "random") {
        spec.source = RandomSource{o.seed, o.rows ? o.rows : 1000, o.features ? o.features : 10};
    } else {
        spec.source = CsvSource{o.data};
    }
    spec.test_fraction = o.test_fraction;
    spec.standardize = o.standardize;
    spec.limit_rows = o.limit_rows;
    return spec;
}

struct Prepared {
    LabeledDataset train;
    LabeledDataset test;
    std::optional<StandardizeStats> stats;
};

Prepared prepare(const DatasetSpec& spec, std::uint64_t seed) {
    LabeledDataset full = load_dataset(spec);
    auto [train, test] = train_test_split(full, spec.test_fraction, seed);
    if (spec.standardize) {
        StandardizedSplit s = standardize(train, test);
        return {std::move(s.train), std::move(s.test), std::move(s.stats)};
    }
    return {std::move(train), std::move(test), std::nullopt};
}

TrainConfig make_config(const Options& o, Backend backend) {
    TrainConfig cfg;
    cfg.alpha = o.alpha;
    cfg.epsilon = o.epsilon;
    cfg.max_iters = o.max_iters;
    cfg.backend = backend;
    cfg.threads = o.threads;
    return cfg;
}

RowVector labels_for(const RowVector& w, const DenseMatrix& X, bool intercept) {
    return predict_label(w, intercept ? augment_with_intercept(X) : X, 0.5);
}

json dataset_json(const Options& o, const DatasetSpec& spec, const Prepared& prep) {
    json d;
    d["source"] = o.data;
    if (spec.limit_rows) d["limit_rows"] = *spec.limit_rows;
    d["train_rows"] = prep.train.size();
    d["test_rows"] = prep.test.size();
    d["features"] = prep.train.features();
    d["test_fraction"] = spec.test_fraction;
    d["standardize"] = spec.standardize;
    d["seed"] = o.seed;
    return d;
}

json config_json(const TrainConfig& cfg) {
    json c;
    c["alpha"] = cfg.alpha;
    c["epsilon"] = cfg.epsilon;
    c["max_iters"] = cfg.max_iters;
    c["fit_intercept"] = cfg.fit_intercept;
    c["threads"] = cfg.threads;
    c["reduction"] = cfg.reduction == ReductionMode::deterministic ? "deterministic" : "free_order";
    return c;
}

json metrics_json(const EvalReport& report) {
    json m;
    m["f1"] = report.f1;
    m["precision"] = report.precision;
    m["recall"] = report.recall;
    m["tp"] = report.counts.tp;
    m["fp"] = report.counts.fp;
    m["tn"] = report.counts.tn;
    m["fn"] = report.counts.fn;
    return m;
}

json fit_json(const FitResult& result) {
    json f;
    f["iterations"] = result.iterations;
    f["converged"] = result.converged;
    f["final_grad_norm"] = result.final_grad_norm;
    f["wall_time"] = result.wall_time;
    f["weights"] = std::vector<double>(result.weights.data().begin(), result.weights.data().end());
    return f;
}

void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t k = values.size() / 2;
    if (values.size() % 2 == 1) return values[k];
    return 0.5 * (values[k - 1] + values[k]);
}

const char* backend_name(Backend b) {
    return b == Backend::sequential ? "sequential" : "parallel";
}

int run_train(const Options& o) {
    const Backend backend = parse_backend(o.backend);
    const DatasetSpec spec = make_spec(o);
    const std::string out_path = o.out.empty() ? "train_result.json" : o.out;

    Prepared prep = prepare(spec, o.seed);
    const TrainConfig cfg = make_config(o, backend);
    auto [result, elapsed] = timed([&] { return fit(prep.train, cfg); });

    const EvalReport train_report =
        evaluate(prep.train.Y, labels_for(result.weights, prep.train.X, cfg.fit_intercept),
                 result.wall_time, cfg);
    json doc;
    doc["command"] = "train";
    doc["backend"] = backend_name(backend);
    doc["config"] = config_json(cfg);
    doc["dataset"] = dataset_json(o, spec, prep);
    doc["fit"] = fit_json(result);
    doc["metrics"]["train"] = metrics_json(train_report);
    double test_f1 = -1.0;
    if (prep.test.size() > 0) {
        const EvalReport test_report =
            evaluate(prep.test.Y, labels_for(result.weights, prep.test.X, cfg.fit_intercept),
                     result.wall_time, cfg);
        doc["metrics"]["test"] = metrics_json(test_report);
        test_f1 = test_report.f1;
    }
    if (prep.stats) {
        doc["standardization"]["means"] = std::vector<double>(prep.stats->means.data().begin(),
                                                              prep.stats->means.data().end());
        doc["standardization"]["stds"] = std::vector<double>(prep.stats->stds.data().begin(),
                                                             prep.stats->stds.data().end());
    }
    write_json(out_path, doc);

    std::printf("train: backend=%s iters=%zu converged=%s grad_norm=%.6g train_f1=%.4f",
                backend_name(backend), result.iterations, result.converged ? "yes" : "no",
                result.final_grad_norm, train_report.f1);
    if (test_f1 >= 0.0) std::printf(" test_f1=%.4f", test_f1);
    std::printf(" time=%.3fs -> %s\n", result.wall_time, out_path.c_str());
    return 0;
}

int run_benchmark(const Options& o) {
    if (o.reps < 1) throw Usage{"--reps must be at least 1"};
    const DatasetSpec spec = make_spec(o);
    const std::string out_path = o.out.empty() ? "benchmark_result.json" : o.out;

    Prepared prep = prepare(spec, o.seed);

    json doc;
    doc["command"] = "benchmark";
    doc["manifest"]["dataset"] = dataset_json(o, spec, prep);
    doc["manifest"]["reps"] = o.reps;
    doc["manifest"]["seed"] = o.seed;
    doc["environment"]["requested_threads"] = o.threads;
    doc["environment"]["hardware_concurrency"] = std::thread::hardware_concurrency();
    doc["environment"]["element_type"] = "double";

    struct Row {
        std::string label;
        bool ok = false;
        double f1 = 0.0;
        double med = 0.0;
        std::string error;
    };
    std::vector<Row> rows;
    bool any_failed = false;

    for (const Backend backend : {Backend::sequential, Backend::parallel}) {
        const TrainConfig cfg = make_config(o, backend);
        json entry;
        entry["config"] = config_json(cfg);
        Row row{backend_name(backend)};
        try {
            std::vector<double> times;
            std::optional<FitResult> first;
            for (std::size_t rep = 0; rep < o.reps; ++rep) {
                auto [result, elapsed] = timed([&] { return fit(prep.train, cfg); });
                times.push_back(result.wall_time);
                if (!first) first = std::move(result);
            }
            const bool has_test = prep.test.size() > 0;
            const LabeledDataset& eval_set = has_test ? prep.test : prep.train;
            const EvalReport report =
                evaluate(eval_set.Y, labels_for(first->weights, eval_set.X, cfg.fit_intercept),
                         median(times), cfg);
            entry["times"] = times;
            entry["median_time"] = median(times);
            entry["iterations"] = first->iterations;
            entry["converged"] = first->converged;
            entry["final_grad_norm"] = first->final_grad_norm;
            entry["weights"] = std::vector<double>(first->weights.data().begin(),
                                                   first->weights.data().end());
            entry["f1"] = report.f1;
            entry["evaluated_on"] = has_test ? "test" : "train";
            row.ok = true;
            row.f1 = report.f1;
            row.med = median(times);
        } catch (const std::exception& e) {
            entry["error"] = e.what();
            row.error = e.what();
            any_failed = true;
        }
        doc["backends"][row.label] = entry;
        rows.push_back(row);
    }

    write_json(out_path, doc);

    std::printf("%-12s %-10s %s\n", "backend", "f1 score", "execution time (s)");
    for (const Row& row : rows) {
        if (row.ok) {
            std::printf("%-12s %-10.4f %.6f\n", row.label.c_str(), row.f1, row.med);
        } else {
            std::printf("%-12s failed: %s\n", row.label.c_str(), row.error.c_str());
        }
    }
    std::printf("-> %s\n", out_path.c_str());
    return any_failed ? 1 : 0;
}

int run_predict(const Options& o) {
    if (!(o.threshold > 0.0) || !(o.threshold < 1.0)) {
        throw Usage{"--threshold must lie strictly inside (0,1)"};
    }
    const std::string out_path = o.out.empty() ? "predictions.csv" : o.out;

    std::ifstream model_file(o.model);
    if (!model_file) throw std::runtime_error("cannot open model file " + o.model);
    json model = json::parse(model_file);
    const std::vector<double> weights = model.at("fit").at("weights").get<std::vector<double>>();
    const bool intercept = model.at("config").at("fit_intercept").get<bool>();
    std::optional<StandardizeStats> stats;
    if (model.contains("standardization")) {
        stats = StandardizeStats{
            RowVector(model["standardization"].at("means").get<std::vector<double>>()),
            RowVector(model["standardization"].at("stds").get<std::vector<double>>())};
    }

    DenseMatrix X = load_features_csv(o.data);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    if (X.rows() == 0) {
        std::printf("predict: 0 rows -> %s\n", out_path.c_str());
        return 0;
    }
    if (stats) X = apply_standardization(X, *stats);
    if (intercept) X = augment_with_intercept(X);
    const RowVector w(weights);
    const RowVector proba = predict_proba(w, X);
    std::size_t positives = 0;
    for (std::size_t i = 0; i < proba.len(); ++i) {
        const int label = proba[i] >= o.threshold ? 1 : 0;
        positives += static_cast<std::size_t>(label);
        char buf[40];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), proba[i]);
        out << label << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + out_path);
    std::printf("predict: %zu rows, %zu positive -> %s\n", proba.len(), positives,
                out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient-descent logistic regression benchmark"};
    app.require_subcommand(1);
    Options o;

    CLI::App* train_cmd = app.add_subcommand("train", "fit one backend and write the result");
    CLI::Option* train_threads = add_dataset_flags(train_cmd, o);
    add_fit_flags(train_cmd, o);
    train_cmd->add_option("--backend", o.backend, "seq or par (default seq)");
    train_cmd->add_option("--out", o.out, "result file path (default train_result.json)");

    CLI::App* bench_cmd =
        app.add_subcommand("benchmark", "time sequential vs parallel on one dataset");
    CLI::Option* bench_threads = add_dataset_flags(bench_cmd, o);
    add_fit_flags(bench_cmd, o);
    bench_cmd->add_option("--reps", o.reps, "timing repetitions per backend (default 3)");
    bench_cmd->add_option("--out", o.out, "result file path (default benchmark_result.json)");

    CLI::App* predict_cmd = app.add_subcommand("predict", "apply trained weights to a feature CSV");
    predict_cmd->add_option("--model", o.model, "result file from train (default train_result.json)");
    predict_cmd->add_option("--data", o.data, "features-only CSV to score");
    predict_cmd->add_option("--threshold", o.threshold, "positive-class cutoff (default 0.5)");
    predict_cmd->add_option("--out", o.out, "predictions path (default predictions.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (train_cmd->parsed()) {
            resolve_threads_env(train_threads, o);
            validate_common(o);
            parse_backend(o.backend);
            return run_train(o);
        }
        if (bench_cmd->parsed()) {
            resolve_threads_env(bench_threads, o);
            validate_common(o);
            return run_benchmark(o);
        }
        return run_predict(o);
    } catch (const Usage& u) {
        std::fprintf(stderr, "error: %s\n", u.message.c_str());
        return 2;
    } catch (const DivergedError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
