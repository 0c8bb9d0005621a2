// Command-line surface: simulate, decompose, lagsweep, train, predict,
// evaluate. Exit codes: 0 success, 1 validation/input error, 2 training or
// evaluation failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "co2occ/config.hpp"
#include "co2occ/csv.hpp"
#include "co2occ/eval.hpp"
#include "co2occ/model_io.hpp"
#include "co2occ/sim.hpp"
#include "co2occ/svr.hpp"

namespace {

using namespace co2occ;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    PipelineConfig config;

    void resolve() {
        if (!config_path.empty()) config = load_config(config_path, config);
        for (const std::string& entry : overrides) {
            const auto eq = entry.find('=');
            if (eq == std::string::npos)
                throw ValidationError("--set expects key=value, got '" + entry + "'");
            apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
        }
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "key = value configuration file");
    cmd->add_option("--set", opts.overrides,
                    "override a config key, e.g. --set method=stl (repeatable)");
}

void print_report(const EvalReport& report) {
    std::printf("%-6s %-5s %-6s %-9s %-9s %-9s\n", "train", "test", "method", "tolerance",
                "accuracy", "mae");
    for (const EvalRow& row : report.rows) {
        if (row.failed) {
            std::printf("%-6d %-5d %-6s %-9.3g %-9s %s\n", row.train_days, row.test_days,
                        to_string(row.method).c_str(), row.tolerance, "failed",
                        row.error.c_str());
        } else {
            std::printf("%-6d %-5d %-6s %-9.3g %-9.2f %-9.3f\n", row.train_days,
                        row.test_days, to_string(row.method).c_str(), row.tolerance,
                        row.accuracy, row.mae);
        }
    }
    for (const EvalAverage& avg : report.averages)
        std::printf("average          %-6s %-9.3g %-9.2f %-9.3f\n",
                    to_string(avg.method).c_str(), avg.tolerance, avg.accuracy, avg.mae);
}

void write_report_csv(const std::string& path, const EvalReport& report) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "train_days,test_days,method,tolerance,accuracy,mae,error\n";
    for (const EvalRow& row : report.rows) {
        out << row.train_days << ',' << row.test_days << ',' << to_string(row.method) << ','
            << row.tolerance << ',';
        if (row.failed)
            out << ",," << row.error << '\n';
        else
            out << row.accuracy << ',' << row.mae << ",\n";
    }
    for (const EvalAverage& avg : report.averages)
        out << "average,," << to_string(avg.method) << ',' << avg.tolerance << ','
            << avg.accuracy << ',' << avg.mae << ",\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CO2-driven indoor occupancy estimation pipeline"};
    app.require_subcommand(1);

    // ---- simulate ----
    CommonOpts sim_opts;
    std::string sim_preset = "office";
    std::uint64_t sim_seed = 0;
    std::string sim_out = "dataset.csv";
    std::string sim_schedule_out;
    bool sim_no_noise = false;
    auto* sim_cmd = app.add_subcommand("simulate", "generate a dataset CSV from a room preset");
    sim_cmd->add_option("--preset", sim_preset, "office or cinema")->required();
    sim_cmd->add_option("--seed", sim_seed, "schedule and sensor noise seed");
    sim_cmd->add_option("-o,--output", sim_out, "dataset CSV path");
    sim_cmd->add_option("--schedule-out", sim_schedule_out,
                        "also write the occupant schedule as interval rows");
    sim_cmd->add_flag("--no-noise", sim_no_noise, "emit the noiseless trace");
    add_common(sim_cmd, sim_opts);

    // ---- decompose ----
    CommonOpts dec_opts;
    std::string dec_in, dec_out = "components.csv";
    auto* dec_cmd = app.add_subcommand("decompose", "split a series into components");
    dec_cmd->add_option("-i,--input", dec_in, "dataset CSV")->required();
    dec_cmd->add_option("-o,--output", dec_out, "component CSV path");
    add_common(dec_cmd, dec_opts);

    // ---- lagsweep ----
    CommonOpts lag_opts;
    std::string lag_in, lag_out = "lagsweep.csv";
    auto* lag_cmd = app.add_subcommand("lagsweep", "export the per-lag error curve");
    lag_cmd->add_option("-i,--input", lag_in, "dataset CSV with occupancy")->required();
    lag_cmd->add_option("-o,--output", lag_out, "sweep CSV path");
    add_common(lag_cmd, lag_opts);

    // ---- train ----
    CommonOpts train_opts;
    std::string train_in, train_out = "model.txt";
    bool train_svr = false;
    auto* train_cmd = app.add_subcommand("train", "fit a model on a labelled dataset");
    train_cmd->add_option("-i,--input", train_in, "dataset CSV with occupancy")->required();
    train_cmd->add_option("-o,--output", train_out, "model file path");
    train_cmd->add_flag("--svr", train_svr, "fit the SVR baseline instead");
    add_common(train_cmd, train_opts);

    // ---- predict ----
    CommonOpts pred_opts;
    std::string pred_model, pred_in, pred_out = "predictions.csv";
    auto* pred_cmd = app.add_subcommand("predict", "predict occupancy for a CO2 window");
    pred_cmd->add_option("-m,--model", pred_model, "model file")->required();
    pred_cmd->add_option("-i,--input", pred_in, "CO2 CSV (occupancy column optional)")
        ->required();
    pred_cmd->add_option("-o,--output", pred_out, "prediction CSV path");
    add_common(pred_cmd, pred_opts);

    // ---- evaluate ----
    CommonOpts eval_opts;
    std::string eval_in, eval_out, eval_pred_dir;
    auto* eval_cmd =
        app.add_subcommand("evaluate", "incremental-split benchmark over the configured methods");
    eval_cmd->add_option("-i,--input", eval_in, "dataset CSV with occupancy")->required();
    eval_cmd->add_option("-o,--output", eval_out, "report CSV path");
    eval_cmd->add_option("--predictions-dir", eval_pred_dir,
                         "directory for per-split prediction CSVs");
    add_common(eval_cmd, eval_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed()) {
            sim_opts.resolve();
            const Preset preset = make_preset(sim_preset, sim_seed);
            std::optional<SensorNoise> noise;
            if (!sim_no_noise) {
                noise = preset.noise;
                noise->seed = sim_seed;
            }
            const SimResult result = simulate(preset.room, preset.schedule, preset.start_time,
                                              preset.interval, preset.duration, noise);
            write_dataset_csv(sim_out, result.co2, &result.occupancy,
                              sim_opts.config.eval.train.utc_offset);
            if (!sim_schedule_out.empty()) {
                std::ofstream sched(sim_schedule_out);
                if (!sched) throw ValidationError("cannot write '" + sim_schedule_out + "'");
                sched << "start,end,occupants\n";
                for (const ScheduleEntry& e : preset.schedule.entries)
                    sched << format_timestamp(e.start_time,
                                              sim_opts.config.eval.train.utc_offset)
                          << ','
                          << format_timestamp(e.end_time,
                                              sim_opts.config.eval.train.utc_offset)
                          << ',' << e.occupant_count << '\n';
            }
            std::cout << "wrote " << result.co2.size() << " samples to " << sim_out << "\n";
            return 0;
        }

        if (dec_cmd->parsed()) {
            dec_opts.resolve();
            const PipelineConfig& cfg = dec_opts.config;
            const Dataset data =
                ingest_csv(dec_in, cfg.interval, cfg.eval.train.utc_offset, cfg.max_gap);
            Eigen::Index period = cfg.eval.train.period;
            if (period == 0) period = static_cast<Eigen::Index>(86400 / cfg.interval);
            const ComponentSet comps = decompose(data.co2, cfg.eval.train.decomposition(period));
            write_components_csv(dec_out, comps, cfg.eval.train.utc_offset);
            std::cout << "wrote components to " << dec_out << "\n";
            return 0;
        }

        if (lag_cmd->parsed()) {
            lag_opts.resolve();
            const PipelineConfig& cfg = lag_opts.config;
            const Dataset data =
                ingest_csv(lag_in, cfg.interval, cfg.eval.train.utc_offset, cfg.max_gap);
            const AlignedPair pair = data.aligned_pair();
            const LagSelection sel =
                select_lag(pair.co2, pair.occupancy, cfg.eval.train.max_lag);
            write_sweep_csv(lag_out, sel.sweep);
            std::cout << "selected lag " << sel.lag << "; wrote sweep to " << lag_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    // Training and evaluation failures exit with 2; their input problems
    // (unreadable files, bad schema) still exit with 1 above being caught
    // before model fitting starts.
    try {
        if (train_cmd->parsed()) {
            train_opts.resolve();
            const PipelineConfig& cfg = train_opts.config;
            Dataset data;
            try {
                data = ingest_csv(train_in, cfg.interval, cfg.eval.train.utc_offset,
                                  cfg.max_gap);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
            const AlignedPair pair = data.aligned_pair();
            if (train_svr) {
                const LagSelection sel =
                    select_lag(pair.co2, pair.occupancy, cfg.eval.train.max_lag);
                const SvrModel model =
                    fit_svr(pair.co2, pair.occupancy, sel.lag, cfg.eval.svr.window,
                            cfg.eval.svr.epsilon, cfg.eval.svr.c, cfg.eval.svr.epochs,
                            cfg.eval.svr.seed);
                save_svr_model(train_out, model);
            } else {
                const OccupancyModel model = train(pair.co2, pair.occupancy, cfg.eval.train);
                for (const std::string& w : model.warnings)
                    std::cerr << "warning: " << w << "\n";
                save_model(train_out, model);
            }
            std::cout << "wrote model to " << train_out << "\n";
            return 0;
        }

        if (pred_cmd->parsed()) {
            pred_opts.resolve();
            const PipelineConfig& cfg = pred_opts.config;
            Dataset data;
            ModelKind kind;
            try {
                data = ingest_csv(pred_in, cfg.interval, cfg.eval.train.utc_offset,
                                  cfg.max_gap);
                kind = model_file_kind(pred_model);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
            SampledSeries predicted;
            Eigen::VectorXd raw;
            if (kind == ModelKind::Svr) {
                const SvrModel model = load_svr_model(pred_model);
                predicted = predict_svr(model, data.co2);
                raw = predict_svr_raw(model, data.co2);
            } else {
                const OccupancyModel model = load_model(pred_model);
                PredictionResult result = predict(model, data.co2);
                for (const std::string& w : result.warnings)
                    std::cerr << "warning: " << w << "\n";
                predicted = std::move(result.occupancy);
                raw = std::move(result.raw);
            }
            SampledSeries actual = predicted;
            actual.values.setZero();
            if (data.occupancy) actual = data.occupancy->slice(0, predicted.size());
            write_predictions_csv(pred_out, predicted, actual, raw,
                                  cfg.eval.train.utc_offset);
            std::cout << "wrote " << predicted.size() << " predictions to " << pred_out
                      << "\n";
            return 0;
        }

        if (eval_cmd->parsed()) {
            eval_opts.resolve();
            PipelineConfig cfg = eval_opts.config;
            cfg.eval.predictions_dir = eval_pred_dir;
            Dataset data;
            try {
                data = ingest_csv(eval_in, cfg.interval, cfg.eval.train.utc_offset,
                                  cfg.max_gap);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
            const EvalReport report = run_benchmark(data.aligned_pair(), cfg.eval);
            print_report(report);
            if (!eval_out.empty()) write_report_csv(eval_out, report);
            bool all_failed = !report.rows.empty();
            for (const EvalRow& row : report.rows)
                if (!row.failed) all_failed = false;
            return all_failed ? 2 : 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
