#include "co2occ/eval.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "co2occ/csv.hpp"
#include "co2occ/lag.hpp"
#include "co2occ/svr.hpp"

namespace co2occ {

std::string to_string(EvalMethod m) {
    switch (m) {
        case EvalMethod::Std: return "std";
        case EvalMethod::Stl: return "stl";
        case EvalMethod::Svr: return "svr";
    }
    return "?";
}

double accuracy_with_tolerance(const SampledSeries& pred, const SampledSeries& actual,
                               double x) {
    if (pred.size() != actual.size())
        throw ValidationError("accuracy_with_tolerance: lengths differ");
    if (pred.size() == 0)
        throw ValidationError("accuracy_with_tolerance: empty series");
    if (x < 0.0)
        throw ValidationError("accuracy_with_tolerance: tolerance must be non-negative");
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < pred.size(); ++i)
        if (std::abs(pred.values[i] - actual.values[i]) <= x) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(pred.size());
}

std::vector<Split> incremental_splits(const AlignedPair& data, std::int64_t utc_offset) {
    const SampledSeries& occ = data.occupancy;
    validate(occ);
    const std::int64_t day = 86400;
    if (day % occ.interval != 0)
        throw ValidationError("incremental_splits: interval must divide one day");
    const Eigen::Index per_day = static_cast<Eigen::Index>(day / occ.interval);

    // First local midnight at or after the first sample.
    const std::int64_t sod = seconds_of_day(occ.start_time, utc_offset);
    const Eigen::Index lead =
        sod == 0 ? 0 : static_cast<Eigen::Index>((day - sod) / occ.interval);
    const Eigen::Index n = occ.size();
    if (lead >= n)
        throw ValidationError("incremental_splits: dataset spans no whole day");
    const int days = static_cast<int>((n - lead) / per_day);
    if (days < 2)
        throw ValidationError("incremental_splits: dataset spans fewer than 2 whole days");

    std::vector<Split> splits;
    const int first_train = (days + 1) / 2;
    for (int k = first_train; k <= days - 1; ++k) {
        Split s;
        s.train_days = k;
        s.test_days = days - k;
        s.region_start = lead;
        s.region_end = lead + static_cast<Eigen::Index>(days) * per_day;
        s.boundary = lead + static_cast<Eigen::Index>(k) * per_day;
        splits.push_back(s);
    }
    return splits;
}

namespace {

struct CellPrediction {
    SampledSeries predicted;
    Eigen::VectorXd raw;
    SampledSeries actual;
};

CellPrediction run_cell(const AlignedPair& data, const Split& split, EvalMethod method,
                        const EvalConfig& config) {
    const Eigen::Index train_len = split.boundary - split.region_start;
    const Eigen::Index test_len = split.region_end - split.boundary;
    const SampledSeries co2_train = data.co2.slice(split.region_start, train_len);
    const SampledSeries occ_train = data.occupancy.slice(split.region_start, train_len);
    const SampledSeries co2_test = data.co2.slice(split.boundary, test_len);
    const SampledSeries occ_test = data.occupancy.slice(split.boundary, test_len);

    CellPrediction cell;
    if (method == EvalMethod::Svr) {
        const LagSelection sel = select_lag(co2_train, occ_train, config.train.max_lag);
        const SvrModel model =
            fit_svr(co2_train, occ_train, sel.lag, config.svr.window, config.svr.epsilon,
                    config.svr.c, config.svr.epochs, config.svr.seed);
        cell.predicted = predict_svr(model, co2_test);
        cell.raw = predict_svr_raw(model, co2_test);
    } else {
        TrainConfig tc = config.train;
        tc.method = method == EvalMethod::Std ? Method::Std : Method::Stl;
        const OccupancyModel model = train(co2_train, occ_train, tc);
        PredictionResult pred = predict(model, co2_test);
        cell.predicted = std::move(pred.occupancy);
        cell.raw = std::move(pred.raw);
    }
    cell.actual = occ_test.slice(0, cell.predicted.size());
    return cell;
}

} // namespace

EvalReport run_benchmark(const AlignedPair& data, const EvalConfig& config) {
    const std::vector<Split> splits = incremental_splits(data, config.train.utc_offset);

    EvalReport report;
    for (const Split& split : splits) {
        if (split.train_days < config.min_training_days) continue;
        for (EvalMethod method : config.methods) {
            try {
                const CellPrediction cell = run_cell(data, split, method, config);
                const double mae =
                    (cell.raw - cell.actual.values).cwiseAbs().mean();
                for (double tol : config.tolerances) {
                    EvalRow row;
                    row.train_days = split.train_days;
                    row.test_days = split.test_days;
                    row.method = method;
                    row.tolerance = tol;
                    row.accuracy = accuracy_with_tolerance(cell.predicted, cell.actual, tol);
                    row.mae = mae;
                    report.rows.push_back(row);
                }
                if (!config.predictions_dir.empty()) {
                    std::filesystem::create_directories(config.predictions_dir);
                    const std::string path = config.predictions_dir + "/predictions_" +
                                             std::to_string(split.train_days) + "train_" +
                                             to_string(method) + ".csv";
                    write_predictions_csv(path, cell.predicted, cell.actual, cell.raw,
                                          config.train.utc_offset);
                }
            } catch (const std::exception& e) {
                for (double tol : config.tolerances) {
                    EvalRow row;
                    row.train_days = split.train_days;
                    row.test_days = split.test_days;
                    row.method = method;
                    row.tolerance = tol;
                    row.failed = true;
                    row.error = e.what();
                    report.rows.push_back(row);
                }
            }
        }
    }

    std::map<std::pair<int, double>, std::pair<Eigen::Index, EvalAverage>> acc;
    for (const EvalRow& row : report.rows) {
        if (row.failed) continue;
        auto& slot = acc[{static_cast<int>(row.method), row.tolerance}];
        slot.second.method = row.method;
        slot.second.tolerance = row.tolerance;
        slot.second.accuracy += row.accuracy;
        slot.second.mae += row.mae;
        slot.first += 1;
    }
    for (auto& [key, slot] : acc) {
        slot.second.accuracy /= static_cast<double>(slot.first);
        slot.second.mae /= static_cast<double>(slot.first);
        report.averages.push_back(slot.second);
    }
    return report;
}

} // namespace co2occ
