#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "co2occ/model.hpp"
#include "co2occ/series.hpp"

namespace co2occ {

enum class EvalMethod { Std, Stl, Svr };

std::string to_string(EvalMethod m);

struct SvrParams {
    Eigen::Index window = 4;
    double epsilon = 0.5;
    double c = 1.0;
    int epochs = 40;
    std::uint64_t seed = 0;
};

struct EvalConfig {
    std::vector<double> tolerances = {0.0, 1.0};
    std::vector<EvalMethod> methods = {EvalMethod::Std, EvalMethod::Stl, EvalMethod::Svr};
    int min_training_days = 1;
    TrainConfig train;
    SvrParams svr;
    std::string predictions_dir; ///< empty disables per-split prediction export
};

struct EvalRow {
    int train_days = 0;
    int test_days = 0;
    EvalMethod method = EvalMethod::Std;
    double tolerance = 0.0;
    double accuracy = 0.0; ///< percent of samples within tolerance
    double mae = 0.0;      ///< mean |raw - actual| before rounding
    bool failed = false;
    std::string error;
};

struct EvalAverage {
    EvalMethod method = EvalMethod::Std;
    double tolerance = 0.0;
    double accuracy = 0.0;
    double mae = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    std::vector<EvalAverage> averages; ///< mean over non-failed rows per method/tolerance
};

/// Percent of samples with |pred - actual| <= x.
double accuracy_with_tolerance(const SampledSeries& pred, const SampledSeries& actual,
                               double x);

struct Split {
    int train_days = 0;
    int test_days = 0;
    Eigen::Index boundary = 0; ///< first test sample, relative to the whole-day region
    Eigen::Index region_start = 0;
    Eigen::Index region_end = 0;
};

/// Half/half split on whole local days first, then one day moves from test to
/// training per step until a single test day remains. Partial edge days are
/// excluded from the protocol.
std::vector<Split> incremental_splits(const AlignedPair& data, std::int64_t utc_offset);

/// Train and score every configured method on every incremental split. A
/// failing cell is recorded with its error and the run continues.
EvalReport run_benchmark(const AlignedPair& data, const EvalConfig& config);

} // namespace co2occ
