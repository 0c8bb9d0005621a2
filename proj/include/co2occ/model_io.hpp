#pragma once

#include <string>

#include "co2occ/model.hpp"
#include "co2occ/svr.hpp"

namespace co2occ {

enum class ModelKind { Cdhoc, Svr };

/// Versioned plain-text model files; numbers round-trip exactly, so a loaded
/// model predicts bit-identically.
void save_model(const std::string& path, const OccupancyModel& model);
OccupancyModel load_model(const std::string& path);

void save_svr_model(const std::string& path, const SvrModel& model);
SvrModel load_svr_model(const std::string& path);

/// Peek at a model file's kind without loading it fully.
ModelKind model_file_kind(const std::string& path);

} // namespace co2occ
