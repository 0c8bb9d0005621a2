#include "co2occ/config.hpp"

#include <fstream>
#include <sstream>

namespace co2occ {

namespace {

std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = strip(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "on" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "off" || v == "false" || v == "no") return false;
    throw ValidationError("config: expected a boolean, got '" + v + "'");
}

Method parse_method(const std::string& v) {
    if (v == "std") return Method::Std;
    if (v == "stl") return Method::Stl;
    throw ValidationError("config: method must be std or stl, got '" + v + "'");
}

} // namespace

void apply_config_entry(PipelineConfig& config, const std::string& key,
                        const std::string& value) {
    TrainConfig& t = config.eval.train;
    SvrParams& s = config.eval.svr;
    if (key == "interval") config.interval = std::stoll(value);
    else if (key == "max_gap") config.max_gap = std::stoll(value);
    else if (key == "seed") {
        config.seed = std::stoull(value);
        s.seed = config.seed;
    } else if (key == "utc_offset") t.utc_offset = std::stoll(value);
    else if (key == "method") t.method = parse_method(value);
    else if (key == "period") t.period = std::stoll(value);
    else if (key == "max_lag") t.max_lag = std::stoll(value);
    else if (key == "poly_max_degree") t.poly_max_degree = std::stoi(value);
    else if (key == "dtw_threshold") t.dtw_threshold = std::stod(value);
    else if (key == "pcc_threshold") t.pcc_threshold = std::stod(value);
    else if (key == "henderson_terms") t.henderson_terms = std::stoi(value);
    else if (key == "seasonal_span") t.seasonal_span = std::stoll(value);
    else if (key == "trend_span") t.trend_span = std::stoll(value);
    else if (key == "inner_iterations") t.inner_iterations = std::stoi(value);
    else if (key == "outer_iterations") t.outer_iterations = std::stoi(value);
    else if (key == "loess_degree") t.loess_degree = std::stoi(value);
    else if (key == "zpa") t.zpa_enabled = parse_bool(value);
    else if (key == "min_training_days") config.eval.min_training_days = std::stoi(value);
    else if (key == "tolerances") {
        config.eval.tolerances.clear();
        for (const std::string& item : split_list(value))
            config.eval.tolerances.push_back(std::stod(item));
        if (config.eval.tolerances.empty())
            throw ValidationError("config: tolerances list is empty");
    } else if (key == "methods") {
        config.eval.methods.clear();
        for (const std::string& item : split_list(value)) {
            if (item == "std") config.eval.methods.push_back(EvalMethod::Std);
            else if (item == "stl") config.eval.methods.push_back(EvalMethod::Stl);
            else if (item == "svr") config.eval.methods.push_back(EvalMethod::Svr);
            else throw ValidationError("config: unknown method '" + item + "'");
        }
        if (config.eval.methods.empty())
            throw ValidationError("config: methods list is empty");
    } else if (key == "svr_window") s.window = std::stoll(value);
    else if (key == "svr_epsilon") s.epsilon = std::stod(value);
    else if (key == "svr_c") s.c = std::stod(value);
    else if (key == "svr_epochs") s.epochs = std::stoi(value);
    else throw ValidationError("config: unknown key '" + key + "'");
}

PipelineConfig load_config(const std::string& path, PipelineConfig defaults) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open config file '" + path + "'");
    PipelineConfig config = std::move(defaults);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = strip(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ValidationError(path + ": line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
        try {
            apply_config_entry(config, strip(s.substr(0, eq)), strip(s.substr(eq + 1)));
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception& e) {
            throw ValidationError(path + ": line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

} // namespace co2occ
