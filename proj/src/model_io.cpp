#include "co2occ/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace co2occ {

namespace {

constexpr const char* kMagic = "co2occ-model v1";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(const Eigen::VectorXd& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += fmt(v[i]);
    }
    return out;
}

using Section = std::map<std::string, std::string>;
using Sections = std::map<std::string, Section>;

std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

Sections parse_sections(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open model file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || strip(line) != kMagic)
        throw ValidationError(path + ": not a '" + kMagic + "' file");
    Sections out;
    std::string current;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = strip(line);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[' && s.back() == ']') {
            current = s.substr(1, s.size() - 2);
            out[current];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos || current.empty())
            throw ValidationError(path + ": line " + std::to_string(line_no) +
                                  ": expected 'key = value' inside a section");
        out[current][strip(s.substr(0, eq))] = strip(s.substr(eq + 1));
    }
    return out;
}

const std::string& get(const Sections& s, const std::string& section, const std::string& key) {
    const auto sec = s.find(section);
    if (sec == s.end())
        throw ValidationError("model file is missing section [" + section + "]");
    const auto it = sec->second.find(key);
    if (it == sec->second.end())
        throw ValidationError("model file is missing key '" + key + "' in [" + section + "]");
    return it->second;
}

double get_double(const Sections& s, const std::string& sec, const std::string& key) {
    return std::stod(get(s, sec, key));
}

std::int64_t get_int(const Sections& s, const std::string& sec, const std::string& key) {
    return std::stoll(get(s, sec, key));
}

Eigen::VectorXd get_vector(const Sections& s, const std::string& sec, const std::string& key) {
    std::istringstream in(get(s, sec, key));
    std::vector<double> vals;
    double v = 0.0;
    while (in >> v) vals.push_back(v);
    return Eigen::Map<const Eigen::VectorXd>(vals.data(),
                                             static_cast<Eigen::Index>(vals.size()));
}

void write_poly(std::ofstream& out, const char* name, const PolyModel& m) {
    out << '[' << name << "]\n";
    out << "degree = " << m.degree << '\n';
    out << "coefficients = " << fmt(m.coefficients) << '\n';
    out << "residual_offset = " << fmt(m.residual_offset) << '\n';
    out << "aic = " << fmt(m.aic) << '\n';
    out << "weakly_validated = " << (m.weakly_validated ? 1 : 0) << '\n';
}

PolyModel read_poly(const Sections& s, const std::string& sec) {
    PolyModel m;
    m.degree = static_cast<int>(get_int(s, sec, "degree"));
    m.coefficients = get_vector(s, sec, "coefficients");
    m.residual_offset = get_double(s, sec, "residual_offset");
    m.aic = get_double(s, sec, "aic");
    m.weakly_validated = get_int(s, sec, "weakly_validated") != 0;
    return m;
}

void write_series(std::ofstream& out, const char* name, const SampledSeries& s) {
    out << '[' << name << "]\n";
    out << "start_time = " << s.start_time << '\n';
    out << "interval = " << s.interval << '\n';
    out << "unit = " << (s.unit == Unit::Ppm ? "ppm" : s.unit == Unit::Persons ? "persons"
                                                                               : "dimensionless")
        << '\n';
    out << "values = " << fmt(s.values) << '\n';
}

SampledSeries read_series(const Sections& s, const std::string& sec) {
    SampledSeries out;
    out.start_time = get_int(s, sec, "start_time");
    out.interval = get_int(s, sec, "interval");
    const std::string unit = get(s, sec, "unit");
    out.unit = unit == "ppm" ? Unit::Ppm : unit == "persons" ? Unit::Persons
                                                             : Unit::Dimensionless;
    out.values = get_vector(s, sec, "values");
    return out;
}

} // namespace

void save_model(const std::string& path, const OccupancyModel& model) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write model file '" + path + "'");
    out << kMagic << "\n[model]\nkind = cdhoc\n";
    out << "method = " << (model.method == Method::Std ? "std" : "stl") << '\n';
    out << "period = " << model.period << '\n';
    out << "lag = " << model.lag << '\n';
    out << "interval = " << model.interval << '\n';
    out << "utc_offset = " << model.utc_offset << '\n';
    out << "training_start = " << model.training_start << '\n';
    out << "training_end = " << model.training_end << '\n';
    out << "henderson_terms = " << model.decomposition.henderson_terms << '\n';
    out << "seasonal_span = " << model.decomposition.seasonal_span << '\n';
    out << "trend_span = " << model.decomposition.trend_span << '\n';
    out << "inner_iterations = " << model.decomposition.inner_iterations << '\n';
    out << "outer_iterations = " << model.decomposition.outer_iterations << '\n';
    out << "loess_degree = " << model.decomposition.loess_degree << '\n';
    write_poly(out, "trend", model.trend_model);
    out << "[seasonal]\n";
    out << "phase_anchor = " << model.seasonal_map.phase_anchor << '\n';
    out << "anchor_index = " << model.seasonal_map.anchor_index << '\n';
    out << "motif = " << fmt(model.seasonal_map.occupancy_motif) << '\n';
    write_poly(out, "irregular", model.irregular_model);
    out << "[zpa]\n";
    out << "present = " << (model.zpa ? 1 : 0) << '\n';
    if (model.zpa) {
        out << "start = " << model.zpa->start << '\n';
        out << "end = " << model.zpa->end << '\n';
        out << "min_days_observed = " << model.zpa->min_days_observed << '\n';
    }
    write_series(out, "context", model.context);
    out << "[warnings]\n";
    out << "count = " << model.warnings.size() << '\n';
    for (std::size_t i = 0; i < model.warnings.size(); ++i)
        out << "warning" << i << " = " << model.warnings[i] << '\n';
}

OccupancyModel load_model(const std::string& path) {
    const Sections s = parse_sections(path);
    if (get(s, "model", "kind") != "cdhoc")
        throw ValidationError(path + ": not an occupancy model file");
    OccupancyModel m;
    m.method = get(s, "model", "method") == "stl" ? Method::Stl : Method::Std;
    m.period = get_int(s, "model", "period");
    m.lag = get_int(s, "model", "lag");
    m.interval = get_int(s, "model", "interval");
    m.utc_offset = get_int(s, "model", "utc_offset");
    m.training_start = get_int(s, "model", "training_start");
    m.training_end = get_int(s, "model", "training_end");
    m.decomposition.method = m.method;
    m.decomposition.period = m.period;
    m.decomposition.henderson_terms = static_cast<int>(get_int(s, "model", "henderson_terms"));
    m.decomposition.seasonal_span = get_int(s, "model", "seasonal_span");
    m.decomposition.trend_span = get_int(s, "model", "trend_span");
    m.decomposition.inner_iterations =
        static_cast<int>(get_int(s, "model", "inner_iterations"));
    m.decomposition.outer_iterations =
        static_cast<int>(get_int(s, "model", "outer_iterations"));
    m.decomposition.loess_degree = static_cast<int>(get_int(s, "model", "loess_degree"));
    m.trend_model = read_poly(s, "trend");
    m.seasonal_map.phase_anchor = get_int(s, "seasonal", "phase_anchor");
    m.seasonal_map.anchor_index = get_int(s, "seasonal", "anchor_index");
    m.seasonal_map.occupancy_motif = get_vector(s, "seasonal", "motif");
    m.irregular_model = read_poly(s, "irregular");
    if (get_int(s, "zpa", "present") != 0) {
        VacantWindow w;
        w.start = get_int(s, "zpa", "start");
        w.end = get_int(s, "zpa", "end");
        w.min_days_observed = static_cast<int>(get_int(s, "zpa", "min_days_observed"));
        m.zpa = w;
    }
    m.context = read_series(s, "context");
    const std::int64_t warning_count = get_int(s, "warnings", "count");
    for (std::int64_t i = 0; i < warning_count; ++i)
        m.warnings.push_back(get(s, "warnings", "warning" + std::to_string(i)));
    return m;
}

void save_svr_model(const std::string& path, const SvrModel& model) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write model file '" + path + "'");
    out << kMagic << "\n[model]\nkind = svr\n";
    out << "[svr]\n";
    out << "lag = " << model.lag << '\n';
    out << "window = " << model.window << '\n';
    out << "epsilon = " << fmt(model.epsilon) << '\n';
    out << "c = " << fmt(model.c) << '\n';
    out << "bias = " << fmt(model.bias) << '\n';
    out << "weights = " << fmt(model.weights) << '\n';
    out << "feature_means = " << fmt(model.feature_means) << '\n';
    out << "feature_stds = " << fmt(model.feature_stds) << '\n';
    write_series(out, "context", model.context);
}

SvrModel load_svr_model(const std::string& path) {
    const Sections s = parse_sections(path);
    if (get(s, "model", "kind") != "svr")
        throw ValidationError(path + ": not an svr model file");
    SvrModel m;
    m.lag = get_int(s, "svr", "lag");
    m.window = get_int(s, "svr", "window");
    m.epsilon = get_double(s, "svr", "epsilon");
    m.c = get_double(s, "svr", "c");
    m.bias = get_double(s, "svr", "bias");
    m.weights = get_vector(s, "svr", "weights");
    m.feature_means = get_vector(s, "svr", "feature_means");
    m.feature_stds = get_vector(s, "svr", "feature_stds");
    m.context = read_series(s, "context");
    return m;
}

ModelKind model_file_kind(const std::string& path) {
    const Sections s = parse_sections(path);
    return get(s, "model", "kind") == "svr" ? ModelKind::Svr : ModelKind::Cdhoc;
}

} // namespace co2occ
