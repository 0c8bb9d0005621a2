#include "co2occ/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
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

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(strip(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_number(const std::string& field, int line_no, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || !std::isfinite(v))
        throw ValidationError("line " + std::to_string(line_no) + ": unparseable " + what +
                              " value '" + field + "'");
    return v;
}

/// ISO-8601: YYYY-MM-DD[T ]HH:MM:SS optionally followed by Z or +-HH[:]MM.
std::int64_t parse_timestamp(const std::string& field, int line_no,
                             std::int64_t default_offset) {
    std::tm tm = {};
    int consumed = 0;
    if (std::sscanf(field.c_str(), "%4d-%2d-%2d%*1[T ]%2d:%2d:%2d%n", &tm.tm_year, &tm.tm_mon,
                    &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &consumed) != 6)
        throw ValidationError("line " + std::to_string(line_no) + ": unparseable timestamp '" +
                              field + "'");
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    const std::int64_t wall = static_cast<std::int64_t>(timegm(&tm));

    const std::string zone = strip(field.substr(static_cast<std::size_t>(consumed)));
    if (zone.empty()) return wall - default_offset;
    if (zone == "Z") return wall;
    int hh = 0, mm = 0;
    char sign = 0;
    if (std::sscanf(zone.c_str(), "%c%2d:%2d", &sign, &hh, &mm) != 3 &&
        std::sscanf(zone.c_str(), "%c%2d%2d", &sign, &hh, &mm) != 3)
        throw ValidationError("line " + std::to_string(line_no) + ": unparseable UTC offset '" +
                              zone + "'");
    if (sign != '+' && sign != '-')
        throw ValidationError("line " + std::to_string(line_no) + ": unparseable UTC offset '" +
                              zone + "'");
    const std::int64_t off = (sign == '-' ? -1 : 1) * (hh * 3600 + mm * 60);
    return wall - off;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

AlignedPair Dataset::aligned_pair() const {
    if (!occupancy)
        throw ValidationError("dataset has no occupancy column");
    AlignedPair pair;
    pair.co2 = co2;
    pair.occupancy = *occupancy;
    pair.lag_applied = 0;
    return pair;
}

Dataset ingest_csv(const std::string& path, std::int64_t interval, std::int64_t utc_offset,
                   Eigen::Index max_gap) {
    if (interval <= 0)
        throw ValidationError("ingest: declared interval must be positive");
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        throw ValidationError(path + ": empty file");
    const std::vector<std::string> header = split_csv(line);
    const bool with_occupancy =
        header.size() == 3 && header[0] == "timestamp" && header[1] == "co2_ppm" &&
        header[2] == "occupancy";
    const bool co2_only =
        header.size() == 2 && header[0] == "timestamp" && header[1] == "co2_ppm";
    if (!with_occupancy && !co2_only)
        throw ValidationError(path + ": header must be 'timestamp,co2_ppm,occupancy' or "
                              "'timestamp,co2_ppm'");

    struct Slot {
        double co2_sum = 0.0;
        double occ_sum = 0.0;
        int count = 0;
    };
    std::vector<Slot> slots;
    std::int64_t t0 = 0;
    std::int64_t prev_t = 0;
    bool first = true;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() != header.size())
            throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
        const std::int64_t t = parse_timestamp(fields[0], line_no, utc_offset);
        if (!first) {
            if (t == prev_t)
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": duplicated timestamp '" + fields[0] + "'");
            if (t < prev_t)
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": timestamps are not monotone");
        }
        const double co2_v = parse_number(fields[1], line_no, "co2_ppm");
        double occ_v = 0.0;
        if (with_occupancy) {
            occ_v = parse_number(fields[2], line_no, "occupancy");
            if (occ_v < 0.0)
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": negative occupancy");
        }
        if (first) {
            t0 = t;
            first = false;
        }
        const auto idx = static_cast<std::size_t>((t - t0 + interval / 2) / interval);
        if (idx >= slots.size()) slots.resize(idx + 1);
        slots[idx].co2_sum += co2_v;
        slots[idx].occ_sum += occ_v;
        slots[idx].count += 1;
        prev_t = t;
    }
    if (slots.empty())
        throw ValidationError(path + ": no data rows");

    Dataset out;
    out.co2.start_time = t0;
    out.co2.interval = interval;
    out.co2.unit = Unit::Ppm;
    out.co2.values.resize(static_cast<Eigen::Index>(slots.size()));
    SampledSeries occ = out.co2;
    occ.unit = Unit::Persons;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].count == 0) {
            out.co2.values[static_cast<Eigen::Index>(i)] = kMissing;
            occ.values[static_cast<Eigen::Index>(i)] = kMissing;
        } else {
            out.co2.values[static_cast<Eigen::Index>(i)] = slots[i].co2_sum / slots[i].count;
            occ.values[static_cast<Eigen::Index>(i)] = slots[i].occ_sum / slots[i].count;
        }
    }
    out.co2 = fill_gaps(out.co2, max_gap);
    if (with_occupancy) {
        occ = fill_gaps(occ, max_gap);
        // Labels are whole persons; interpolated gap values get rounded back.
        occ.values = occ.values.unaryExpr([](double v) { return std::nearbyint(v); });
        out.occupancy = std::move(occ);
    }
    return out;
}

std::string format_timestamp(std::int64_t utc_time, std::int64_t utc_offset) {
    const std::time_t local = static_cast<std::time_t>(utc_time + utc_offset);
    std::tm tm = {};
    gmtime_r(&local, &tm);
    char buf[64];
    const char sign = utc_offset < 0 ? '-' : '+';
    const std::int64_t off = utc_offset < 0 ? -utc_offset : utc_offset;
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d%c%02lld:%02lld",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min,
                  tm.tm_sec, sign, static_cast<long long>(off / 3600),
                  static_cast<long long>((off % 3600) / 60));
    return buf;
}

void write_dataset_csv(const std::string& path, const SampledSeries& co2,
                       const SampledSeries* occupancy, std::int64_t utc_offset) {
    std::ofstream outf(path);
    if (!outf)
        throw ValidationError("cannot write '" + path + "'");
    outf << (occupancy ? "timestamp,co2_ppm,occupancy\n" : "timestamp,co2_ppm\n");
    for (Eigen::Index i = 0; i < co2.size(); ++i) {
        outf << format_timestamp(co2.time_at(i), utc_offset) << ','
             << format_double(co2.values[i]);
        if (occupancy) outf << ',' << format_double(occupancy->values[i]);
        outf << '\n';
    }
}

void write_components_csv(const std::string& path, const ComponentSet& components,
                          std::int64_t utc_offset) {
    std::ofstream outf(path);
    if (!outf)
        throw ValidationError("cannot write '" + path + "'");
    outf << "timestamp,trend,seasonal,irregular\n";
    for (Eigen::Index i = 0; i < components.trend.size(); ++i)
        outf << format_timestamp(components.trend.time_at(i), utc_offset) << ','
             << format_double(components.trend.values[i]) << ','
             << format_double(components.seasonal.values[i]) << ','
             << format_double(components.irregular.values[i]) << '\n';
}

void write_sweep_csv(const std::string& path, const std::vector<LagFit>& sweep) {
    std::ofstream outf(path);
    if (!outf)
        throw ValidationError("cannot write '" + path + "'");
    outf << "lag,nrmse\n";
    for (const LagFit& fit : sweep)
        outf << fit.lag << ',' << format_double(fit.nrmse) << '\n';
}

void write_predictions_csv(const std::string& path, const SampledSeries& predicted,
                           const SampledSeries& actual, const Eigen::VectorXd& raw,
                           std::int64_t utc_offset) {
    std::ofstream outf(path);
    if (!outf)
        throw ValidationError("cannot write '" + path + "'");
    outf << "timestamp,predicted,actual,raw\n";
    for (Eigen::Index i = 0; i < predicted.size(); ++i)
        outf << format_timestamp(predicted.time_at(i), utc_offset) << ','
             << format_double(predicted.values[i]) << ','
             << format_double(actual.values[i]) << ',' << format_double(raw[i]) << '\n';
}

} // namespace co2occ
