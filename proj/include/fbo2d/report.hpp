#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fbo2d/quadrature.hpp"

namespace fbo2d {

struct Verdict {
  std::string name;
  bool pass = false;
  std::string rule;
};

struct PlotSeries {
  std::string name;  // file stem
  std::string x_label, y_label;
  std::vector<double> x, y;
  std::optional<LinearFit> fit;
};

struct NormReport {
  std::string experiment;
  std::string constants_mode = "none";  // explicit | fitted | swept | none
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, double> fitted;
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;
  std::vector<PlotSeries> plots;

  void add_row(std::vector<double> r) {
    if (r.size() != columns.size()) throw std::logic_error("report: row width differs from header");
    rows.push_back(std::move(r));
  }
  void verdict(std::string name, bool pass, std::string rule) {
    verdicts.push_back({std::move(name), pass, std::move(rule)});
  }
  bool all_finite() const {
    for (const auto& r : rows)
      for (double v : r)
        if (!std::isfinite(v)) return false;
    for (const auto& [k, v] : fitted)
      if (!std::isfinite(v)) return false;
    return true;
  }
  bool pass() const {
    if (verdicts.empty()) return false;
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_escape(header[i]);
  os << "\r\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << "\r\n";
  }
}

inline std::string utc_timestamp() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::ordered_json report_json(const NormReport& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["params"] = r.params;
  j["seeds"] = r.seeds;
  j["constants_mode"] = r.constants_mode;
  auto fit = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.fitted) fit[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(format_double(v));
  j["fitted"] = fit;
  auto vs = nlohmann::ordered_json::array();
  for (const auto& v : r.verdicts) vs.push_back({{"name", v.name}, {"pass", v.pass}, {"rule", v.rule}});
  j["verdicts"] = vs;
  j["warnings"] = r.warnings;
  j["pass"] = r.pass();
  return j;
}

// <out>/<experiment>.csv and <out>/<experiment>.json; the timestamp lives only in the JSON.
inline void write_report(const NormReport& r, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  write_csv(out / (r.experiment + ".csv"), r.columns, r.rows);
  auto j = report_json(r);
  j["generated_utc"] = utc_timestamp();
  std::ofstream os(out / (r.experiment + ".json"));
  if (!os) throw std::runtime_error("cannot write " + (out / (r.experiment + ".json")).string());
  os << j.dump(2) << "\n";
}

// Two-column (x, y) files plus a fit sidecar where one exists.
inline std::vector<std::filesystem::path> emit_plotdata(const NormReport& r, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  std::vector<std::filesystem::path> files;
  for (const auto& p : r.plots) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < p.x.size(); ++i) rows.push_back({p.x[i], p.y[i]});
    const auto path = out / (p.name + ".csv");
    write_csv(path, {p.x_label, p.y_label}, rows);
    files.push_back(path);
    if (p.fit) {
      nlohmann::ordered_json j{{"slope", p.fit->slope}, {"intercept", p.fit->intercept}, {"r2", p.fit->r2}};
      const auto side = out / (p.name + "_fit.json");
      std::ofstream os(side);
      os << j.dump(2) << "\n";
      files.push_back(side);
    }
  }
  return files;
}

}  // namespace fbo2d
