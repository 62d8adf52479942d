#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace extrap {

/// One result row: a method evaluated under one setting of a scenario.
struct ReportRow {
  std::string scenario;
  std::string method;
  std::string setting;  // degree, SNR level, distance or frame label
  double xi_rmse = 0.0;
  double coeff_rmse = 0.0;
  double omega_rmse = 0.0;
  double kappa = 0.0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  nlohmann::json meta;  // config echo, timings, per-scenario notes
};

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Fixed column order. Timings are run metadata; the wall_time_s column is
/// zero unless the scenario opts into CSV timings, which keeps rerun output
/// byte-identical. Measured times always land in the sidecar.
inline std::string report_to_csv(const ExperimentReport& report, bool csv_timings = false) {
  std::string out =
      "scenario,method,degree_or_setting,xi_rmse,coeff_rmse,omega_rmse,kappa,seed,wall_time_s\n";
  for (const ReportRow& r : report.rows) {
    out += r.scenario + "," + r.method + "," + r.setting + ",";
    out += format_g17(r.xi_rmse) + ",";
    out += format_g17(r.coeff_rmse) + ",";
    out += format_g17(r.omega_rmse) + ",";
    out += format_g17(r.kappa) + ",";
    out += std::to_string(r.seed) + ",";
    out += format_g17(csv_timings ? r.wall_time_s : 0.0) + "\n";
  }
  return out;
}

inline void emit_report(const ExperimentReport& report, const std::string& csv_path,
                        const std::string& meta_path, bool csv_timings = false) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write report: " + csv_path);
  csv << report_to_csv(report, csv_timings);
  std::ofstream meta(meta_path);
  if (!meta) throw std::runtime_error("cannot write report metadata: " + meta_path);
  meta << report.meta.dump(1) << "\n";
}

}  // namespace extrap
