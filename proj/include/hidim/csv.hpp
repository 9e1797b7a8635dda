// Results table output.
//
// The schema is frozen: header
//   d,n,family,classifier,theta,trials,p_hat,ci_low,ci_high,resamples,wall_ms
// floats with 10 significant digits, rows sorted by (d, classifier, theta)
// with numeric theta indices first, then "max", then "mean". With timings
// disabled wall_ms prints as 0 so repeated runs are byte-identical.
#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hidim/sweep.hpp"

namespace hidim {

inline std::string format_g10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return std::string(buf);
}

inline const char* kSweepCsvHeader =
    "d,n,family,classifier,theta,trials,p_hat,ci_low,ci_high,resamples,"
    "wall_ms";

namespace detail {

/// Sort key placing per-draw rows in index order ahead of the aggregates.
inline std::pair<int, int> theta_rank(const std::string& theta) {
  if (theta == "max") return {1, 0};
  if (theta == "mean") return {2, 0};
  return {0, std::atoi(theta.c_str())};
}

}  // namespace detail

inline std::string to_csv(const SweepResult& result, bool timings = false) {
  std::vector<const SweepRow*> rows;
  rows.reserve(result.rows.size());
  for (const auto& row : result.rows) rows.push_back(&row);
  std::sort(rows.begin(), rows.end(),
            [](const SweepRow* a, const SweepRow* b) {
              if (a->d != b->d) return a->d < b->d;
              if (a->classifier != b->classifier) {
                return a->classifier < b->classifier;
              }
              return detail::theta_rank(a->theta) <
                     detail::theta_rank(b->theta);
            });
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const SweepRow* row : rows) {
    out += std::to_string(row->d);
    out += ',';
    out += std::to_string(row->n);
    out += ',';
    out += row->family;
    out += ',';
    out += row->classifier;
    out += ',';
    out += row->theta;
    out += ',';
    out += std::to_string(row->est.trials);
    out += ',';
    out += format_g10(row->est.p_hat);
    out += ',';
    out += format_g10(row->est.ci_low);
    out += ',';
    out += format_g10(row->est.ci_high);
    out += ',';
    out += std::to_string(row->est.resample_events);
    out += ',';
    out += format_g10(timings ? row->wall_ms : 0.0);
    out += '\n';
  }
  return out;
}

/// Writes content to path; throws std::ios_base::failure when the path
/// cannot be opened or written.
inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot open '" + path + "' for writing");
  }
  out << content;
  out.flush();
  if (!out) throw std::ios_base::failure("short write to '" + path + "'");
}

}  // namespace hidim
