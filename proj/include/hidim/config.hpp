// Experiment configuration: flat `key = value` text with [section] headers.
//
// The format is deliberately tiny: three known sections, every key mapping
// to one RunConfig field, unknown keys rejected with the offending line
// number. serialize_config() writes the canonical form; parsing that text
// back yields the same settings.
#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hidim/sweep.hpp"

namespace hidim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything one CLI invocation needs: the sweep plan plus output and
/// execution settings.
struct RunConfig {
  SweepPlan plan;
  std::string csv_path;
  std::string svg_path;  // defaults to csv_path with a .svg extension
  bool plot = false;
  bool timings = false;  // false pins wall_ms to 0 for reproducible bytes
  int threads = 1;

  std::string effective_svg_path() const {
    if (!svg_path.empty()) return svg_path;
    const auto dot = csv_path.find_last_of('.');
    return (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) +
           ".svg";
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] inline void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

inline long long to_int(const std::string& s, int line) {
  long long v = 0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    fail(line, "expected an integer, got '" + s + "'");
  }
  return v;
}

inline std::uint64_t to_uint64(const std::string& s, int line) {
  std::uint64_t v = 0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    fail(line, "expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

inline double to_double(const std::string& s, int line) {
  if (s.empty()) fail(line, "expected a number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    fail(line, "expected a number, got '" + s + "'");
  }
  return v;
}

inline bool to_bool(const std::string& s, int line) {
  if (s == "true") return true;
  if (s == "false") return false;
  fail(line, "expected true or false, got '" + s + "'");
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline FamilyKind parse_family(const std::string& s, int line) {
  if (s == "sphere") return FamilyKind::Sphere;
  if (s == "sensing_aware") return FamilyKind::SensingAware;
  if (s == "sparse_exp") return FamilyKind::SparseExp;
  if (s == "sparse_poly") return FamilyKind::SparsePoly;
  fail(line, "unknown family '" + s + "'");
}

inline ClassifierKind parse_classifier(const std::string& s, int line) {
  if (s == "bayes_oracle") return ClassifierKind::BayesOracle;
  if (s == "matched_filter") return ClassifierKind::MatchedFilter;
  if (s == "plugin_known") return ClassifierKind::PluginKnown;
  if (s == "plugin_pooled") return ClassifierKind::PluginPooled;
  if (s == "ml_projection") return ClassifierKind::MLProjection;
  if (s == "soft_threshold") return ClassifierKind::SoftThreshold;
  if (s == "coin_flip") return ClassifierKind::CoinFlip;
  fail(line, "unknown classifier '" + s + "'");
}

inline SampleSizeRule parse_n_rule(const std::string& s, int line) {
  const auto space = s.find(' ');
  const std::string head = space == std::string::npos ? s : s.substr(0, space);
  const std::string rest =
      space == std::string::npos ? "" : trim(s.substr(space + 1));
  if (head == "power") return PowerRule{to_double(rest, line)};
  if (head == "fixed") return FixedRule{static_cast<int>(to_int(rest, line))};
  if (head == "explicit") {
    ExplicitRule rule;
    for (const auto& tok : split_list(rest)) {
      rule.ns.push_back(static_cast<int>(to_int(tok, line)));
    }
    return rule;
  }
  fail(line, "n_rule must be 'power g', 'fixed n', or 'explicit n1, n2, ...'");
}

}  // namespace detail

/// Parses configuration text. Throws ConfigError with a line number on any
/// unknown section or key, malformed value, or plan-invariant violation.
inline RunConfig parse_config(const std::string& text) {
  using detail::fail;
  RunConfig cfg;
  cfg.plan.classifiers.clear();
  double soft_c = 1.0;
  bool saw_soft_c = false;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "sweep" && section != "output" && section != "run") {
        fail(line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (section.empty()) fail(line_no, "key before any [section] header");
    if (value.empty()) fail(line_no, "empty value for '" + key + "'");

    if (section == "sweep") {
      if (key == "family") {
        cfg.plan.family.kind = detail::parse_family(value, line_no);
      } else if (key == "alpha") {
        cfg.plan.family.alpha = detail::to_double(value, line_no);
      } else if (key == "decay") {
        cfg.plan.family.decay = detail::to_double(value, line_no);
      } else if (key == "cov_gamma") {
        cfg.plan.family.gamma = detail::to_double(value, line_no);
      } else if (key == "cov_beta") {
        cfg.plan.family.beta = detail::to_double(value, line_no);
      } else if (key == "cov_midpoint") {
        cfg.plan.family.midpoint = detail::to_double(value, line_no);
      } else if (key == "d_grid") {
        cfg.plan.d_grid.clear();
        for (const auto& tok : detail::split_list(value)) {
          cfg.plan.d_grid.push_back(
              static_cast<int>(detail::to_int(tok, line_no)));
        }
      } else if (key == "n_rule") {
        cfg.plan.n_rule = detail::parse_n_rule(value, line_no);
      } else if (key == "classifiers") {
        cfg.plan.classifiers.clear();
        for (const auto& tok : detail::split_list(value)) {
          cfg.plan.classifiers.push_back(
              ClassifierSpec{detail::parse_classifier(tok, line_no), 1.0});
        }
      } else if (key == "theta_draws") {
        cfg.plan.theta_draws = static_cast<int>(detail::to_int(value, line_no));
      } else if (key == "replicates") {
        cfg.plan.replicates_per_theta =
            static_cast<int>(detail::to_int(value, line_no));
      } else if (key == "test_points") {
        cfg.plan.test_points = static_cast<int>(detail::to_int(value, line_no));
      } else if (key == "master_seed") {
        cfg.plan.master_seed = detail::to_uint64(value, line_no);
      } else if (key == "soft_c") {
        soft_c = detail::to_double(value, line_no);
        saw_soft_c = true;
      } else {
        fail(line_no, "unknown key '" + key + "' in [sweep]");
      }
    } else if (section == "output") {
      if (key == "csv") {
        cfg.csv_path = value;
      } else if (key == "svg") {
        cfg.svg_path = value;
      } else if (key == "plot") {
        cfg.plot = detail::to_bool(value, line_no);
      } else if (key == "timings") {
        cfg.timings = detail::to_bool(value, line_no);
      } else {
        fail(line_no, "unknown key '" + key + "' in [output]");
      }
    } else {  // [run]
      if (key == "threads") {
        cfg.threads = static_cast<int>(detail::to_int(value, line_no));
        if (cfg.threads < 1) fail(line_no, "threads must be >= 1");
      } else {
        fail(line_no, "unknown key '" + key + "' in [run]");
      }
    }
  }

  if (cfg.plan.classifiers.empty()) {
    cfg.plan.classifiers.push_back(ClassifierSpec{});
  }
  if (saw_soft_c) {
    for (auto& spec : cfg.plan.classifiers) {
      if (spec.kind == ClassifierKind::SoftThreshold) spec.soft_c = soft_c;
    }
  }
  if (cfg.csv_path.empty()) {
    throw ConfigError("config: [output] csv path is required");
  }
  try {
    cfg.plan.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

/// Reads and parses a config file; unreadable files raise ConfigError.
inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

/// Canonical textual form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& cfg) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "[sweep]\n";
  out << "family = " << cfg.plan.family.name() << '\n';
  out << "alpha = " << num(cfg.plan.family.alpha) << '\n';
  out << "decay = " << num(cfg.plan.family.decay) << '\n';
  out << "cov_gamma = " << num(cfg.plan.family.gamma) << '\n';
  out << "cov_beta = " << num(cfg.plan.family.beta) << '\n';
  out << "cov_midpoint = " << num(cfg.plan.family.midpoint) << '\n';
  out << "d_grid = ";
  for (std::size_t i = 0; i < cfg.plan.d_grid.size(); ++i) {
    out << (i ? ", " : "") << cfg.plan.d_grid[i];
  }
  out << '\n';
  out << "n_rule = ";
  if (const auto* p = std::get_if<PowerRule>(&cfg.plan.n_rule)) {
    out << "power " << num(p->gamma);
  } else if (const auto* f = std::get_if<FixedRule>(&cfg.plan.n_rule)) {
    out << "fixed " << f->n;
  } else {
    out << "explicit ";
    const auto& ns = std::get<ExplicitRule>(cfg.plan.n_rule).ns;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      out << (i ? ", " : "") << ns[i];
    }
  }
  out << '\n';
  out << "classifiers = ";
  double soft_c = 1.0;
  for (std::size_t i = 0; i < cfg.plan.classifiers.size(); ++i) {
    out << (i ? ", " : "") << cfg.plan.classifiers[i].name();
    if (cfg.plan.classifiers[i].kind == ClassifierKind::SoftThreshold) {
      soft_c = cfg.plan.classifiers[i].soft_c;
    }
  }
  out << '\n';
  out << "soft_c = " << num(soft_c) << '\n';
  out << "theta_draws = " << cfg.plan.theta_draws << '\n';
  out << "replicates = " << cfg.plan.replicates_per_theta << '\n';
  out << "test_points = " << cfg.plan.test_points << '\n';
  out << "master_seed = " << cfg.plan.master_seed << '\n';
  out << "\n[output]\n";
  out << "csv = " << cfg.csv_path << '\n';
  if (!cfg.svg_path.empty()) out << "svg = " << cfg.svg_path << '\n';
  out << "plot = " << (cfg.plot ? "true" : "false") << '\n';
  out << "timings = " << (cfg.timings ? "true" : "false") << '\n';
  out << "\n[run]\n";
  out << "threads = " << cfg.threads << '\n';
  return out.str();
}

}  // namespace hidim
