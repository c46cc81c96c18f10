#include "zubov/config.hpp"

#include "zubov/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace zubov {

namespace {

const std::vector<std::string> kKeys = {
    "system",       "omega_lower",   "omega_upper",    "alpha",
    "lambda_r",     "lambda_d",      "m_b",            "m_r",
    "m_d",          "iterations",    "epochs",         "learning_rate",
    "seed",         "width",         "depth",          "k_steps",
    "dt",           "r_max",         "v_cap",          "resample",
    "inner_tol",    "minibatch",     "threads",        "out_dir",
    "grid_resolution", "contour_level", "slice_axis0", "slice_axis1",
    "slice_pins",   "fdm_h",         "fdm_tol",        "fdm_max_sweeps",
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + v + "'", line);
  }
}

long long parse_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + v + "'", line);
  }
}

std::uint64_t parse_u64(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const unsigned long long i = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ParseError("expected an unsigned integer, got '" + v + "'", line);
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("expected true/false, got '" + v + "'", line);
}

std::vector<double> parse_vector(const std::string& v, int line) {
  std::istringstream iss(v);
  std::vector<double> out;
  std::string tok;
  while (iss >> tok) out.push_back(parse_double(tok, line));
  if (out.empty()) throw ParseError("expected at least one number", line);
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& config_key_names() { return kKeys; }

RunConfig default_config(const std::string& system_name) {
  const PerturbedSystem system = make_system(system_name);
  RunConfig cfg;
  cfg.train.system = system_name;
  cfg.train.omega = system.default_domain;
  if (system_name.rfind("product", 0) == 0) {
    cfg.train.m_b = 50000;
    cfg.train.m_r = 50000;
    cfg.train.m_d = 30000;
  } else {
    cfg.train.m_b = 20000;
    cfg.train.m_r = 20000;
    cfg.train.m_d = 2000;
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::vector<std::pair<std::string, Entry>> entries;
  std::istringstream iss(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(iss, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value'", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", line_no);
    bool known = false;
    for (const auto& k : kKeys) {
      if (k == key) {
        known = true;
        break;
      }
    }
    if (!known) throw ParseError("unknown key '" + key + "'", line_no);
    entries.emplace_back(key, Entry{value, line_no});
  }

  std::string system_name = "vdp";
  for (const auto& [key, entry] : entries) {
    if (key == "system") {
      system_name = entry.value;
      try {
        make_system(system_name);
      } catch (const ArgumentError& err) {
        throw ParseError(err.what(), entry.line);
      }
    }
  }

  RunConfig cfg = default_config(system_name);
  std::vector<double> omega_lower, omega_upper;
  int omega_lower_line = 0, omega_upper_line = 0;

  for (const auto& [key, entry] : entries) {
    const std::string& v = entry.value;
    const int ln = entry.line;
    auto positive = [&](double d, const char* what) {
      if (!(d > 0.0)) throw ParseError(std::string(what) + " must be positive", ln);
      return d;
    };
    auto nonneg = [&](double d, const char* what) {
      if (d < 0.0) throw ParseError(std::string(what) + " must be nonnegative", ln);
      return d;
    };
    auto at_least = [&](long long i, long long floor, const char* what) {
      if (i < floor) {
        throw ParseError(std::string(what) + " must be >= " + std::to_string(floor), ln);
      }
      return static_cast<int>(i);
    };

    if (key == "system") {
      // handled in the first pass
    } else if (key == "omega_lower") {
      omega_lower = parse_vector(v, ln);
      omega_lower_line = ln;
    } else if (key == "omega_upper") {
      omega_upper = parse_vector(v, ln);
      omega_upper_line = ln;
    } else if (key == "alpha") {
      cfg.train.alpha = positive(parse_double(v, ln), "alpha");
    } else if (key == "lambda_r") {
      cfg.train.lambda_r = nonneg(parse_double(v, ln), "lambda_r");
    } else if (key == "lambda_d") {
      cfg.train.lambda_d = nonneg(parse_double(v, ln), "lambda_d");
    } else if (key == "m_b") {
      cfg.train.m_b = at_least(parse_int(v, ln), 1, "m_b");
    } else if (key == "m_r") {
      cfg.train.m_r = at_least(parse_int(v, ln), 1, "m_r");
    } else if (key == "m_d") {
      cfg.train.m_d = at_least(parse_int(v, ln), 1, "m_d");
    } else if (key == "iterations") {
      cfg.train.iterations = at_least(parse_int(v, ln), 1, "iterations");
    } else if (key == "epochs") {
      cfg.train.epochs = at_least(parse_int(v, ln), 0, "epochs");
    } else if (key == "learning_rate") {
      cfg.train.learning_rate = positive(parse_double(v, ln), "learning_rate");
    } else if (key == "seed") {
      cfg.train.seed = parse_u64(v, ln);
    } else if (key == "width") {
      cfg.train.width = at_least(parse_int(v, ln), 1, "width");
    } else if (key == "depth") {
      cfg.train.depth = at_least(parse_int(v, ln), 2, "depth");
    } else if (key == "k_steps") {
      cfg.train.rollout.k_steps = at_least(parse_int(v, ln), 1, "k_steps");
    } else if (key == "dt") {
      cfg.train.rollout.dt = positive(parse_double(v, ln), "dt");
    } else if (key == "r_max") {
      cfg.train.rollout.r_max = nonneg(parse_double(v, ln), "r_max");
    } else if (key == "v_cap") {
      cfg.train.rollout.v_cap = nonneg(parse_double(v, ln), "v_cap");
    } else if (key == "resample") {
      cfg.train.resample = parse_bool(v, ln);
    } else if (key == "inner_tol") {
      cfg.train.inner_tol = nonneg(parse_double(v, ln), "inner_tol");
    } else if (key == "minibatch") {
      if (v == "full") {
        cfg.train.minibatch = 0;
      } else {
        cfg.train.minibatch = at_least(parse_int(v, ln), 1, "minibatch");
      }
    } else if (key == "threads") {
      cfg.train.threads = at_least(parse_int(v, ln), 0, "threads");
    } else if (key == "out_dir") {
      cfg.train.out_dir = v;
    } else if (key == "grid_resolution") {
      cfg.grid_resolution = at_least(parse_int(v, ln), 2, "grid_resolution");
    } else if (key == "contour_level") {
      cfg.contour_level = parse_double(v, ln);
      if (!(cfg.contour_level > 0.0 && cfg.contour_level < 1.0)) {
        throw ParseError("contour_level must lie in (0, 1)", ln);
      }
    } else if (key == "slice_axis0") {
      cfg.slice_axis0 = at_least(parse_int(v, ln), 0, "slice_axis0");
    } else if (key == "slice_axis1") {
      cfg.slice_axis1 = at_least(parse_int(v, ln), 0, "slice_axis1");
    } else if (key == "slice_pins") {
      cfg.slice_pins.clear();
      std::istringstream piss(v);
      std::string tok;
      while (piss >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) {
          throw ParseError("slice pin must look like axis:value", ln);
        }
        const int axis =
            static_cast<int>(parse_int(tok.substr(0, colon), ln));
        const double value = parse_double(tok.substr(colon + 1), ln);
        if (axis < 0) throw ParseError("pin axis must be >= 0", ln);
        cfg.slice_pins.emplace_back(axis, value);
      }
    } else if (key == "fdm_h") {
      cfg.fdm_h = nonneg(parse_double(v, ln), "fdm_h");
    } else if (key == "fdm_tol") {
      cfg.fdm_tol = positive(parse_double(v, ln), "fdm_tol");
    } else if (key == "fdm_max_sweeps") {
      cfg.fdm_max_sweeps = at_least(parse_int(v, ln), 1, "fdm_max_sweeps");
    }
  }

  if (!omega_lower.empty() || !omega_upper.empty()) {
    if (omega_lower.size() != omega_upper.size()) {
      throw ParseError("omega_lower and omega_upper must have the same length",
                       std::max(omega_lower_line, omega_upper_line));
    }
    Domain omega;
    omega.lower = Eigen::Map<const Vec>(omega_lower.data(), omega_lower.size());
    omega.upper = Eigen::Map<const Vec>(omega_upper.data(), omega_upper.size());
    try {
      omega.validate();
    } catch (const ArgumentError& err) {
      throw ParseError(err.what(), std::max(omega_lower_line, omega_upper_line));
    }
    cfg.train.omega = omega;
  }

  try {
    cfg.train.validate();
  } catch (const ArgumentError& err) {
    throw ParseError(err.what());
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config: " + path);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse_config_text(buffer.str());
}

std::string run_metadata_text(const RunConfig& config) {
  const TrainConfig& t = config.train;
  const PerturbedSystem system = make_system(t.system);
  const Domain omega = t.omega ? *t.omega : system.default_domain;

  std::ostringstream os;
  os << "# resolved run configuration\n";
  os << "system = " << t.system << '\n';
  os << "omega_lower =";
  for (int i = 0; i < omega.dim(); ++i) os << ' ' << fmt(omega.lower[i]);
  os << '\n';
  os << "omega_upper =";
  for (int i = 0; i < omega.dim(); ++i) os << ' ' << fmt(omega.upper[i]);
  os << '\n';
  os << "alpha = " << fmt(t.alpha) << '\n';
  os << "lambda_r = " << fmt(t.lambda_r) << '\n';
  os << "lambda_d = " << fmt(t.lambda_d) << '\n';
  os << "m_b = " << t.m_b << '\n';
  os << "m_r = " << t.m_r << '\n';
  os << "m_d = " << t.m_d << '\n';
  os << "iterations = " << t.iterations << '\n';
  os << "epochs = " << t.epochs << '\n';
  os << "learning_rate = " << fmt(t.learning_rate) << '\n';
  os << "seed = " << t.seed << '\n';
  os << "width = " << t.width << '\n';
  os << "depth = " << t.depth << '\n';
  os << "k_steps = " << t.rollout.k_steps << '\n';
  os << "dt = " << fmt(t.rollout.dt) << '\n';
  os << "r_max = " << fmt(t.rollout.resolved_r_max(omega)) << '\n';
  os << "v_cap = " << fmt(t.rollout.resolved_v_cap(t.alpha)) << '\n';
  os << "resample = " << (t.resample ? "true" : "false") << '\n';
  os << "inner_tol = " << fmt(t.inner_tol) << '\n';
  if (t.minibatch == 0) {
    os << "minibatch = full\n";
  } else {
    os << "minibatch = " << t.minibatch << '\n';
  }
  os << "threads = " << t.threads << '\n';
  os << "out_dir = " << t.out_dir << '\n';
  os << "grid_resolution = " << config.grid_resolution << '\n';
  os << "contour_level = " << fmt(config.contour_level) << '\n';
  os << "slice_axis0 = " << config.slice_axis0 << '\n';
  os << "slice_axis1 = " << config.slice_axis1 << '\n';
  os << "slice_pins =";
  for (const auto& [axis, value] : config.slice_pins) {
    os << ' ' << axis << ':' << fmt(value);
  }
  os << '\n';
  os << "fdm_h = " << fmt(config.fdm_h) << '\n';
  os << "fdm_tol = " << fmt(config.fdm_tol) << '\n';
  os << "fdm_max_sweeps = " << config.fdm_max_sweeps << '\n';
  return os.str();
}

void write_run_metadata(const RunConfig& config, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write run metadata: " + path);
  os << run_metadata_text(config);
  if (!os) throw IoError("failed while writing run metadata: " + path);
}

}  // namespace zubov
