#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dfo/error.hpp"
#include "dfo/harness.hpp"

namespace dfo {

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class FieldError {
 public:
  FieldError(std::string_view origin, const Entry& e) : origin_(origin), entry_(e) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("parse-error", std::string(origin_) + ":" + std::to_string(entry_.line) +
                                   ": field '" + entry_.section + "." + entry_.key + "': " + what);
  }

  long integer() const {
    long v = 0;
    const auto& s = entry_.value;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("expected an integer, got '" + s + "'");
    return v;
  }

  double real() const {
    double v = 0.0;
    const auto& s = entry_.value;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail("expected a real number, got '" + s + "'");
    }
    return v;
  }

  bool boolean() const {
    const auto& s = entry_.value;
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    fail("expected true or false, got '" + s + "'");
  }

  template <class T>
  std::vector<T> list() const {
    std::vector<T> out;
    std::stringstream ss(entry_.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      Entry sub = entry_;
      sub.value = trim(item);
      const FieldError f(origin_, sub);
      out.push_back(static_cast<T>(f.integer()));
    }
    if (out.empty()) fail("expected a comma-separated list");
    return out;
  }

 private:
  std::string_view origin_;
  const Entry& entry_;
};

OutlierPattern parse_pattern(const FieldError& f, const std::string& v) {
  if (v == "every-agent") return OutlierPattern::kEveryAgent;
  if (v == "every-second-agent") return OutlierPattern::kEverySecondAgent;
  f.fail("expected every-agent or every-second-agent");
}

EngineKind parse_engine(const FieldError& f, const std::string& v) {
  if (v == "dfgd") return EngineKind::kDfgd;
  if (v == "dfmd") return EngineKind::kDfmd;
  if (v == "ms-dfmd") return EngineKind::kMsDfmd;
  f.fail("expected dfgd, dfmd or ms-dfmd");
}

OracleKind parse_oracle(const FieldError& f, const std::string& v) {
  if (v == "auto") return OracleKind::kAuto;
  if (v == "ls") return OracleKind::kLeastSquares;
  if (v == "gd") return OracleKind::kGradientDescent;
  if (v == "brute-force") return OracleKind::kBruteForce;
  f.fail("expected auto, ls, gd or brute-force");
}

void apply(ExperimentConfig& c, const Entry& e, std::string_view origin) {
  const FieldError f(origin, e);
  const std::string id = e.section + "." + e.key;
  const auto& v = e.value;
  auto positive = [&](long x) {
    if (x < 1) f.fail("must be at least 1");
    return static_cast<int>(x);
  };
  try {
    if (id == "experiment.preset") return;  // applied first
    if (id == "experiment.seed") {
      const long s = f.integer();
      if (s < 0) f.fail("must be nonnegative");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (id == "experiment.tgrid") {
      c.tgrid = f.list<long>();
      for (long t : c.tgrid) {
        if (t < 1) f.fail("every T must be at least 1");
      }
    } else if (id == "experiment.sweep") {
      if (v != "none" && v != "m" && v != "d") f.fail("expected none, m or d");
      c.sweep = v == "none" ? "" : v;
    } else if (id == "experiment.sweep_values") {
      c.sweep_values = f.list<int>();
    } else if (id == "data.m") {
      c.m = positive(f.integer());
    } else if (id == "data.n") {
      c.n = positive(f.integer());
    } else if (id == "data.d") {
      c.d = positive(f.integer());
    } else if (id == "data.bandwidth") {
      c.bandwidth = f.real();
      if (!(c.bandwidth > 0.0)) f.fail("must be positive");
    } else if (id == "data.outliers") {
      c.outliers = f.boolean();
    } else if (id == "data.outlier_shift") {
      c.outlier_shift = f.real();
    } else if (id == "data.outlier_pattern") {
      c.outlier_pattern = parse_pattern(f, v);
    } else if (id == "objective.loss") {
      c.loss = LossSpec(parse_loss_kind(v), c.loss.sigma);
    } else if (id == "objective.sigma") {
      c.loss = LossSpec(c.loss.kind, f.real());
    } else if (id == "objective.lambda") {
      c.lambda = f.real();
      if (c.lambda < 0.0) f.fail("must be nonnegative");
    } else if (id == "objective.scale") {
      if (v == "auto") {
        c.scale.reset();
      } else {
        c.scale = f.real();
        if (!(*c.scale > 0.0)) f.fail("must be positive");
      }
    } else if (id == "step.rule") {
      c.rule = parse_step_rule(v);
    } else if (id == "step.eta") {
      c.eta = f.real();
    } else if (id == "step.L") {
      if (v == "auto") c.smoothness.reset();
      else c.smoothness = f.real();
    } else if (id == "step.mu") {
      if (v == "auto") c.pl_modulus.reset();
      else c.pl_modulus = f.real();
    } else if (id == "network.kind") {
      if (v != "ring" && v != "matching-alternation" && v != "random-cycle" && v != "file") {
        f.fail("expected ring, matching-alternation, random-cycle or file");
      }
      c.network.kind = v;
    } else if (id == "network.window" || id == "network.B") {
      c.network.window = positive(f.integer());
    } else if (id == "network.zeta") {
      if (v == "auto") c.network.zeta.reset();
      else c.network.zeta = f.real();
    } else if (id == "network.file") {
      c.network.file = v;
    } else if (id == "network.seed") {
      c.network.seed = static_cast<std::uint64_t>(f.integer());
    } else if (id == "engine.kind") {
      c.engine = parse_engine(f, v);
    } else if (id == "engine.radius") {
      c.radius = f.real();
      if (c.radius < 0.0) f.fail("must be nonnegative");
    } else if (id == "oracle.method") {
      c.oracle = parse_oracle(f, v);
    } else if (id == "oracle.restarts") {
      const long r = f.integer();
      if (r < 0) f.fail("must be nonnegative");
      c.restarts = static_cast<int>(r);
    } else if (id == "oracle.iterations") {
      c.oracle_iterations = positive(f.integer());
    } else if (id == "oracle.resolution") {
      c.simplex_resolution = positive(f.integer());
    } else {
      f.fail("unknown field");
    }
  } catch (const Error& err) {
    if (err.code() == "parse-error") throw;
    f.fail(err.what());
  }
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

std::string_view to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::kDfgd: return "dfgd";
    case EngineKind::kDfmd: return "dfmd";
    case EngineKind::kMsDfmd: return "ms-dfmd";
  }
  return "?";
}

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::kAuto: return "auto";
    case OracleKind::kLeastSquares: return "ls";
    case OracleKind::kGradientDescent: return "gd";
    case OracleKind::kBruteForce: return "brute-force";
  }
  return "?";
}

std::vector<std::string> preset_names() {
  return {"fig1-ls", "fig2-agents", "fig4-cauchy", "fig6-dims", "msdfmd-demo", "custom"};
}

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig c;  // defaults are the fig1-ls values
  c.preset = std::string(name);
  if (name == "fig1-ls" || name == "custom") return c;
  if (name == "fig2-agents") {
    c.sweep = "m";
    c.sweep_values = {30, 40, 50};
    return c;
  }
  if (name == "fig4-cauchy" || name == "fig6-dims") {
    c.loss = LossSpec(LossKind::kCauchy, 1.0);
    c.outliers = true;
    c.outlier_shift = 5.0;
    if (name == "fig6-dims") {
      c.sweep = "d";
      c.sweep_values = {5, 10, 20};
    }
    return c;
  }
  if (name == "msdfmd-demo") {
    c.engine = EngineKind::kMsDfmd;
    c.m = 4;
    c.n = 3;
    c.d = 1;
    c.oracle = OracleKind::kBruteForce;
    c.tgrid = {250, 400, 1000, 4000};
    return c;
  }
  throw Error("unknown-preset", std::string(name));
}

ExperimentConfig parse_config(std::string_view text, std::string_view origin) {
  std::vector<Entry> entries;
  std::string section;
  std::stringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto cut = raw.find_first_of("#;");
    const std::string s = trim(std::string_view(raw).substr(0, cut));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw Error("parse-error", std::string(origin) + ":" + std::to_string(line) + ": unterminated section header");
      }
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw Error("parse-error", std::string(origin) + ":" + std::to_string(line) + ": expected key = value");
    }
    Entry e{section, trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1)), line};
    if (e.section.empty()) {
      throw Error("parse-error", std::string(origin) + ":" + std::to_string(line) + ": field '" + e.key +
                                     "' outside any [section]");
    }
    if (e.value.empty()) FieldError(origin, e).fail("missing value");
    entries.push_back(std::move(e));
  }

  ExperimentConfig config = preset_config("custom");
  for (const auto& e : entries) {
    if (e.section == "experiment" && e.key == "preset") {
      try {
        config = preset_config(e.value);
      } catch (const Error&) {
        FieldError(origin, e).fail("unknown preset '" + e.value + "'");
      }
    }
  }
  for (const auto& e : entries) apply(config, e, origin);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string to_config_text(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[experiment]\n"
    << "preset = " << c.preset << "\n"
    << "seed = " << c.seed << "\n"
    << "tgrid = " << join(c.tgrid) << "\n"
    << "sweep = " << (c.sweep.empty() ? "none" : c.sweep) << "\n";
  if (!c.sweep_values.empty()) o << "sweep_values = " << join(c.sweep_values) << "\n";
  o << "\n[data]\n"
    << "m = " << c.m << "\n"
    << "n = " << c.n << "\n"
    << "d = " << c.d << "\n"
    << "bandwidth = " << format_real(c.bandwidth) << "\n"
    << "outliers = " << (c.outliers ? "true" : "false") << "\n"
    << "outlier_shift = " << format_real(c.outlier_shift) << "\n"
    << "outlier_pattern = "
    << (c.outlier_pattern == OutlierPattern::kEveryAgent ? "every-agent" : "every-second-agent")
    << "\n\n[objective]\n"
    << "loss = " << to_string(c.loss.kind) << "\n"
    << "sigma = " << format_real(c.loss.sigma) << "\n"
    << "lambda = " << format_real(c.lambda) << "\n"
    << "scale = " << (c.scale ? format_real(*c.scale) : "auto") << "\n"
    << "\n[step]\n"
    << "rule = " << to_string(c.rule) << "\n"
    << "eta = " << format_real(c.eta) << "\n"
    << "L = " << (c.smoothness ? format_real(*c.smoothness) : "auto") << "\n"
    << "mu = " << (c.pl_modulus ? format_real(*c.pl_modulus) : "auto") << "\n"
    << "\n[network]\n"
    << "kind = " << c.network.kind << "\n"
    << "window = " << c.network.window << "\n"
    << "zeta = " << (c.network.zeta ? format_real(*c.network.zeta) : "auto") << "\n";
  if (!c.network.file.empty()) o << "file = " << c.network.file << "\n";
  o << "seed = " << c.network.seed << "\n"
    << "\n[engine]\n"
    << "kind = " << to_string(c.engine) << "\n"
    << "radius = " << format_real(c.radius) << "\n"
    << "\n[oracle]\n"
    << "method = " << to_string(c.oracle) << "\n"
    << "restarts = " << c.restarts << "\n"
    << "iterations = " << c.oracle_iterations << "\n"
    << "resolution = " << c.simplex_resolution << "\n";
  return o.str();
}

ExperimentConfig sweep_point(const ExperimentConfig& config, int value) {
  ExperimentConfig c = config;
  if (config.sweep == "m") c.m = value;
  else if (config.sweep == "d") c.d = value;
  else throw Error("bad-sweep", "no sweep parameter");
  c.sweep.clear();
  c.sweep_values.clear();
  return c;
}

}  // namespace dfo
