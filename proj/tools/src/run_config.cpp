#include "aml/cli/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aml/core/error.hpp"

namespace aml::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view want) {
  throw ConfigError("config key '" + std::string(key) + "': cannot use '" + std::string(value) +
                    "' (expected " + std::string(want) + ")");
}

template <typename T>
T parse_int(std::string_view key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(key, v, "an integer");
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  std::string s(v);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) bad(key, v, "a number");
  return out;
}

bool parse_switch(std::string_view key, std::string_view v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  bad(key, v, "on|off");
}

std::vector<int> parse_list(std::string_view key, std::string_view v) {
  std::vector<int> out;
  if (v.empty()) return out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto piece = v.substr(start, comma == std::string_view::npos ? v.size() - start : comma - start);
    out.push_back(parse_int<int>(key, piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string on_off(bool b) { return b ? "on" : "off"; }

std::string real_text(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "name",      "data",       "out",        "seed",      "variant",   "kt",
      "delta",     "pe",         "ho",         "strategy",  "batch_size", "neg_k",
      "epochs",    "lr",         "lambda",     "layers",    "dim",       "fanout",
      "eval_every", "patience",  "metric",     "norm",      "self_loops", "batch_norm",
      "activation", "predictor"};
  return keys;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  auto& t = train;
  auto& m = t.model;
  if (key == "name") {
    if (value.empty()) bad(key, value, "a non-empty name");
    name = value;
  } else if (key == "data") {
    data = value;
  } else if (key == "out") {
    out = value;
  } else if (key == "seed") {
    t.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "variant") {
    m.variant = model::parse_variant(value);
  } else if (key == "kt") {
    m.toggles.knowledge_transfer = parse_switch(key, value);
  } else if (key == "delta") {
    m.toggles.residual_delta = parse_switch(key, value);
  } else if (key == "pe") {
    m.toggles.pre_encode = parse_switch(key, value);
  } else if (key == "ho") {
    m.toggles.homophily = parse_switch(key, value);
  } else if (key == "strategy") {
    t.sampler.strategy = sampling::parse_strategy(value);
  } else if (key == "batch_size") {
    t.sampler.batch_size = parse_int<std::int64_t>(key, value);
  } else if (key == "neg_k") {
    t.sampler.negatives_per_positive = parse_int<int>(key, value);
  } else if (key == "epochs") {
    t.epochs = parse_int<int>(key, value);
  } else if (key == "lr") {
    t.lr = parse_real(key, value);
  } else if (key == "lambda") {
    t.lambda = parse_real(key, value);
  } else if (key == "layers") {
    m.layers = parse_int<int>(key, value);
  } else if (key == "dim") {
    m.hidden = parse_int<int>(key, value);
  } else if (key == "fanout") {
    m.fanout = parse_list(key, value);
  } else if (key == "eval_every") {
    t.eval_every = parse_int<int>(key, value);
  } else if (key == "patience") {
    t.patience = parse_int<int>(key, value);
  } else if (key == "metric") {
    t.metric = eval::parse_metric(value);
  } else if (key == "norm") {
    if (value == "row") m.norm = graph::NormMode::Row;
    else if (value == "column") m.norm = graph::NormMode::Column;
    else if (value == "symmetric") m.norm = graph::NormMode::Symmetric;
    else bad(key, value, "row|column|symmetric");
  } else if (key == "self_loops") {
    m.self_loops = parse_switch(key, value);
  } else if (key == "batch_norm") {
    m.batch_norm = parse_switch(key, value);
  } else if (key == "activation") {
    if (value == "relu") m.activation = nn::Activation::Relu;
    else if (value == "identity") m.activation = nn::Activation::Identity;
    else bad(key, value, "relu|identity");
  } else if (key == "predictor") {
    if (value == "mlp") m.predictor = model::PredictorKind::Mlp;
    else if (value == "sum") m.predictor = model::PredictorKind::Sum;
    else bad(key, value, "mlp|sum");
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

std::string RunConfig::to_text() const {
  const auto& t = train;
  const auto& m = t.model;
  std::string fan;
  for (std::size_t i = 0; i < m.fanout.size(); ++i) {
    if (i) fan += ",";
    fan += std::to_string(m.fanout[i]);
  }
  const char* norm = m.norm == graph::NormMode::Row      ? "row"
                     : m.norm == graph::NormMode::Column ? "column"
                                                         : "symmetric";
  std::ostringstream o;
  o << "name=" << name << "\n"
    << "data=" << data << "\n"
    << "out=" << out << "\n"
    << "seed=" << t.seed << "\n"
    << "variant=" << model::to_string(m.variant) << "\n"
    << "kt=" << on_off(m.toggles.knowledge_transfer) << "\n"
    << "delta=" << on_off(m.toggles.residual_delta) << "\n"
    << "pe=" << on_off(m.toggles.pre_encode) << "\n"
    << "ho=" << on_off(m.toggles.homophily) << "\n"
    << "strategy=" << sampling::to_string(t.sampler.strategy) << "\n"
    << "batch_size=" << t.sampler.batch_size << "\n"
    << "neg_k=" << t.sampler.negatives_per_positive << "\n"
    << "epochs=" << t.epochs << "\n"
    << "lr=" << real_text(t.lr) << "\n"
    << "lambda=" << real_text(t.lambda) << "\n"
    << "layers=" << m.layers << "\n"
    << "dim=" << m.hidden << "\n"
    << "fanout=" << fan << "\n"
    << "eval_every=" << t.eval_every << "\n"
    << "patience=" << t.patience << "\n"
    << "metric=" << t.metric.name() << "\n"
    << "norm=" << norm << "\n"
    << "self_loops=" << on_off(m.self_loops) << "\n"
    << "batch_norm=" << on_off(m.batch_norm) << "\n"
    << "activation=" << (m.activation == nn::Activation::Relu ? "relu" : "identity") << "\n"
    << "predictor=" << (m.predictor == model::PredictorKind::Mlp ? "mlp" : "sum") << "\n";
  return o.str();
}

RunConfig parse_config_text(std::string_view text) {
  RunConfig c;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    std::string line = trim(text.substr(start, nl - start));
    start = nl + 1;
    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key=value, got '" + line + "'", line_no);
    }
    try {
      c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_overrides(RunConfig& config,
                     const std::vector<std::pair<std::string, std::string>>& overrides) {
  for (const auto& [k, v] : overrides) config.set(k, v);
}

std::filesystem::path unique_run_dir(const std::filesystem::path& out, const std::string& name) {
  std::filesystem::create_directories(out);
  for (int i = 0;; ++i) {
    std::filesystem::path p = out / (i == 0 ? name : name + "-" + std::to_string(i));
    if (std::filesystem::create_directory(p)) return p;
  }
}

}  // namespace aml::cli
