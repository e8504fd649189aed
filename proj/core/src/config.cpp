#include "hdmrge/error.hpp"
#include "hdmrge/experiment.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace hdmrge {

namespace fs = std::filesystem;

std::string_view to_string(Method method) {
  switch (method) {
    case Method::hdmr: return "hdmr";
    case Method::lpp: return "lpp";
    case Method::direct: return "direct";
  }
  return "hdmr";
}

Method parse_method(std::string_view text) {
  if (text == "hdmr") return Method::hdmr;
  if (text == "lpp") return Method::lpp;
  if (text == "direct") return Method::direct;
  throw ConfigError("unknown method '" + std::string(text) + "' (expected hdmr, lpp or direct)");
}

void ExperimentConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must be in (0, 1)");
  }
  if (n_repeats < 1) throw ConfigError("n_repeats must be >= 1");
  if (d_max < 1) throw ConfigError("d_max must be >= 1");
  if (cv_folds < 2) throw ConfigError("cv_folds must be >= 2");
  if (grid.orders.empty() || grid.betas.empty() || grid.ks.empty()) {
    throw ConfigError("p, beta and k lists must not be empty");
  }
  for (const int p : grid.orders) {
    if (p < 1) throw ConfigError("p values must be >= 1");
  }
  for (const double b : grid.betas) {
    if (!(b >= 0.0)) throw ConfigError("beta values must be >= 0");
  }
  for (const int k : grid.ks) {
    if (k < 1) throw ConfigError("k values must be >= 1");
  }
  if (!(margin >= 0.0)) throw ConfigError("margin must be >= 0");
  if (!seeds.empty() && seeds.size() != static_cast<std::size_t>(n_repeats)) {
    throw ConfigError("seeds lists " + std::to_string(seeds.size()) + " values but n_repeats is " +
                      std::to_string(n_repeats));
  }
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seeds must be distinct");
  }
}

std::vector<std::uint64_t> ExperimentConfig::repeat_seeds() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n_repeats; ++i) out.push_back(static_cast<std::uint64_t>(i));
  return out;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [end, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || end != last) {
    throw ConfigError("'" + key + "': cannot parse '" + text + "' as a number");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, trim(item)));
  if (out.empty()) throw ConfigError("'" + key + "' needs at least one value");
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + text + "'");
}

fs::path resolve(const fs::path& base, const std::string& value) {
  const fs::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const fs::path& base_dir) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  bool repeats_set = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }

    if (key == "dataset") cfg.dataset = resolve(base_dir, value);
    else if (key == "ground_truth") cfg.ground_truth = resolve(base_dir, value);
    else if (key == "label_column") cfg.label_column = parse_number<int>(key, value);
    else if (key == "csv_header") cfg.csv_header = parse_bool(key, value);
    else if (key == "method") cfg.method = parse_method(value);
    else if (key == "p") cfg.grid.orders = parse_list<int>(key, value);
    else if (key == "beta") cfg.grid.betas = parse_list<double>(key, value);
    else if (key == "k") cfg.grid.ks = parse_list<int>(key, value);
    else if (key == "margin") cfg.margin = parse_number<double>(key, value);
    else if (key == "cv_folds") cfg.cv_folds = parse_number<int>(key, value);
    else if (key == "d_max") cfg.d_max = parse_number<int>(key, value);
    else if (key == "train_fraction") cfg.train_fraction = parse_number<double>(key, value);
    else if (key == "n_repeats") {
      cfg.n_repeats = parse_number<int>(key, value);
      repeats_set = true;
    } else if (key == "seeds") cfg.seeds = parse_list<std::uint64_t>(key, value);
    else if (key == "snr_list") cfg.snr_list = value.empty() ? std::vector<double>{} : parse_list<double>(key, value);
    else if (key == "export_labels") cfg.export_labels = parse_bool(key, value);
    else if (key == "output_dir") cfg.output_dir = resolve(base_dir, value);
    else throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  if (!cfg.seeds.empty() && !repeats_set) cfg.n_repeats = static_cast<int>(cfg.seeds.size());
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in, path.parent_path());
}

}  // namespace hdmrge
