#include "tgcm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tgcm/error.hpp"

namespace tgcm {

namespace {

std::string trim(const std::string& s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, key + " wants an integer, got '" + value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, key + " wants a number, got '" + value + "'");
  }
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty())
      throw Error(ErrorCode::ConfigError, key + " has an empty list entry");
    out.push_back(static_cast<int>(parse_int(key, part)));
  }
  if (out.empty()) throw Error(ErrorCode::ConfigError, key + " list is empty");
  return out;
}

void validate(const Config& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
  if (cfg.epochs < 1) fail("epochs must be >= 1");
  if (cfg.batch_size < 1) fail("batch_size must be >= 1");
  if (cfg.decay <= 0.0 || cfg.decay > 1.0) fail("decay must be in (0, 1]");
  if (cfg.momentum < 0.0 || cfg.momentum >= 1.0) fail("momentum must be in [0, 1)");
  if (cfg.window_size < 2) fail("window_size must be >= 2");
  if (cfg.ppmi_threshold < 0.0) fail("ppmi_threshold must be >= 0");
  if (cfg.top_k_per_node < 1) fail("top_k_per_node must be >= 1");
  if (cfg.min_count < 1) fail("min_count must be >= 1");
  if (cfg.d_embed < 1) fail("d_embed must be >= 1");
  if (cfg.d_fuse < 1) fail("d_fuse must be >= 1");
  if (cfg.sample_size < 1) fail("sample_size must be >= 1");
  if (cfg.widths.empty()) fail("widths must name at least one layer");
  for (int w : cfg.widths)
    if (w < 1) fail("layer widths must be >= 1");
  for (const auto& m : cfg.modalities)
    if (m.dim < 1) fail("modality " + m.name + " dimension must be >= 1");
}

}  // namespace

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::full: return "full";
    case Mode::gnn_only: return "gnn-only";
    case Mode::mmc_only: return "mmc-only";
  }
  return "?";
}

const char* layer_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::gat: return "gat";
    case LayerKind::gcn: return "gcn";
    case LayerKind::sage: return "sage";
    case LayerKind::nn4g: return "nn4g";
  }
  return "?";
}

const char* aggregator_name(Aggregator agg) {
  return agg == Aggregator::mean ? "mean" : "pooling";
}

Mode parse_mode(const std::string& s) {
  if (s == "full") return Mode::full;
  if (s == "gnn-only") return Mode::gnn_only;
  if (s == "mmc-only") return Mode::mmc_only;
  throw Error(ErrorCode::ConfigError,
              "mode must be full, gnn-only or mmc-only, got '" + s + "'");
}

LayerKind parse_layer(const std::string& s) {
  if (s == "gat") return LayerKind::gat;
  if (s == "gcn") return LayerKind::gcn;
  if (s == "sage") return LayerKind::sage;
  if (s == "nn4g") return LayerKind::nn4g;
  throw Error(ErrorCode::ConfigError,
              "layer must be gat, gcn, sage or nn4g, got '" + s + "'");
}

Aggregator parse_aggregator(const std::string& s) {
  if (s == "mean") return Aggregator::mean;
  if (s == "pooling") return Aggregator::pooling;
  throw Error(ErrorCode::ConfigError,
              "aggregator must be mean or pooling, got '" + s + "'");
}

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::stringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigError,
                  "line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw Error(ErrorCode::ConfigError,
                  "line " + std::to_string(line_no) + ": expected key = value");

    if (key == "epochs") cfg.epochs = static_cast<int>(parse_int(key, value));
    else if (key == "batch_size") cfg.batch_size = static_cast<int>(parse_int(key, value));
    else if (key == "lr0") cfg.lr0 = parse_real(key, value);
    else if (key == "decay") cfg.decay = parse_real(key, value);
    else if (key == "momentum") cfg.momentum = parse_real(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "mode") cfg.mode = parse_mode(value);
    else if (key == "layer") cfg.layer = parse_layer(value);
    else if (key == "widths") cfg.widths = parse_int_list(key, value);
    else if (key == "min_count") cfg.min_count = static_cast<int>(parse_int(key, value));
    else if (key == "stopwords") cfg.stopwords_path = value;
    else if (key == "window_size") cfg.window_size = static_cast<int>(parse_int(key, value));
    else if (key == "ppmi_threshold") cfg.ppmi_threshold = parse_real(key, value);
    else if (key == "top_k_per_node") cfg.top_k_per_node = static_cast<int>(parse_int(key, value));
    else if (key == "d_embed") cfg.d_embed = static_cast<int>(parse_int(key, value));
    else if (key == "d_fuse") cfg.d_fuse = static_cast<int>(parse_int(key, value));
    else if (key == "sample_size") cfg.sample_size = static_cast<int>(parse_int(key, value));
    else if (key == "aggregator") cfg.aggregator = parse_aggregator(value);
    else if (key.rfind("modality.", 0) == 0) {
      std::string name = key.substr(9);
      if (name.empty())
        throw Error(ErrorCode::ConfigError,
                    "line " + std::to_string(line_no) + ": modality key without a name");
      for (const auto& m : cfg.modalities)
        if (m.name == name)
          throw Error(ErrorCode::ConfigError, "modality " + name + " declared twice");
      int dim;
      if (value == "default") {
        if (name != "image")
          throw Error(ErrorCode::ConfigError,
                      "only the image modality has a default dimension");
        dim = 2048;
      } else {
        dim = static_cast<int>(parse_int(key, value));
      }
      cfg.modalities.push_back({name, dim});
    } else {
      throw Error(ErrorCode::ConfigError,
                  "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

namespace {

// shortest representation that parses back to the same double
std::string exact(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace

std::string serialize_config(const Config& cfg) {
  std::ostringstream out;
  out << "epochs = " << cfg.epochs << "\n";
  out << "batch_size = " << cfg.batch_size << "\n";
  out << "lr0 = " << exact(cfg.lr0) << "\n";
  out << "decay = " << exact(cfg.decay) << "\n";
  out << "momentum = " << exact(cfg.momentum) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "mode = " << mode_name(cfg.mode) << "\n";
  out << "layer = " << layer_name(cfg.layer) << "\n";
  out << "widths = ";
  for (std::size_t i = 0; i < cfg.widths.size(); ++i)
    out << (i ? "," : "") << cfg.widths[i];
  out << "\n";
  out << "min_count = " << cfg.min_count << "\n";
  if (!cfg.stopwords_path.empty()) out << "stopwords = " << cfg.stopwords_path << "\n";
  out << "window_size = " << cfg.window_size << "\n";
  out << "ppmi_threshold = " << exact(cfg.ppmi_threshold) << "\n";
  out << "top_k_per_node = " << cfg.top_k_per_node << "\n";
  out << "d_embed = " << cfg.d_embed << "\n";
  out << "d_fuse = " << cfg.d_fuse << "\n";
  out << "sample_size = " << cfg.sample_size << "\n";
  out << "aggregator = " << aggregator_name(cfg.aggregator) << "\n";
  for (const auto& m : cfg.modalities)
    out << "modality." << m.name << " = " << m.dim << "\n";
  return out.str();
}

}  // namespace tgcm
