#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tgcm/model.hpp"
#include "tgcm/train.hpp"

namespace tgcm {

// Whole-run configuration. File format: `key = value` lines, `#` comments,
// unknown keys rejected.
struct Config {
  // training
  int epochs = 20;
  int batch_size = 64;
  double lr0 = 0.01;
  double decay = 0.95;
  double momentum = 0.9;
  std::uint64_t seed = 0;
  Mode mode = Mode::full;
  LayerKind layer = LayerKind::gat;
  std::vector<int> widths = {128, 64};

  // text pipeline
  int min_count = 1;
  std::string stopwords_path;  // empty -> built-in list

  // graph construction
  int window_size = 3;
  double ppmi_threshold = 0.0;
  int top_k_per_node = 16;

  // dimensions
  int d_embed = 128;
  int d_fuse = 64;

  // GraphSage
  int sample_size = 10;
  Aggregator aggregator = Aggregator::mean;

  // modalities in declaration order
  std::vector<ModalityDecl> modalities;

  TrainConfig train_config() const {
    return {epochs, batch_size, lr0, decay, momentum, seed};
  }
  GraphConfig graph_config() const {
    return {window_size, ppmi_threshold, top_k_per_node};
  }
};

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);

// Canonical `key = value` rendering; parse(serialize(cfg)) == cfg.
std::string serialize_config(const Config& cfg);

// Enum names used by config and reports.
const char* mode_name(Mode mode);
const char* layer_name(LayerKind kind);
const char* aggregator_name(Aggregator agg);
Mode parse_mode(const std::string& s);
LayerKind parse_layer(const std::string& s);
Aggregator parse_aggregator(const std::string& s);

}  // namespace tgcm
