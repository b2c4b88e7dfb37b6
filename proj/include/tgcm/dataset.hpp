#pragma once

#include <map>
#include <string>
#include <vector>

namespace tgcm {

// Either a file of raw little-endian f32 values or an inline list.
struct ModalitySource {
  bool is_path = false;
  std::string path;
  std::vector<float> inline_values;
};

// One dataset line. Records carry either raw text or an already-encoded id
// sequence (the output of the preprocess command).
struct DatasetRecord {
  std::string id;
  bool has_text = false;
  std::string text;
  bool has_ids = false;
  std::vector<int> ids;
  std::string label;
  std::map<std::string, ModalitySource> modalities;
};

// JSONL, one record per line. Malformed lines raise DataError with the line
// number and record id when available.
std::vector<DatasetRecord> load_dataset(const std::string& path);
std::vector<DatasetRecord> parse_dataset_text(const std::string& text);

std::string serialize_record(const DatasetRecord& record);

// Raw f32 little-endian payload; the length must match exactly.
std::vector<float> load_modality_file(const std::string& path, int expected_dim);
void write_modality_file(const std::string& path, const std::vector<float>& values);

// Distinct labels in sorted order; the class-name -> index mapping.
std::vector<std::string> class_names(const std::vector<DatasetRecord>& records);

}  // namespace tgcm
