#include "tgcm/dataset.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tgcm/error.hpp"

namespace tgcm {

namespace {

using nlohmann::json;

DatasetRecord parse_record(const json& j, int line_no) {
  auto fail = [&](const std::string& msg) {
    std::string id = j.contains("id") && j["id"].is_string()
                         ? " (record " + j["id"].get<std::string>() + ")"
                         : "";
    throw Error(ErrorCode::DataError,
                "line " + std::to_string(line_no) + id + ": " + msg);
  };

  if (!j.is_object()) fail("record is not an object");
  DatasetRecord r;
  if (!j.contains("id") || !j["id"].is_string()) fail("missing string field 'id'");
  r.id = j["id"].get<std::string>();
  if (!j.contains("label") || !j["label"].is_string())
    fail("missing string field 'label'");
  r.label = j["label"].get<std::string>();

  if (j.contains("text")) {
    if (!j["text"].is_string()) fail("'text' must be a string");
    r.has_text = true;
    r.text = j["text"].get<std::string>();
  }
  if (j.contains("ids")) {
    if (!j["ids"].is_array()) fail("'ids' must be an array of token ids");
    r.has_ids = true;
    for (const auto& v : j["ids"]) {
      if (!v.is_number_integer()) fail("'ids' must be an array of token ids");
      r.ids.push_back(v.get<int>());
    }
  }
  if (!r.has_text && !r.has_ids) fail("record needs 'text' or 'ids'");

  if (j.contains("modalities")) {
    if (!j["modalities"].is_object()) fail("'modalities' must be an object");
    for (const auto& [name, value] : j["modalities"].items()) {
      ModalitySource source;
      if (value.is_string()) {
        source.is_path = true;
        source.path = value.get<std::string>();
      } else if (value.is_array()) {
        for (const auto& x : value) {
          if (!x.is_number()) fail("modality '" + name + "' has a non-numeric entry");
          source.inline_values.push_back(x.get<float>());
        }
      } else {
        fail("modality '" + name + "' must be a file path or a numeric list");
      }
      r.modalities.emplace(name, std::move(source));
    }
  }

  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "id" && key != "text" && key != "ids" && key != "label" &&
        key != "modalities")
      fail("unknown field '" + key + "'");
  }
  return r;
}

}  // namespace

std::vector<DatasetRecord> parse_dataset_text(const std::string& text) {
  std::vector<DatasetRecord> records;
  std::set<std::string> seen_ids;
  std::stringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    std::string trimmed = line;
    trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
    if (trimmed.empty()) continue;
    json j;
    try {
      j = json::parse(trimmed);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::DataError,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    DatasetRecord r = parse_record(j, line_no);
    if (!seen_ids.insert(r.id).second)
      throw Error(ErrorCode::DataError, "line " + std::to_string(line_no) +
                                            ": duplicate record id '" + r.id + "'");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<DatasetRecord> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open dataset " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset_text(buffer.str());
}

std::string serialize_record(const DatasetRecord& record) {
  nlohmann::json j;
  j["id"] = record.id;
  if (record.has_text) j["text"] = record.text;
  if (record.has_ids) j["ids"] = record.ids;
  j["label"] = record.label;
  if (!record.modalities.empty()) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [name, source] : record.modalities) {
      if (source.is_path)
        m[name] = source.path;
      else
        m[name] = source.inline_values;
    }
    j["modalities"] = m;
  }
  return j.dump();
}

std::vector<float> load_modality_file(const std::string& path, int expected_dim) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error(ErrorCode::IoError, "cannot open modality file " + path);
  std::streamsize bytes = in.tellg();
  if (bytes != static_cast<std::streamsize>(expected_dim) * 4)
    throw Error(ErrorCode::DataError,
                path + " holds " + std::to_string(bytes / 4) + " values, expected " +
                    std::to_string(expected_dim));
  in.seekg(0);
  std::vector<float> values(static_cast<std::size_t>(expected_dim));
  in.read(reinterpret_cast<char*>(values.data()), bytes);
  if (!in) throw Error(ErrorCode::IoError, "short read on " + path);
  return values;
}

void write_modality_file(const std::string& path, const std::vector<float>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * 4));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

std::vector<std::string> class_names(const std::vector<DatasetRecord>& records) {
  std::set<std::string> names;
  for (const auto& r : records) names.insert(r.label);
  return {names.begin(), names.end()};
}

}  // namespace tgcm
