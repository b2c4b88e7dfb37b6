#pragma once

#include <stdexcept>
#include <string>

namespace tgcm {

enum class ErrorCode {
  ShapeMismatch,
  IndexOutOfRange,
  DuplicateEntry,
  EmptyCorpus,
  EmptyDocument,
  EmptyDataset,
  EmptyGraph,
  EmptyInput,
  EmptyMatrix,
  LabelOutOfRange,
  ClassOutOfRange,
  LengthMismatch,
  NonFiniteLoss,
  IoError,
  BadMagic,
  VersionMismatch,
  CorruptTensor,
  ConfigError,
  DataError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::ClassOutOfRange: return "ClassOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptTensor: return "CorruptTensor";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::DataError: return "DataError";
  }
  return "UnknownError";
}

}  // namespace tgcm
