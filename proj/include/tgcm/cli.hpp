#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tgcm/config.hpp"
#include "tgcm/dataset.hpp"
#include "tgcm/model.hpp"
#include "tgcm/textpipe.hpp"

namespace tgcm::cli {

// Exit codes: 0 success, 1 failed check (gradcheck), 2 bad input or config,
// 3 numerical failure. Errors print as "error: <Code>: <message>".

struct PreprocessArgs {
  std::string data;
  std::string config;
  std::string out_dir;
};

struct TrainArgs {
  std::string data;
  std::string config;
  std::string out_model;
  std::string vocab;   // required when data is an encoded corpus
  std::string report;  // default: <out_model>.report.tsv
};

struct EvalArgs {
  std::string data;
  std::string model;
  std::string out;  // default: <model>.eval.tsv
};

struct PredictArgs {
  std::string model;
  std::string text;
  std::vector<std::pair<std::string, std::string>> modalities;  // name, path
};

struct GradcheckArgs {
  std::string config;  // optional
  std::uint64_t seed = 0;
  bool inject_error = false;  // test hook: corrupt one analytic gradient
};

struct AblateArgs {
  std::string data;
  std::string config;
  std::string eval_data;  // optional held-out set; defaults to data
  std::string out;        // default: ablation.tsv
};

int run_preprocess(const PreprocessArgs& args, std::ostream& out, std::ostream& err);
int run_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
int run_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);
int run_predict(const PredictArgs& args, std::ostream& out, std::ostream& err);
int run_gradcheck(const GradcheckArgs& args, std::ostream& out, std::ostream& err);
int run_ablate(const AblateArgs& args, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// Shared plumbing, exposed for the test suites.

struct PreparedCorpus {
  std::vector<DocInput<float>> docs;
  Vocabulary vocab;
  std::vector<std::string> classes;
  StopwordList stopwords;
  int dropped_empty = 0;
  double mean_nodes = 0.0;
  double mean_edges = 0.0;
};

// Preprocess, encode and graph-build a dataset. When `vocab`/`classes` are
// supplied (eval/predict against a trained model) they are reused and eval
// labels must be a subset.
PreparedCorpus prepare_corpus(const std::vector<DatasetRecord>& records,
                              const Config& cfg, const std::string& base_dir,
                              const Vocabulary* vocab,
                              const std::vector<std::string>* classes,
                              const StopwordList* stopwords);

struct TrainedBundle {
  Config cfg;
  Vocabulary vocab;
  std::vector<std::string> classes;
  StopwordList stopwords;
  Model<float> model;
};

std::string build_snapshot(const Config& cfg, const Vocabulary& vocab,
                           const std::vector<std::string>& classes,
                           const StopwordList& stopwords);
TrainedBundle load_model_bundle(const std::string& path);
void save_model_bundle(TrainedBundle& bundle, const std::string& path);

void save_vocab(const std::string& path, const Vocabulary& vocab);
Vocabulary load_vocab(const std::string& path);

// Deterministic float rendering used by every report.
std::string format_value(double v);

}  // namespace tgcm::cli
