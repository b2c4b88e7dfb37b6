#include "tgcm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tgcm/error.hpp"
#include "tgcm/metrics.hpp"
#include "tgcm/model_check.hpp"
#include "tgcm/parallel.hpp"
#include "tgcm/train.hpp"

namespace tgcm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::NonFiniteLoss ? 3 : 2;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << "\n";
    return 2;
  }
}

std::string dir_of(const std::string& path) {
  fs::path p(path);
  return p.has_parent_path() ? p.parent_path().string() : std::string(".");
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).string();
}

ModelSpec make_spec(const Config& cfg, int vocab_size, int num_classes) {
  ModelSpec spec;
  spec.mode = cfg.mode;
  spec.kind = cfg.layer;
  spec.aggregator = cfg.aggregator;
  spec.sample_size = cfg.sample_size;
  spec.widths = cfg.widths;
  spec.d_embed = cfg.d_embed;
  spec.d_fuse = cfg.d_fuse;
  spec.vocab_size = vocab_size;
  spec.num_classes = num_classes;
  spec.modalities = cfg.modalities;
  return spec;
}

std::uint64_t inference_sage_seed(std::uint64_t run_seed, std::size_t doc_index) {
  return mix_seed(mix_seed(run_seed, 0xe7a1dacaULL), doc_index);
}

StopwordList stopwords_for(const Config& cfg) {
  if (cfg.stopwords_path.empty()) return default_stopwords();
  return load_stopwords(cfg.stopwords_path);
}

// TSV report writer; keys never contain tabs, values go through format_value
// for doubles so identical runs emit identical bytes.
class Report {
 public:
  void add(const std::string& key, const std::string& value) {
    lines_ += key + "\t" + value + "\n";
  }
  void add(const std::string& key, double value) { add(key, format_value(value)); }
  void add(const std::string& key, std::int64_t value) {
    add(key, std::to_string(value));
  }
  void add_config(const Config& cfg) {
    std::stringstream stream(serialize_config(cfg));
    std::string line;
    while (std::getline(stream, line)) {
      auto eq = line.find(" = ");
      add("config." + line.substr(0, eq), line.substr(eq + 3));
    }
  }
  void add_metrics(const MetricsReport& m, const std::vector<std::string>& classes) {
    add("accuracy", m.accuracy);
    add("f1", m.aggregate_f1);
    for (int c = 0; c < m.k; ++c) {
      add("precision." + classes[static_cast<std::size_t>(c)], m.precision[c]);
      add("recall." + classes[static_cast<std::size_t>(c)], m.recall[c]);
      add("f1." + classes[static_cast<std::size_t>(c)], m.f1_per_class[c]);
    }
  }
  const std::string& text() const { return lines_; }
  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write report " + path);
    out << lines_;
  }

 private:
  std::string lines_;
};

int label_index(const std::vector<std::string>& classes, const std::string& label,
                const std::string& record_id) {
  auto it = std::lower_bound(classes.begin(), classes.end(), label);
  if (it == classes.end() || *it != label)
    throw Error(ErrorCode::DataError,
                "record " + record_id + ": label '" + label +
                    "' not in the model's class set");
  return static_cast<int>(it - classes.begin());
}

struct EvalResult {
  MetricsReport metrics;
  std::vector<int> predictions;
};

EvalResult evaluate(Model<float>& model, const std::vector<DocInput<float>>& docs,
                    const Config& cfg, int num_classes) {
  std::vector<int> preds(docs.size());
  std::vector<int> labels(docs.size());
  parallel_for(docs.size(), [&](std::size_t i) {
    DocTrace<float> trace;
    forward_document(model, docs[i], inference_sage_seed(cfg.seed, i), trace);
    preds[i] = argmax_class(trace.probs);
    labels[i] = docs[i].label;
  });
  EvalResult result;
  result.metrics = metrics_report(confusion(preds, labels, num_classes));
  result.predictions = std::move(preds);
  return result;
}

struct TrainOutcome {
  std::vector<double> epoch_losses;
  MetricsReport train_metrics;
};

TrainOutcome fit(Model<float>& model, const std::vector<DocInput<float>>& docs,
                 const Config& cfg) {
  TrainOutcome outcome;
  auto velocity = make_velocity(model);
  TrainConfig tc = cfg.train_config();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch)
    outcome.epoch_losses.push_back(train_epoch(model, docs, tc, epoch, velocity));
  outcome.train_metrics =
      evaluate(model, docs, cfg, model.spec.num_classes).metrics;
  return outcome;
}

}  // namespace

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

PreparedCorpus prepare_corpus(const std::vector<DatasetRecord>& records,
                              const Config& cfg, const std::string& base_dir,
                              const Vocabulary* vocab,
                              const std::vector<std::string>* classes,
                              const StopwordList* stopwords) {
  if (records.empty()) throw Error(ErrorCode::EmptyCorpus, "dataset has no records");

  PreparedCorpus corpus;
  corpus.stopwords = stopwords ? *stopwords : stopwords_for(cfg);

  std::vector<std::vector<int>> encoded(records.size());
  if (vocab) {
    corpus.vocab = *vocab;
  }

  bool any_text = std::any_of(records.begin(), records.end(),
                              [](const DatasetRecord& r) { return r.has_text; });
  if (!vocab) {
    if (!any_text)
      throw Error(ErrorCode::DataError,
                  "encoded corpus needs an explicit vocabulary (--vocab)");
    std::vector<std::vector<std::string>> token_lists;
    token_lists.reserve(records.size());
    for (const auto& r : records) {
      if (!r.has_text)
        throw Error(ErrorCode::DataError,
                    "record " + r.id + ": mixing raw and encoded records");
      token_lists.push_back(preprocess(r.text, corpus.stopwords));
    }
    corpus.vocab = build_vocab(token_lists, cfg.min_count);
    for (std::size_t i = 0; i < records.size(); ++i)
      encoded[i] = encode(token_lists[i], corpus.vocab);
  } else {
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      if (r.has_ids) {
        for (int id : r.ids)
          if (id < 0 || id > corpus.vocab.size())
            throw Error(ErrorCode::DataError,
                        "record " + r.id + ": token id " + std::to_string(id) +
                            " outside the vocabulary");
        encoded[i] = r.ids;
      } else {
        encoded[i] = encode(preprocess(r.text, corpus.stopwords), corpus.vocab);
      }
    }
  }

  if (classes) {
    corpus.classes = *classes;
  } else {
    corpus.classes = class_names(records);
  }

  GraphConfig gcfg = cfg.graph_config();
  std::int64_t node_sum = 0, edge_sum = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (encoded[i].empty()) {
      ++corpus.dropped_empty;
      continue;
    }
    DocInput<float> doc;
    doc.id = r.id;
    doc.token_sequence = encoded[i];
    doc.label = label_index(corpus.classes, r.label, r.id);
    doc.graph = build_graph<float>(doc.token_sequence, gcfg);
    doc.adj_self = neighbor_lists(doc.graph.A, true);
    node_sum += doc.graph.size();
    edge_sum += doc.graph.A.nnz() / 2;

    for (const auto& decl : cfg.modalities) {
      auto it = r.modalities.find(decl.name);
      if (it == r.modalities.end())
        throw Error(ErrorCode::DataError,
                    "record " + r.id + ": missing modality '" + decl.name + "'");
      std::vector<float> values;
      if (it->second.is_path) {
        values = load_modality_file(resolve(base_dir, it->second.path), decl.dim);
      } else {
        values = it->second.inline_values;
        if (static_cast<int>(values.size()) != decl.dim)
          throw Error(ErrorCode::DataError,
                      "record " + r.id + ": modality '" + decl.name + "' has " +
                          std::to_string(values.size()) + " values, expected " +
                          std::to_string(decl.dim));
      }
      Mat<float> row(1, decl.dim);
      for (int j = 0; j < decl.dim; ++j) row(0, j) = values[static_cast<std::size_t>(j)];
      doc.modality_values.push_back(std::move(row));
    }
    corpus.docs.push_back(std::move(doc));
  }

  if (corpus.docs.empty())
    throw Error(ErrorCode::EmptyCorpus, "no document survives preprocessing");
  corpus.mean_nodes =
      static_cast<double>(node_sum) / static_cast<double>(corpus.docs.size());
  corpus.mean_edges =
      static_cast<double>(edge_sum) / static_cast<double>(corpus.docs.size());
  return corpus;
}

void save_vocab(const std::string& path, const Vocabulary& vocab) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write vocabulary " + path);
  out << "# total_docs\t" << vocab.total_docs << "\n";
  for (int id = 1; id <= vocab.size(); ++id)
    out << vocab.id_to_token[static_cast<std::size_t>(id)] << "\t" << id << "\t"
        << vocab.doc_freq[static_cast<std::size_t>(id)] << "\n";
}

Vocabulary load_vocab(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open vocabulary " + path);
  Vocabulary vocab;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# total_docs\t", 0) == 0) {
      vocab.total_docs = std::atoi(line.c_str() + 13);
      continue;
    }
    std::stringstream ss(line);
    std::string token, id_str, freq_str;
    if (!std::getline(ss, token, '\t') || !std::getline(ss, id_str, '\t') ||
        !std::getline(ss, freq_str))
      throw Error(ErrorCode::DataError,
                  path + " line " + std::to_string(line_no) + ": bad vocabulary row");
    int id = std::atoi(id_str.c_str());
    if (id != static_cast<int>(vocab.id_to_token.size()))
      throw Error(ErrorCode::DataError,
                  path + " line " + std::to_string(line_no) + ": ids must be dense");
    vocab.token_to_id.emplace(token, id);
    vocab.id_to_token.push_back(token);
    vocab.doc_freq.push_back(std::atoi(freq_str.c_str()));
  }
  return vocab;
}

std::string build_snapshot(const Config& cfg, const Vocabulary& vocab,
                           const std::vector<std::string>& classes,
                           const StopwordList& stopwords) {
  std::ostringstream out;
  out << serialize_config(cfg);
  out << "classes = " << json(classes).dump() << "\n";
  std::vector<std::string> stop_sorted(stopwords.begin(), stopwords.end());
  std::sort(stop_sorted.begin(), stop_sorted.end());
  out << "stopword_list = " << json(stop_sorted).dump() << "\n";
  out << "vocab.total_docs = " << vocab.total_docs << "\n";
  std::vector<std::string> tokens(vocab.id_to_token.begin() + 1,
                                  vocab.id_to_token.end());
  out << "vocab.tokens = " << json(tokens).dump() << "\n";
  std::vector<int> freqs(vocab.doc_freq.begin() + 1, vocab.doc_freq.end());
  out << "vocab.doc_freq = " << json(freqs).dump() << "\n";
  return out.str();
}

namespace {

void parse_snapshot(const std::string& snapshot, Config& cfg, Vocabulary& vocab,
                    std::vector<std::string>& classes, StopwordList& stopwords) {
  std::stringstream stream(snapshot);
  std::string line, config_text;
  std::vector<std::string> tokens;
  std::vector<int> freqs;
  auto value_of = [](const std::string& l) {
    return l.substr(l.find(" = ") + 3);
  };
  try {
    while (std::getline(stream, line)) {
      if (line.empty()) continue;
      if (line.rfind("classes = ", 0) == 0) {
        classes = json::parse(value_of(line)).get<std::vector<std::string>>();
      } else if (line.rfind("stopword_list = ", 0) == 0) {
        auto list = json::parse(value_of(line)).get<std::vector<std::string>>();
        stopwords = StopwordList(list.begin(), list.end());
      } else if (line.rfind("vocab.total_docs = ", 0) == 0) {
        vocab.total_docs = std::atoi(value_of(line).c_str());
      } else if (line.rfind("vocab.tokens = ", 0) == 0) {
        tokens = json::parse(value_of(line)).get<std::vector<std::string>>();
      } else if (line.rfind("vocab.doc_freq = ", 0) == 0) {
        freqs = json::parse(value_of(line)).get<std::vector<int>>();
      } else {
        config_text += line + "\n";
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptTensor,
                std::string("bad snapshot payload: ") + e.what());
  }
  cfg = parse_config_text(config_text);
  if (tokens.size() != freqs.size())
    throw Error(ErrorCode::CorruptTensor, "snapshot vocab arrays disagree");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    vocab.token_to_id.emplace(tokens[i], id);
    vocab.id_to_token.push_back(tokens[i]);
    vocab.doc_freq.push_back(freqs[i]);
  }
}

}  // namespace

TrainedBundle load_model_bundle(const std::string& path) {
  RawCheckpoint raw = load_checkpoint(path);
  TrainedBundle bundle;
  parse_snapshot(raw.snapshot, bundle.cfg, bundle.vocab, bundle.classes,
                 bundle.stopwords);
  if (bundle.classes.empty())
    throw Error(ErrorCode::CorruptTensor, "snapshot lists no classes");
  ModelSpec spec = make_spec(bundle.cfg, bundle.vocab.size(),
                             static_cast<int>(bundle.classes.size()));
  bundle.model = init_model<float>(spec, bundle.cfg.seed);
  apply_tensors(bundle.model, raw.tensors);
  return bundle;
}

void save_model_bundle(TrainedBundle& bundle, const std::string& path) {
  std::string snapshot =
      build_snapshot(bundle.cfg, bundle.vocab, bundle.classes, bundle.stopwords);
  save_checkpoint(path, snapshot, collect_tensors(bundle.model));
}

int run_preprocess(const PreprocessArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    Config cfg = parse_config_file(args.config);
    auto records = load_dataset(args.data);
    PreparedCorpus corpus =
        prepare_corpus(records, cfg, dir_of(args.data), nullptr, nullptr, nullptr);

    fs::create_directories(args.out_dir);
    save_vocab((fs::path(args.out_dir) / "vocab.tsv").string(), corpus.vocab);

    std::ofstream corpus_out(fs::path(args.out_dir) / "corpus.jsonl",
                             std::ios::binary);
    if (!corpus_out)
      throw Error(ErrorCode::IoError, "cannot write corpus in " + args.out_dir);
    for (const auto& doc : corpus.docs) {
      DatasetRecord r;
      r.id = doc.id;
      r.has_ids = true;
      r.ids = doc.token_sequence;
      r.label = corpus.classes[static_cast<std::size_t>(doc.label)];
      for (const auto& record : records) {
        if (record.id == doc.id) {
          r.modalities = record.modalities;
          break;
        }
      }
      corpus_out << serialize_record(r) << "\n";
    }

    out << "docs\t" << corpus.docs.size() << "\n";
    out << "dropped_empty\t" << corpus.dropped_empty << "\n";
    out << "vocab_size\t" << corpus.vocab.size() << "\n";
    out << "classes\t" << corpus.classes.size() << "\n";
    out << "mean_graph_nodes\t" << format_value(corpus.mean_nodes) << "\n";
    out << "mean_graph_edges\t" << format_value(corpus.mean_edges) << "\n";
    return 0;
  });
}

int run_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    auto started = std::chrono::steady_clock::now();
    Config cfg = parse_config_file(args.config);
    auto records = load_dataset(args.data);

    Vocabulary loaded_vocab;
    const Vocabulary* vocab_ptr = nullptr;
    bool any_ids = std::any_of(records.begin(), records.end(),
                               [](const DatasetRecord& r) { return r.has_ids; });
    if (any_ids) {
      if (args.vocab.empty())
        throw Error(ErrorCode::DataError,
                    "encoded corpus needs an explicit vocabulary (--vocab)");
      loaded_vocab = load_vocab(args.vocab);
      vocab_ptr = &loaded_vocab;
    }

    PreparedCorpus corpus = prepare_corpus(records, cfg, dir_of(args.data),
                                           vocab_ptr, nullptr, nullptr);
    ModelSpec spec = make_spec(cfg, corpus.vocab.size(),
                               static_cast<int>(corpus.classes.size()));
    Model<float> model = init_model<float>(spec, cfg.seed);

    TrainOutcome outcome = fit(model, corpus.docs, cfg);
    for (std::size_t e = 0; e < outcome.epoch_losses.size(); ++e)
      out << "epoch " << e << " loss " << format_value(outcome.epoch_losses[e])
          << "\n";

    TrainedBundle bundle{cfg, corpus.vocab, corpus.classes, corpus.stopwords,
                         std::move(model)};
    save_model_bundle(bundle, args.out_model);

    Report report;
    report.add("command", "train");
    report.add("data", args.data);
    report.add_config(cfg);
    report.add("classes", json(corpus.classes).dump());
    report.add("docs", static_cast<std::int64_t>(corpus.docs.size()));
    report.add("dropped_empty", static_cast<std::int64_t>(corpus.dropped_empty));
    report.add("vocab_size", static_cast<std::int64_t>(corpus.vocab.size()));
    for (std::size_t e = 0; e < outcome.epoch_losses.size(); ++e)
      report.add("epoch_loss." + std::to_string(e), outcome.epoch_losses[e]);
    report.add_metrics(outcome.train_metrics, corpus.classes);
    std::string report_path =
        args.report.empty() ? args.out_model + ".report.tsv" : args.report;
    report.write(report_path);

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                started)
                      .count();
    out << "train_accuracy " << format_value(outcome.train_metrics.accuracy) << "\n";
    out << "train_f1 " << format_value(outcome.train_metrics.aggregate_f1) << "\n";
    out << "checkpoint " << args.out_model << "\n";
    out << "report " << report_path << "\n";
    out << "wall_time_s " << format_value(wall) << "\n";
    return 0;
  });
}

int run_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    TrainedBundle bundle = load_model_bundle(args.model);
    auto records = load_dataset(args.data);
    PreparedCorpus corpus =
        prepare_corpus(records, bundle.cfg, dir_of(args.data), &bundle.vocab,
                       &bundle.classes, &bundle.stopwords);

    EvalResult result = evaluate(bundle.model, corpus.docs, bundle.cfg,
                                 static_cast<int>(bundle.classes.size()));

    Report report;
    report.add("command", "eval");
    report.add("data", args.data);
    report.add("model", args.model);
    report.add("docs", static_cast<std::int64_t>(corpus.docs.size()));
    report.add_metrics(result.metrics, bundle.classes);
    out << report.text();
    std::string out_path = args.out.empty() ? args.model + ".eval.tsv" : args.out;
    report.write(out_path);
    return 0;
  });
}

int run_predict(const PredictArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    TrainedBundle bundle = load_model_bundle(args.model);
    const Config& cfg = bundle.cfg;

    DocInput<float> doc;
    doc.id = "cli";
    doc.token_sequence =
        encode(preprocess(args.text, bundle.stopwords), bundle.vocab);
    if (doc.token_sequence.empty())
      throw Error(ErrorCode::EmptyDocument, "no tokens survive preprocessing");
    doc.graph = build_graph<float>(doc.token_sequence, cfg.graph_config());
    doc.adj_self = neighbor_lists(doc.graph.A, true);

    if (bundle.model.spec.uses_modalities()) {
      for (const auto& decl : cfg.modalities) {
        auto it = std::find_if(args.modalities.begin(), args.modalities.end(),
                               [&](const auto& p) { return p.first == decl.name; });
        if (it == args.modalities.end())
          throw Error(ErrorCode::DataError,
                      "missing modality '" + decl.name + "' (use --modality " +
                          decl.name + "=<file>)");
        auto values = load_modality_file(it->second, decl.dim);
        Mat<float> row(1, decl.dim);
        for (int j = 0; j < decl.dim; ++j)
          row(0, j) = values[static_cast<std::size_t>(j)];
        doc.modality_values.push_back(std::move(row));
      }
    }

    DocTrace<float> trace;
    forward_document(bundle.model, doc, inference_sage_seed(cfg.seed, 0), trace);
    int pred = argmax_class(trace.probs);
    out << "label = " << bundle.classes[static_cast<std::size_t>(pred)] << "\n";
    char buf[64];
    for (std::size_t k = 0; k < bundle.classes.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.6f",
                    static_cast<double>(trace.probs(0, static_cast<Index>(k))));
      out << "p(" << bundle.classes[k] << ") = " << buf << "\n";
    }
    return 0;
  });
}

int run_gradcheck(const GradcheckArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    Config cfg;
    if (!args.config.empty()) cfg = parse_config_file(args.config);

    double worst = 0.0;
    std::string worst_param;
    for (LayerKind kind :
         {LayerKind::gat, LayerKind::gcn, LayerKind::sage, LayerKind::nn4g}) {
      for (Mode mode : {Mode::full, Mode::gnn_only, Mode::mmc_only}) {
        GradCheckReport report = model_gradcheck(mode, kind, cfg.aggregator,
                                                 args.seed, args.inject_error);
        out << "layer=" << layer_name(kind) << " mode=" << mode_name(mode)
            << " max_rel_error=" << format_value(report.max_rel_error);
        if (!report.worst_param.empty()) out << " worst=" << report.worst_param;
        out << "\n";
        if (report.max_rel_error > worst) {
          worst = report.max_rel_error;
          worst_param = report.worst_param;
        }
      }
    }
    out << "max_rel_error " << format_value(worst) << "\n";
    if (worst >= 1e-4) {
      err << "error: GradCheck: parameter " << worst_param
          << " relative error " << format_value(worst) << "\n";
      return 1;
    }
    return 0;
  });
}

int run_ablate(const AblateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    Config cfg = parse_config_file(args.config);
    if (cfg.modalities.empty())
      throw Error(ErrorCode::ConfigError,
                  "ablation needs at least one modality declared");
    auto records = load_dataset(args.data);
    for (const auto& r : records)
      if (r.modalities.empty())
        throw Error(ErrorCode::DataError,
                    "record " + r.id + " carries no modalities; ablation needs them");

    PreparedCorpus train_corpus =
        prepare_corpus(records, cfg, dir_of(args.data), nullptr, nullptr, nullptr);

    const std::vector<DocInput<float>>* eval_docs = &train_corpus.docs;
    PreparedCorpus eval_corpus;
    if (!args.eval_data.empty()) {
      auto eval_records = load_dataset(args.eval_data);
      eval_corpus = prepare_corpus(eval_records, cfg, dir_of(args.eval_data),
                                   &train_corpus.vocab, &train_corpus.classes,
                                   &train_corpus.stopwords);
      eval_docs = &eval_corpus.docs;
    }

    std::string out_path = args.out.empty() ? "ablation.tsv" : args.out;
    std::string table = "model\tacc\tf1\n";
    for (Mode mode : {Mode::full, Mode::gnn_only, Mode::mmc_only}) {
      Config mode_cfg = cfg;
      mode_cfg.mode = mode;
      ModelSpec spec = make_spec(mode_cfg, train_corpus.vocab.size(),
                                 static_cast<int>(train_corpus.classes.size()));
      Model<float> model = init_model<float>(spec, mode_cfg.seed);
      TrainOutcome outcome = fit(model, train_corpus.docs, mode_cfg);
      EvalResult result = evaluate(model, *eval_docs, mode_cfg,
                                   static_cast<int>(train_corpus.classes.size()));

      Report report;
      report.add("command", "ablate");
      report.add("mode", mode_name(mode));
      report.add("data", args.data);
      report.add_config(mode_cfg);
      for (std::size_t e = 0; e < outcome.epoch_losses.size(); ++e)
        report.add("epoch_loss." + std::to_string(e), outcome.epoch_losses[e]);
      report.add_metrics(result.metrics, train_corpus.classes);
      report.write(out_path + "." + mode_name(mode) + ".report.tsv");

      table += std::string(mode_name(mode)) + "\t" +
               format_value(result.metrics.accuracy) + "\t" +
               format_value(result.metrics.aggregate_f1) + "\n";
    }
    out << table;
    std::ofstream table_out(out_path, std::ios::binary);
    if (!table_out) throw Error(ErrorCode::IoError, "cannot write " + out_path);
    table_out << table;
    return 0;
  });
}

}  // namespace tgcm::cli
