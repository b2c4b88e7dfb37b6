#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tgcm/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tgc - text classification on word co-occurrence graphs"};
  app.require_subcommand(1);

  tgcm::cli::PreprocessArgs pre;
  auto* cmd_pre = app.add_subcommand(
      "preprocess", "Build the vocabulary and an encoded corpus");
  cmd_pre->add_option("--data", pre.data, "dataset (JSONL)")->required();
  cmd_pre->add_option("--config", pre.config, "config file")->required();
  cmd_pre->add_option("--out", pre.out_dir, "output directory")->required();

  tgcm::cli::TrainArgs train;
  auto* cmd_train = app.add_subcommand("train", "Train a model");
  cmd_train->add_option("--data", train.data, "dataset (JSONL, raw or encoded)")
      ->required();
  cmd_train->add_option("--config", train.config, "config file")->required();
  cmd_train->add_option("--out-model", train.out_model, "checkpoint path")
      ->required();
  cmd_train->add_option("--vocab", train.vocab,
                        "vocabulary file (required for encoded corpora)");
  cmd_train->add_option("--report", train.report,
                        "report path (default: <out-model>.report.tsv)");

  tgcm::cli::EvalArgs eval;
  auto* cmd_eval = app.add_subcommand("eval", "Evaluate a model on a dataset");
  cmd_eval->add_option("--data", eval.data, "dataset (JSONL)")->required();
  cmd_eval->add_option("--model", eval.model, "checkpoint path")->required();
  cmd_eval->add_option("--out", eval.out,
                       "report path (default: <model>.eval.tsv)");

  tgcm::cli::PredictArgs predict;
  std::vector<std::string> modality_args;
  auto* cmd_predict = app.add_subcommand("predict", "Classify one text");
  cmd_predict->add_option("--model", predict.model, "checkpoint path")->required();
  cmd_predict->add_option("--text", predict.text, "raw document text")->required();
  cmd_predict->add_option("--modality", modality_args,
                          "modality vector as name=path (repeatable)");

  tgcm::cli::GradcheckArgs gradcheck;
  auto* cmd_gradcheck = app.add_subcommand(
      "gradcheck", "Finite-difference check of all analytic gradients");
  cmd_gradcheck->add_option("--config", gradcheck.config, "config file");
  cmd_gradcheck->add_option("--seed", gradcheck.seed, "instance seed");
  cmd_gradcheck->add_flag("--inject-grad-error", gradcheck.inject_error,
                          "test hook: corrupt one gradient to force a failure");

  tgcm::cli::AblateArgs ablate;
  auto* cmd_ablate = app.add_subcommand(
      "ablate", "Train full / gnn-only / mmc-only and compare");
  cmd_ablate->add_option("--data", ablate.data, "dataset (JSONL)")->required();
  cmd_ablate->add_option("--config", ablate.config, "config file")->required();
  cmd_ablate->add_option("--eval-data", ablate.eval_data,
                         "held-out dataset (default: training data)");
  cmd_ablate->add_option("--out", ablate.out,
                         "table path (default: ablation.tsv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: Usage: " << e.what() << "\n";
    return 2;
  }

  for (const auto& arg : modality_args) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
      std::cerr << "error: Usage: --modality wants name=path, got '" << arg
                << "'\n";
      return 2;
    }
    predict.modalities.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
  }

  if (cmd_pre->parsed())
    return tgcm::cli::run_preprocess(pre, std::cout, std::cerr);
  if (cmd_train->parsed()) return tgcm::cli::run_train(train, std::cout, std::cerr);
  if (cmd_eval->parsed()) return tgcm::cli::run_eval(eval, std::cout, std::cerr);
  if (cmd_predict->parsed())
    return tgcm::cli::run_predict(predict, std::cout, std::cerr);
  if (cmd_gradcheck->parsed())
    return tgcm::cli::run_gradcheck(gradcheck, std::cout, std::cerr);
  if (cmd_ablate->parsed())
    return tgcm::cli::run_ablate(ablate, std::cout, std::cerr);
  return 2;
}
