#pragma once

// Synthetic corpora for the training-behavior suites. Text is built from two
// topic vocabularies ("ta###" vs "tb###"); the optional "meta" modality
// carries a class-indicator vector with Gaussian noise.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "tgcm/dataset.hpp"
#include "tgcm/rng.hpp"

namespace testgen {

struct GeneratedCorpus {
  std::vector<tgcm::DatasetRecord> train;
  std::vector<tgcm::DatasetRecord> heldout;
};

inline std::string topic_word(int topic, int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "t%c%03d", topic == 0 ? 'a' : 'b', index);
  return buf;
}

inline double gaussian(tgcm::Rng& rng) {
  double u1 = rng.next_double();
  double u2 = rng.next_double();
  if (u1 < 1e-12) u1 = 1e-12;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline std::string make_text(tgcm::Rng& rng, int topic, double purity,
                             int vocab_per_topic) {
  int len = rng.next_int(12, 24);
  std::string text;
  for (int t = 0; t < len; ++t) {
    int chosen = rng.next_double() < purity ? topic : 1 - topic;
    if (!text.empty()) text += ' ';
    text += topic_word(chosen, rng.next_int(0, vocab_per_topic - 1));
  }
  return text;
}

inline std::vector<float> make_modality(tgcm::Rng& rng, int topic, int dim,
                                        double noise) {
  std::vector<float> v(static_cast<std::size_t>(dim), 0.0f);
  for (int j = 0; j < dim; ++j)
    v[static_cast<std::size_t>(j)] =
        static_cast<float>((j % 2 == topic ? 1.0 : -1.0) + noise * gaussian(rng));
  return v;
}

// Two near-disjoint topic vocabularies, text only.
inline GeneratedCorpus separable_text_corpus(std::uint64_t seed, int train_per_class,
                                             int heldout_per_class,
                                             double purity = 0.9,
                                             int vocab_per_topic = 100) {
  tgcm::Rng rng(seed);
  GeneratedCorpus corpus;
  auto emit = [&](std::vector<tgcm::DatasetRecord>& dest, int topic, int index) {
    tgcm::DatasetRecord r;
    r.id = (topic == 0 ? "a" : "b") + std::to_string(index) +
           (&dest == &corpus.train ? "" : "h");
    r.has_text = true;
    r.text = make_text(rng, topic, purity, vocab_per_topic);
    r.label = topic == 0 ? "neg" : "pos";
    dest.push_back(std::move(r));
  };
  for (int i = 0; i < train_per_class; ++i) {
    emit(corpus.train, 0, i);
    emit(corpus.train, 1, i);
  }
  for (int i = 0; i < heldout_per_class; ++i) {
    emit(corpus.heldout, 0, i);
    emit(corpus.heldout, 1, i);
  }
  return corpus;
}

// Noisier text plus a "meta" modality whose signal is complementary: either
// side alone misses part of the corpus.
inline GeneratedCorpus multimodal_corpus(std::uint64_t seed, int train_per_class,
                                         int heldout_per_class,
                                         double text_purity = 0.75,
                                         double modality_noise = 0.8,
                                         int modality_dim = 4) {
  tgcm::Rng rng(seed);
  GeneratedCorpus corpus;
  auto emit = [&](std::vector<tgcm::DatasetRecord>& dest, int topic, int index) {
    tgcm::DatasetRecord r;
    r.id = (topic == 0 ? "m" : "n") + std::to_string(index) +
           (&dest == &corpus.train ? "" : "h");
    r.has_text = true;
    // A slice of each class gets text that is pure noise; its label is only
    // recoverable from the modality. Another slice gets a noise modality.
    bool text_blind = index % 5 == 0;
    bool modality_blind = index % 5 == 2;
    r.text = make_text(rng, topic, text_blind ? 0.5 : text_purity, 40);
    tgcm::ModalitySource source;
    source.inline_values = make_modality(
        rng, topic, modality_dim, modality_blind ? 8.0 : modality_noise);
    r.modalities.emplace("meta", std::move(source));
    r.label = topic == 0 ? "neg" : "pos";
    dest.push_back(std::move(r));
  };
  for (int i = 0; i < train_per_class; ++i) {
    emit(corpus.train, 0, i);
    emit(corpus.train, 1, i);
  }
  for (int i = 0; i < heldout_per_class; ++i) {
    emit(corpus.heldout, 0, i);
    emit(corpus.heldout, 1, i);
  }
  return corpus;
}

inline std::string to_jsonl(const std::vector<tgcm::DatasetRecord>& records) {
  std::string out;
  for (const auto& r : records) out += tgcm::serialize_record(r) + "\n";
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace testgen
