#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace tgcm {

using StopwordList = std::unordered_set<std::string>;

// Token/id association. Id 0 is reserved for UNK; content ids are dense in
// [1, size()].
struct Vocabulary {
  std::unordered_map<std::string, int> token_to_id;
  std::vector<std::string> id_to_token;  // id_to_token[0] == "<unk>"
  std::vector<int> doc_freq;             // indexed by id, doc_freq[0] == 0
  int total_docs = 0;

  Vocabulary() : id_to_token{"<unk>"}, doc_freq{0} {}

  // Number of content tokens, UNK excluded.
  int size() const { return static_cast<int>(id_to_token.size()) - 1; }

  int id_of(const std::string& token) const {
    auto it = token_to_id.find(token);
    return it == token_to_id.end() ? 0 : it->second;
  }
};

// Lowercases, drops <...> tag spans, maps everything outside
// [a-z0-9'\s] to a space and collapses whitespace. Idempotent.
std::string clean(const std::string& raw);

// Whitespace split of already-cleaned text.
std::vector<std::string> tokenize(const std::string& cleaned);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordList& stoplist);

// Five-rule suffix stripper, first matching rule wins, single pass:
//   sses -> ss | ies -> i | s -> (drop unless after s) |
//   ing -> (drop if a vowel remains, undouble trailing consonant) |
//   ed  -> (same vowel/undouble treatment)
// Never empties or grows a token.
std::string stem(const std::string& token);

// Built-in 50-word English function-word list.
const StopwordList& default_stopwords();

// One token per line, '#' starts a comment, blank lines skipped.
StopwordList load_stopwords(const std::string& path);

// clean -> tokenize -> remove_stopwords -> stem.
std::vector<std::string> preprocess(const std::string& raw,
                                    const StopwordList& stoplist);

// Ids assigned in descending document-frequency order, ties broken
// lexicographically. Tokens under min_count map to UNK. Throws EmptyCorpus if
// no document has any tokens.
Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus_tokens,
                       int min_count);

std::vector<int> encode(const std::vector<std::string>& tokens,
                        const Vocabulary& vocab);

}  // namespace tgcm
