#include "tgcm/textpipe.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include "tgcm/error.hpp"

namespace tgcm {

namespace {

bool is_kept(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'';
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool has_vowel(const std::string& s) {
  return std::any_of(s.begin(), s.end(), is_vowel);
}

bool ends_with(const std::string& s, const char* suffix) {
  std::size_t len = std::char_traits<char>::length(suffix);
  return s.size() >= len && s.compare(s.size() - len, len, suffix) == 0;
}

// Trailing doubled consonant -> drop one.
void undouble(std::string& s) {
  if (s.size() >= 2 && s[s.size() - 1] == s[s.size() - 2] &&
      !is_vowel(s.back()))
    s.pop_back();
}

}  // namespace

std::string clean(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  std::size_t i = 0;
  while (i < raw.size()) {
    char c = raw[i];
    if (c == '<') {
      std::size_t close = raw.find('>', i + 1);
      if (close != std::string::npos) {
        i = close + 1;
        pending_space = !out.empty();
        continue;
      }
    }
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (is_kept(c)) {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    } else {
      pending_space = !out.empty();
    }
    ++i;
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& cleaned) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < cleaned.size()) {
    std::size_t end = cleaned.find(' ', start);
    if (end == std::string::npos) end = cleaned.size();
    if (end > start) tokens.push_back(cleaned.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordList& stoplist) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens)
    if (stoplist.find(t) == stoplist.end()) out.push_back(t);
  return out;
}

std::string stem(const std::string& token) {
  if (ends_with(token, "sses"))
    return token.substr(0, token.size() - 4) + "ss";
  if (ends_with(token, "ies"))
    return token.substr(0, token.size() - 3) + "i";
  if (token.size() >= 2 && token.back() == 's' && token[token.size() - 2] != 's')
    return token.substr(0, token.size() - 1);
  if (ends_with(token, "ing")) {
    std::string rest = token.substr(0, token.size() - 3);
    if (has_vowel(rest)) {
      undouble(rest);
      return rest;
    }
    return token;
  }
  if (ends_with(token, "ed")) {
    std::string rest = token.substr(0, token.size() - 2);
    if (has_vowel(rest)) {
      undouble(rest);
      return rest;
    }
    return token;
  }
  return token;
}

const StopwordList& default_stopwords() {
  static const StopwordList list = {
      "the",     "a",       "an",      "and",    "or",     "but",   "if",
      "then",    "else",    "when",    "at",     "by",     "for",   "with",
      "about",   "against", "between", "into",   "through", "during", "before",
      "after",   "above",   "below",   "to",     "from",   "up",    "down",
      "in",      "out",     "on",      "off",    "over",   "under", "again",
      "further", "once",    "here",    "there",  "all",    "any",   "both",
      "each",    "few",     "more",    "most",   "other",  "some",  "such",
      "is"};
  return list;
}

StopwordList load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open stopword file " + path);
  StopwordList list;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    list.insert(line.substr(first, last - first + 1));
  }
  return list;
}

std::vector<std::string> preprocess(const std::string& raw,
                                    const StopwordList& stoplist) {
  auto tokens = remove_stopwords(tokenize(clean(raw)), stoplist);
  for (auto& t : tokens) t = stem(t);
  return tokens;
}

Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus_tokens,
                       int min_count) {
  // doc_freq counts documents containing the token, not occurrences.
  std::map<std::string, int> freq;
  int surviving_docs = 0;
  for (const auto& doc : corpus_tokens) {
    if (doc.empty()) continue;
    ++surviving_docs;
    std::map<std::string, bool> seen;
    for (const auto& t : doc) {
      if (!seen[t]) {
        seen[t] = true;
        ++freq[t];
      }
    }
  }
  if (surviving_docs == 0)
    throw Error(ErrorCode::EmptyCorpus, "no document survives preprocessing");

  std::vector<std::pair<std::string, int>> entries;
  for (const auto& [token, count] : freq)
    if (count >= min_count) entries.emplace_back(token, count);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });

  Vocabulary vocab;
  vocab.total_docs = surviving_docs;
  for (const auto& [token, count] : entries) {
    int id = static_cast<int>(vocab.id_to_token.size());
    vocab.token_to_id.emplace(token, id);
    vocab.id_to_token.push_back(token);
    vocab.doc_freq.push_back(count);
  }
  return vocab;
}

std::vector<int> encode(const std::vector<std::string>& tokens,
                        const Vocabulary& vocab) {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab.id_of(t));
  return ids;
}

}  // namespace tgcm
