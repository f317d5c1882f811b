#include "synthetic.hpp"

#include <array>

namespace ara::fixtures {
namespace {

struct Inventory {
  std::vector<std::string> onsets;
  std::vector<std::string> vowels;
  std::vector<std::string> codas;
};

Inventory inventory_for(const std::string& lang) {
  if (lang == "hil") return {{"b", "k", "l", "m", "n", "p", "s", "t", "ng", "h"}, {"a", "i", "o"}, {"n", "y", "g", "t"}};
  if (lang == "ceb") return {{"b", "d", "k", "l", "m", "s", "t", "w", "g"}, {"a", "i", "u"}, {"g", "n", "y", "w"}};
  if (lang == "tgl") return {{"b", "d", "k", "l", "m", "n", "p", "s", "t", "y"}, {"a", "e", "i", "o", "u"}, {"n", "s", "t", "p"}};
  return {{"b", "k", "r", "s", "t", "pl", "tr"}, {"a", "e", "o"}, {"r", "s", "k"}};
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[rng.below(items.size())];
}

std::size_t between(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); }

std::string make_word(Rng& rng, const Inventory& inv, std::size_t syllables) {
  std::string w;
  for (std::size_t s = 0; s < syllables; ++s) {
    if (s > 0 || rng.below(4) != 0) w += pick(rng, inv.onsets);
    w += pick(rng, inv.vowels);
    if (rng.below(3) == 0) w += pick(rng, inv.codas);
  }
  return w;
}

std::string make_text(Rng& rng, const Inventory& inv, std::size_t words) {
  const std::size_t vocab_size = std::min(words, between(rng, 15, 35));
  const std::size_t max_syllables = between(rng, 1, 4);
  std::vector<std::string> vocab;
  while (vocab.size() < vocab_size) {
    auto w = make_word(rng, inv, between(rng, 1, max_syllables));
    bool seen = false;
    for (const auto& v : vocab) seen = seen || v == w;
    if (!seen) vocab.push_back(std::move(w));
  }
  const std::size_t sentences = between(rng, 4, 10);
  std::string text;
  for (std::size_t i = 0; i < words; ++i) {
    std::string w = i < vocab.size() ? vocab[i] : pick(rng, vocab);
    const bool sentence_start = i == 0 || (text.back() == ' ' && text[text.size() - 2] == '.');
    if (sentence_start) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    text += w;
    // Spread sentence breaks evenly so every sentence has at least one word.
    const bool end = i + 1 == words || (i + 1) * sentences / words != i * sentences / words;
    text += end ? ". " : " ";
  }
  text.pop_back();
  return text;
}

}  // namespace

Corpus make_synthetic_corpus(const SyntheticOptions& options) {
  Rng rng(options.seed);
  std::vector<Document> docs;
  for (const auto& lang : options.languages) {
    const auto inv = inventory_for(lang);
    for (auto level : kLevels) {
      const std::size_t lo = 40 + 40 * level_index(level);
      for (std::size_t d = 0; d < options.docs_per_level; ++d) {
        const std::size_t words = between(rng, lo, lo + 19);
        docs.push_back({lang + "-" + std::string(to_string(level)) + "-" + std::to_string(d), LanguageCode(lang),
                        level, make_text(rng, inv, words)});
      }
    }
  }
  return Corpus(std::move(docs));
}

std::string random_word(Rng& rng) {
  static const std::vector<std::string> letters = {
      "a", "e", "i", "o", "u", "b", "k", "d", "g", "h", "l", "m", "n", "p", "r", "s", "t", "w", "y",
      "ng", "á", "é", "í", "ó", "ú", "à", "â", "ñ", "ç", "ā", "ĕ", "ű", "ǎ", "ạ", "ṅ", "ẹ"};
  const std::size_t n = between(rng, 1, 12);
  std::string w;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && rng.below(15) == 0) w += "-";
    w += pick(rng, letters);
  }
  return w;
}

Dataset make_feature0_dataset(Rng& rng, std::size_t rows, std::size_t n_features) {
  Dataset data(n_features);
  std::vector<double> row(n_features);
  for (std::size_t i = 0; i < rows; ++i) {
    for (auto& v : row) v = rng.uniform();
    const auto label = level_from_index(static_cast<std::size_t>(row[0] * 3.0));
    data.add(row, label);
  }
  return data;
}

}  // namespace ara::fixtures
