#include "ara/textproc.hpp"

#include "ara/error.hpp"
#include "utf8.hpp"

namespace ara::text {
namespace {

bool is_vowel(char32_t lower) {
  switch (utf8::fold_vowel(lower)) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return true;
    default:
      return false;
  }
}

bool is_terminator(char32_t cp) { return cp == '.' || cp == '!' || cp == '?' || cp == 0x2026; }

bool is_closer(char32_t cp) {
  switch (cp) {
    case '"':
    case '\'':
    case ')':
    case ']':
    case 0x2019:  // right single quote
    case 0x201D:  // right double quote
    case 0xBB:    // right guillemet
      return true;
    default:
      return false;
  }
}

// Lowercased letters of a word with joiners and marks removed.
std::u32string word_letters(std::string_view word) {
  std::u32string letters;
  for (char32_t cp : utf8::decode(word)) {
    if (utf8::is_letter(cp)) letters.push_back(utf8::to_lower(cp));
  }
  return letters;
}

// "ng" only forms a unit when the two letters are adjacent in the written
// word; "n-g" across a hyphen is two consonants.
std::string cv_of_word(std::string_view word) {
  std::string cv;
  const std::u32string cps = utf8::decode(word);
  bool pending_n = false;  // previous emitted symbol was a plain 'n'
  for (char32_t raw : cps) {
    if (utf8::is_combining_mark(raw)) continue;
    if (!utf8::is_letter(raw)) {
      pending_n = false;
      continue;
    }
    const char32_t c = utf8::to_lower(raw);
    if (c == 'g' && pending_n) {
      pending_n = false;  // absorbed into the preceding 'n'
      continue;
    }
    if (is_vowel(c)) {
      cv.push_back('v');
      pending_n = false;
    } else {
      cv.push_back('c');
      pending_n = (c == 'n');
    }
  }
  return cv;
}

}  // namespace

std::string_view to_string(SyllablePattern p) {
  switch (p) {
    case SyllablePattern::V: return "v";
    case SyllablePattern::CV: return "cv";
    case SyllablePattern::VC: return "vc";
    case SyllablePattern::CVC: return "cvc";
    case SyllablePattern::VCC: return "vcc";
    case SyllablePattern::CCV: return "ccv";
    case SyllablePattern::CVCC: return "cvcc";
    case SyllablePattern::CCVCC: return "ccvcc";
    case SyllablePattern::CCVCCC: return "ccvccc";
    case SyllablePattern::Other: return "other";
  }
  return "other";
}

SyllablePattern pattern_from_shape(std::string_view shape) {
  for (SyllablePattern p : kNamedPatterns) {
    if (to_string(p) == shape) return p;
  }
  return SyllablePattern::Other;
}

std::vector<std::string> tokenize_sentences(std::string_view text) {
  const std::u32string cps = utf8::decode(text);
  std::vector<std::string> sentences;
  std::size_t start = 0;

  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && utf8::is_space(cps[begin])) ++begin;
    while (end > begin && utf8::is_space(cps[end - 1])) --end;
    bool has_content = false;
    for (std::size_t k = begin; k < end && !has_content; ++k) {
      has_content = utf8::is_letter(cps[k]) || utf8::is_digit(cps[k]);
    }
    if (has_content) sentences.push_back(utf8::encode(std::u32string_view(cps).substr(begin, end - begin)));
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    if (!is_terminator(cps[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && (is_terminator(cps[j]) || is_closer(cps[j]))) ++j;
    if (j == cps.size() || utf8::is_space(cps[j])) {
      emit(start, j);
      start = j;
    }
    i = j;
  }
  emit(start, cps.size());
  return sentences;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  const std::u32string cps = utf8::decode(text);
  std::vector<std::string> words;
  std::string current;
  bool in_word = false;

  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (utf8::is_letter(cp)) {
      utf8::append(current, utf8::to_lower(cp));
      in_word = true;
    } else if (in_word && utf8::is_combining_mark(cp)) {
      utf8::append(current, cp);
    } else if (in_word && utf8::is_word_joiner(cp) && i + 1 < cps.size() && utf8::is_letter(cps[i + 1])) {
      utf8::append(current, cp);
    } else if (in_word) {
      words.push_back(std::move(current));
      current.clear();
      in_word = false;
    }
  }
  if (in_word) words.push_back(std::move(current));
  return words;
}

std::size_t letter_count(std::string_view word) { return word_letters(word).size(); }

std::string cv_encode(std::string_view word) {
  std::string cv = cv_of_word(word);
  if (cv.empty()) throw Error("not a word: '" + std::string(word) + "'");
  return cv;
}

std::vector<std::string> split_cv(std::string_view cv) {
  std::vector<std::size_t> vowels;
  for (std::size_t i = 0; i < cv.size(); ++i) {
    if (cv[i] == 'v') vowels.push_back(i);
  }
  if (vowels.empty()) {
    if (cv.empty()) return {};
    return {std::string(cv)};
  }

  // Syllable s spans [bounds[s], bounds[s + 1]).
  std::vector<std::size_t> bounds;
  bounds.push_back(0);
  for (std::size_t s = 0; s + 1 < vowels.size(); ++s) {
    const std::size_t run = vowels[s + 1] - vowels[s] - 1;
    std::size_t coda = 0;
    if (run == 2) {
      coda = 1;
    } else if (run >= 3) {
      coda = run - 2;
    }
    bounds.push_back(vowels[s] + 1 + coda);
  }
  bounds.push_back(cv.size());

  std::vector<std::string> shapes;
  shapes.reserve(vowels.size());
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    shapes.emplace_back(cv.substr(bounds[s], bounds[s + 1] - bounds[s]));
  }
  return shapes;
}

std::vector<std::string> syllable_shapes(std::string_view word) { return split_cv(cv_encode(word)); }

std::vector<SyllablePattern> syllabify(std::string_view word) {
  const std::string cv = cv_encode(word);
  std::vector<SyllablePattern> out;
  if (cv.find('v') == std::string::npos) {
    out.push_back(SyllablePattern::Other);
    return out;
  }
  for (const auto& shape : split_cv(cv)) out.push_back(pattern_from_shape(shape));
  return out;
}

int count_syllables(std::string_view word) {
  int n = 0;
  for (char32_t c : word_letters(word)) {
    if (is_vowel(c)) ++n;
  }
  return n;
}

ClusterStats consonant_cluster_stats(std::string_view word) {
  ClusterStats stats;
  const std::string cv = cv_of_word(word);
  std::size_t run = 0;
  auto close_run = [&] {
    if (run >= 2) {
      ++stats.cluster_count;
      stats.total_length += static_cast<int>(run);
    }
    run = 0;
  };
  for (char sym : cv) {
    if (sym == 'c') {
      ++run;
    } else {
      close_run();
    }
  }
  close_run();
  if (stats.cluster_count > 0) {
    stats.mean_cluster_len = static_cast<double>(stats.total_length) / stats.cluster_count;
  }
  return stats;
}

}  // namespace ara::text
