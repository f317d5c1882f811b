#include "ara/features.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "ara/error.hpp"
#include "ara/parallel.hpp"
#include "ara/textproc.hpp"

namespace ara {
namespace {

std::array<std::string, kFeatureCount> make_names() {
  std::array<std::string, kFeatureCount> names = {
      "unique_word_count", "word_count", "avg_word_len", "avg_syllables_per_word", "sentence_count",
      "avg_sentence_len", "polysyllable_count"};
  std::size_t i = kPatternV;
  for (auto p : text::kNamedPatterns) names[i++] = "pattern_" + std::string(text::to_string(p));
  names[kClusterCount] = "cluster_count";
  names[kAvgClusterLen] = "avg_cluster_len";
  for (std::size_t l = 0; l < kFeatureLanguageCodes.size(); ++l) {
    names[kBigramOverlapFirst + l] = "bigram_overlap_" + std::string(kFeatureLanguageCodes[l]);
    names[kTrigramOverlapFirst + l] = "trigram_overlap_" + std::string(kFeatureLanguageCodes[l]);
  }
  return names;
}

std::vector<std::string> words_of(const Document& doc) {
  auto words = text::tokenize_words(doc.text);
  if (words.empty()) throw Error("empty document '" + doc.id + "'");
  return words;
}

void write_csv_field(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (quoted) throw Error("feature CSV line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
  static const auto names = make_names();
  return names;
}

std::string feature_column(std::size_t i) {
  char prefix[8];
  std::snprintf(prefix, sizeof prefix, "f%02zu_", i + 1);
  return prefix + feature_names().at(i);
}

std::array<double, kTraditionalCount> traditional_features(const Document& doc) {
  const auto words = words_of(doc);
  const auto sentences = text::tokenize_sentences(doc.text);
  std::unordered_set<std::string> unique(words.begin(), words.end());

  std::size_t letters = 0;
  std::size_t syllables = 0;
  std::size_t polysyllables = 0;
  for (const auto& w : words) {
    letters += text::letter_count(w);
    const int s = text::count_syllables(w);
    syllables += static_cast<std::size_t>(s);
    if (s >= 3) ++polysyllables;
  }
  const auto n = static_cast<double>(words.size());
  const auto n_sent = static_cast<double>(sentences.size());
  return {static_cast<double>(unique.size()),
          n,
          static_cast<double>(letters) / n,
          static_cast<double>(syllables) / n,
          n_sent,
          sentences.empty() ? 0.0 : n / n_sent,
          static_cast<double>(polysyllables)};
}

std::array<double, kSyllableCount> syllable_features(const Document& doc, const FeatureOptions& options) {
  const auto words = words_of(doc);
  std::array<double, kSyllableCount> out{};
  int clusters = 0;
  int cluster_units = 0;
  for (const auto& w : words) {
    const auto cs = text::consonant_cluster_stats(w);
    clusters += cs.cluster_count;
    cluster_units += cs.total_length;
    // Vowel-less tokens ("ng") have no syllables to classify.
    if (text::count_syllables(w) == 0) continue;
    for (auto p : text::syllabify(w)) {
      if (p != text::SyllablePattern::Other) out[static_cast<std::size_t>(p)] += 1.0;
    }
  }
  if (options.normalize_syllable_patterns) {
    for (std::size_t i = 0; i < text::kNamedPatternCount; ++i) out[i] /= static_cast<double>(words.size());
  }
  out[9] = clusters;
  out[10] = clusters > 0 ? static_cast<double>(cluster_units) / clusters : 0.0;
  return out;
}

std::array<double, kTextFeatureCount> text_features(const Document& doc, const FeatureOptions& options) {
  std::array<double, kTextFeatureCount> out{};
  const auto trad = traditional_features(doc);
  const auto syl = syllable_features(doc, options);
  std::copy(trad.begin(), trad.end(), out.begin());
  std::copy(syl.begin(), syl.end(), out.begin() + kTraditionalCount);
  return out;
}

FeatureVector assemble(const Document& doc, const std::array<double, kTextFeatureCount>& text,
                       const std::array<double, ProfileSet::kSlots>& crossngo) {
  FeatureVector fv{doc.id, doc.language, doc.level, {}};
  std::copy(text.begin(), text.end(), fv.values.begin());
  std::copy(crossngo.begin(), crossngo.end(), fv.values.begin() + kTextFeatureCount);
  return fv;
}

FeatureVector extract(const Document& doc, const ProfileSet& profiles, const FeatureOptions& options) {
  return assemble(doc, text_features(doc, options), crossngo_features(doc, profiles));
}

std::vector<FeatureVector> extract_all(const Corpus& corpus, const ProfileSet& profiles,
                                       const FeatureOptions& options, std::size_t jobs) {
  std::vector<std::optional<FeatureVector>> slots(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) { slots[i] = extract(corpus[i], profiles, options); });
  std::vector<FeatureVector> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

void write_feature_csv(std::span<const FeatureVector> rows, std::ostream& out) {
  out << "doc_id,language,level";
  for (std::size_t i = 0; i < kFeatureCount; ++i) out << ',' << feature_column(i);
  out << '\n';
  char buf[64];
  for (const auto& row : rows) {
    write_csv_field(out, row.doc_id);
    out << ',' << row.language.str() << ',' << to_string(row.level);
    for (double v : row.values) {
      std::snprintf(buf, sizeof buf, "%.6f", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

std::vector<FeatureVector> read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("feature CSV is empty");
  const auto header = split_csv_line(line, 1);
  if (header.size() != 3 + kFeatureCount || header[0] != "doc_id" || header[1] != "language" ||
      header[2] != "level") {
    throw Error("feature CSV header does not match the expected layout");
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (header[3 + i] != feature_column(i)) {
      throw Error("feature CSV column " + std::to_string(4 + i) + " is '" + header[3 + i] + "', expected '" +
                  feature_column(i) + "'");
    }
  }
  std::vector<FeatureVector> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line, line_no);
    const std::string where = "feature CSV line " + std::to_string(line_no) + ": ";
    if (fields.size() != header.size()) throw Error(where + "wrong number of fields");
    try {
      FeatureVector fv{fields[0], LanguageCode(fields[1]), parse_level(fields[2]), {}};
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        std::size_t used = 0;
        fv.values[i] = std::stod(fields[3 + i], &used);
        if (used != fields[3 + i].size()) throw Error("bad number '" + fields[3 + i] + "'");
      }
      rows.push_back(std::move(fv));
    } catch (const Error& e) {
      throw Error(where + e.what());
    } catch (const std::logic_error&) {
      throw Error(where + "bad number");
    }
  }
  return rows;
}

std::vector<FeatureVector> read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  return read_feature_csv(in);
}

void export_dataset(const Corpus& corpus, const ProfileSet& profiles, const std::filesystem::path& path,
                    const FeatureOptions& options, std::size_t jobs) {
  const auto rows = extract_all(corpus, profiles, options, jobs);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_feature_csv(rows, out);
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace ara
