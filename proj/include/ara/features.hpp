#pragma once

// The fixed-order 32-dimensional document feature vector:
//   [0, 7)   traditional count features
//   [7, 18)  syllable-pattern and consonant-cluster features
//   [18, 32) CrossNGO: bigram overlap vs hil..bcl, then trigram overlap
// The order is part of the model and CSV formats; never reorder.

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ara/corpus.hpp"
#include "ara/ngram.hpp"

namespace ara {

inline constexpr std::size_t kTraditionalCount = 7;
inline constexpr std::size_t kSyllableCount = 11;
inline constexpr std::size_t kTextFeatureCount = kTraditionalCount + kSyllableCount;
inline constexpr std::size_t kFeatureCount = kTextFeatureCount + ProfileSet::kSlots;
inline constexpr int kFeatureSchemaVersion = 1;

enum FeatureIndex : std::size_t {
  kUniqueWordCount = 0,
  kWordCount,
  kAvgWordLen,
  kAvgSyllablesPerWord,
  kSentenceCount,
  kAvgSentenceLen,
  kPolysyllableCount,
  kPatternV,
  kPatternCcvccc = kPatternV + 8,
  kClusterCount,
  kAvgClusterLen,
  kBigramOverlapFirst,
  kTrigramOverlapFirst = kBigramOverlapFirst + 7,
};

const std::array<std::string, kFeatureCount>& feature_names();
// CSV column header for feature i, e.g. "f02_word_count".
std::string feature_column(std::size_t i);

struct FeatureOptions {
  // Divide the nine pattern counts by the document's word count.
  bool normalize_syllable_patterns = false;
};

struct FeatureVector {
  std::string doc_id;
  LanguageCode language;
  Level level;
  std::array<double, kFeatureCount> values{};
};

// Throws ara::Error("empty document") when the text has no word tokens.
std::array<double, kTraditionalCount> traditional_features(const Document& doc);
std::array<double, kSyllableCount> syllable_features(const Document& doc, const FeatureOptions& options = {});
// Traditional followed by syllable features; independent of any profile.
std::array<double, kTextFeatureCount> text_features(const Document& doc, const FeatureOptions& options = {});

FeatureVector assemble(const Document& doc, const std::array<double, kTextFeatureCount>& text,
                       const std::array<double, ProfileSet::kSlots>& crossngo);
FeatureVector extract(const Document& doc, const ProfileSet& profiles, const FeatureOptions& options = {});
std::vector<FeatureVector> extract_all(const Corpus& corpus, const ProfileSet& profiles,
                                       const FeatureOptions& options = {}, std::size_t jobs = 1);

// CSV: header "doc_id,language,level,f01_...,f32_..."; values with six
// decimals; rows in the given order.
void write_feature_csv(std::span<const FeatureVector> rows, std::ostream& out);
std::vector<FeatureVector> read_feature_csv(std::istream& in);
std::vector<FeatureVector> read_feature_csv(const std::filesystem::path& path);

void export_dataset(const Corpus& corpus, const ProfileSet& profiles, const std::filesystem::path& path,
                    const FeatureOptions& options = {}, std::size_t jobs = 1);

}  // namespace ara
