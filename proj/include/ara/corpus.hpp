#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ara {

// ---------------------------------------------------------------------------
// Levels

enum class Level { L1 = 1, L2 = 2, L3 = 3 };

inline constexpr std::size_t kNumLevels = 3;
inline constexpr std::array<Level, kNumLevels> kLevels = {Level::L1, Level::L2, Level::L3};

std::string_view to_string(Level level);
Level parse_level(std::string_view label);  // throws ara::Error
inline constexpr std::size_t level_index(Level level) { return static_cast<std::size_t>(level) - 1; }
inline constexpr Level level_from_index(std::size_t i) { return static_cast<Level>(i + 1); }

// ---------------------------------------------------------------------------
// Languages

// Three lowercase ASCII letters. Registration is checked separately.
class LanguageCode {
 public:
  explicit LanguageCode(std::string_view code);

  const std::string& str() const { return code_; }
  auto operator<=>(const LanguageCode&) const = default;

 private:
  std::string code_;
};

// The seven languages with a CrossNGO feature slot, in slot order.
inline constexpr std::array<std::string_view, 7> kFeatureLanguageCodes = {"hil", "msb", "krj", "bto",
                                                                          "tgl", "ceb", "bcl"};
// Languages with a leveled target corpus.
inline constexpr std::array<std::string_view, 4> kTargetLanguageCodes = {"hil", "msb", "krj", "bto"};

std::vector<LanguageCode> feature_languages();
std::vector<LanguageCode> target_languages();

class LanguageRegistry {
 public:
  LanguageRegistry() = default;
  explicit LanguageRegistry(std::vector<LanguageCode> codes);

  static LanguageRegistry defaults();  // the seven feature languages

  bool contains(const LanguageCode& code) const;
  // Validates format and registration in one step.
  LanguageCode parse(std::string_view code) const;
  const std::vector<LanguageCode>& codes() const { return codes_; }

 private:
  std::vector<LanguageCode> codes_;  // sorted, unique
};

// ---------------------------------------------------------------------------
// Documents and corpora

struct Document {
  std::string id;
  LanguageCode language;
  Level level;
  std::string text;
};

// Immutable collection ordered by (language, level, id).
class Corpus {
 public:
  Corpus() = default;
  // Validates ids, text and (language, id) uniqueness, then sorts.
  explicit Corpus(std::vector<Document> documents);

  std::span<const Document> documents() const { return documents_; }
  const Document& operator[](std::size_t i) const { return documents_[i]; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  std::vector<LanguageCode> languages() const;
  bool has_language(const LanguageCode& language) const;
  std::vector<std::size_t> indices_of(const LanguageCode& language) const;

 private:
  std::vector<Document> documents_;
};

using WarningSink = std::function<void(const std::string&)>;

struct LoadOptions {
  LanguageRegistry registry = LanguageRegistry::defaults();
  WarningSink warn;  // unset: warnings are dropped
};

Corpus load_corpus(const std::filesystem::path& manifest_path, const LoadOptions& options = {});
Corpus parse_corpus(std::istream& in, const LoadOptions& options = {});
void write_manifest(const Corpus& corpus, std::ostream& out);

// Reads <root>/<lang>/<level>/<id>.txt files into a corpus.
Corpus import_directory(const std::filesystem::path& root, const LoadOptions& options = {});

// ---------------------------------------------------------------------------
// Statistics

struct LevelStats {
  std::size_t document_count = 0;
  double mean_word_count = 0.0;
  double mean_sentence_count = 0.0;
  std::size_t vocabulary = 0;  // distinct lowercased word tokens
  std::size_t word_tokens = 0;
};

// Throws when the language has no documents. All three levels are present in
// the result, with zeros for empty levels.
std::map<Level, LevelStats> corpus_stats(const Corpus& corpus, const LanguageCode& language);

nlohmann::ordered_json stats_to_json(const LanguageCode& language, const std::map<Level, LevelStats>& stats);
std::string render_stats_table(const std::vector<std::pair<LanguageCode, std::map<Level, LevelStats>>>& rows);

// ---------------------------------------------------------------------------
// Family tree

struct FamilyEntry {
  std::string name;
  std::optional<LanguageCode> parent;
  LanguageCode national;
};

struct FamilyRelations {
  std::optional<LanguageCode> parent;
  LanguageCode national;
};

class FamilyTree {
 public:
  FamilyTree() = default;
  // Validates references and acyclicity of parent links.
  explicit FamilyTree(std::map<LanguageCode, FamilyEntry> entries);

  static FamilyTree from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;

  const std::map<LanguageCode, FamilyEntry>& entries() const { return entries_; }
  bool contains(const LanguageCode& code) const { return entries_.contains(code); }
  LanguageRegistry registry() const;

 private:
  std::map<LanguageCode, FamilyEntry> entries_;
};

FamilyTree load_family_tree(const std::filesystem::path& path);

FamilyRelations family_lookup(const FamilyTree& tree, const LanguageCode& language);

}  // namespace ara
