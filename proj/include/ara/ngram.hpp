#pragma once

// Character n-gram language profiles, pairwise profile overlap, and the
// per-document cross-lingual n-gram overlap (CrossNGO) features.

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ara/corpus.hpp"
#include "json.hpp"

namespace ara {

inline constexpr double kDefaultTopFraction = 0.25;

// Contiguous length-n code point substrings of the lowercased word, in order
// of occurrence. n must be 2 or 3; shorter words yield nothing.
std::vector<std::string> char_ngrams(std::string_view word, int n);

// Sorted (gram, count) pairs over every word token of a text.
using GramCounts = std::vector<std::pair<std::string, std::size_t>>;
GramCounts count_grams(std::string_view text, int n);

class NgramProfile {
 public:
  // Retains the top ceil(top_fraction * |distinct grams|) grams by count,
  // ties broken lexicographically.
  static NgramProfile from_counts(LanguageCode language, int n, double top_fraction,
                                  const std::unordered_map<std::string, std::size_t>& counts);
  // Profile with an explicit retained list (cache files carry no counts).
  static NgramProfile from_grams(LanguageCode language, int n, double top_fraction, std::vector<std::string> grams);
  // Placeholder for a language with no training text; contains nothing.
  static NgramProfile empty(LanguageCode language, int n, double top_fraction);

  const LanguageCode& language() const { return language_; }
  int n() const { return n_; }
  double top_fraction() const { return top_fraction_; }
  // Retention order: count descending, then gram ascending.
  const std::vector<std::string>& grams() const { return grams_; }
  const std::unordered_map<std::string, std::size_t>& frequencies() const { return frequencies_; }
  std::size_t size() const { return grams_.size(); }
  bool contains(const std::string& gram) const { return set_.contains(gram); }

  nlohmann::ordered_json to_json() const;
  static NgramProfile from_json(const nlohmann::json& j);

 private:
  NgramProfile(LanguageCode language, int n, double top_fraction);

  LanguageCode language_;
  int n_;
  double top_fraction_;
  std::vector<std::string> grams_;
  std::unordered_map<std::string, std::size_t> frequencies_;
  std::unordered_set<std::string> set_;
};

// Counts grams over all documents of `language` (every level).
NgramProfile build_profile(const Corpus& corpus, const LanguageCode& language, int n,
                           double top_fraction = kDefaultTopFraction);
// Same, restricted to the given document indices.
NgramProfile build_profile(const Corpus& corpus, std::span<const std::size_t> indices, const LanguageCode& language,
                           int n, double top_fraction = kDefaultTopFraction);

// Overlap coefficient |A & B| / min(|A|, |B|) of the retained gram sets.
double profile_overlap(const NgramProfile& a, const NgramProfile& b);

struct OverlapMatrix {
  std::vector<LanguageCode> languages;
  int n = 0;
  std::vector<std::vector<double>> values;

  nlohmann::ordered_json to_json() const;
  std::string render() const;  // aligned text table
};

OverlapMatrix overlap_matrix(std::span<const NgramProfile> profiles);

// Bigram and trigram profiles for the seven feature languages.
class ProfileSet {
 public:
  static constexpr std::size_t kSlots = 2 * kFeatureLanguageCodes.size();

  // Throws when any (language, n) slot is missing or duplicated.
  explicit ProfileSet(std::vector<NgramProfile> profiles);

  // Slot order: bigram profiles in feature-language order, then trigram.
  const NgramProfile& slot(std::size_t i) const { return profiles_[i]; }
  const NgramProfile& get(const LanguageCode& language, int n) const;
  std::span<const NgramProfile> all() const { return profiles_; }

 private:
  std::vector<NgramProfile> profiles_;
};

// Builds all 14 profiles from the given document indices. Languages with no
// document among them get empty profiles, which score 0 for every document.
ProfileSet build_profile_set(const Corpus& corpus, std::span<const std::size_t> indices,
                             double top_fraction = kDefaultTopFraction);
ProfileSet build_profile_set(const Corpus& corpus, double top_fraction = kDefaultTopFraction);

void save_profile(const NgramProfile& profile, const std::filesystem::path& path);
NgramProfile load_profile(const std::filesystem::path& path);
// <dir>/<lang>.<n>.json for every slot.
void save_profile_set(const ProfileSet& profiles, const std::filesystem::path& dir);
ProfileSet load_profile_set(const std::filesystem::path& dir);

// Distinct bigrams and trigrams of one document.
struct DocumentGrams {
  std::vector<std::string> bigrams;   // sorted, unique
  std::vector<std::string> trigrams;  // sorted, unique
};
DocumentGrams document_grams(std::string_view text);

// For each slot: |distinct doc grams in profile| / |distinct doc grams|, or
// 0 when the document has no grams of that length.
std::array<double, ProfileSet::kSlots> crossngo_features(const DocumentGrams& grams, const ProfileSet& profiles);
std::array<double, ProfileSet::kSlots> crossngo_features(const Document& doc, const ProfileSet& profiles);

}  // namespace ara
