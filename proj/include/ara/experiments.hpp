#pragma once

// Hierarchy-based cross-lingual experiments: stratified folds, the five
// training setups, the target x setup x seed grid, and importance reports.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ara/corpus.hpp"
#include "ara/features.hpp"
#include "ara/forest.hpp"
#include "ara/ngram.hpp"
#include "ara/stats.hpp"
#include "json.hpp"

namespace ara {

enum class Setup { L, LP, LN, LPN, All };

inline constexpr std::array<Setup, 5> kSetups = {Setup::L, Setup::LP, Setup::LN, Setup::LPN, Setup::All};

std::string_view to_string(Setup setup);  // "L", "L+P", "L+N", "L+P+N", "*L"
Setup parse_setup(std::string_view s);
std::string_view file_tag(Setup setup);   // "L", "LP", "LN", "LPN", "all"

// Fold id in [0, k) for every sample. Within each level the indices are
// shuffled and dealt round-robin; each level continues the deal where the
// previous one stopped, so per-level fold sizes differ by at most one.
std::vector<std::size_t> stratified_kfold(std::span<const Level> labels, std::size_t k, std::uint64_t seed,
                                          const WarningSink& warn = {});

// Training documents for one fold: the target's training-fold documents plus
// every document of the auxiliary languages the setup calls for.
std::vector<std::size_t> assemble_training(Setup setup, const LanguageCode& target,
                                           std::span<const std::size_t> fold_train, const Corpus& corpus,
                                           const FamilyTree& tree);

// Languages whose documents the setup adds for `target`.
std::vector<LanguageCode> auxiliary_languages(Setup setup, const LanguageCode& target, const FamilyTree& tree);

// Per-document values that do not depend on the training split.
class CorpusCache {
 public:
  explicit CorpusCache(const Corpus& corpus, FeatureOptions options = {}, std::size_t jobs = 1);

  const Corpus& corpus() const { return *corpus_; }
  const std::array<double, kTextFeatureCount>& text_features(std::size_t doc) const { return text_[doc]; }
  const DocumentGrams& grams(std::size_t doc) const { return grams_[doc]; }
  const GramCounts& counts(std::size_t doc, int n) const { return n == 2 ? bigrams_[doc] : trigrams_[doc]; }

  // Profiles for a training split: the target slot from `target_train`
  // only, every other slot from the full corpus of that language.
  ProfileSet profiles_for(const LanguageCode& target, std::span<const std::size_t> target_train,
                          double top_fraction) const;
  FeatureVector features(std::size_t doc, const ProfileSet& profiles) const;

 private:
  const Corpus* corpus_;
  std::vector<std::array<double, kTextFeatureCount>> text_;
  std::vector<DocumentGrams> grams_;
  std::vector<GramCounts> bigrams_;
  std::vector<GramCounts> trigrams_;
  // Whole-corpus gram counts per feature language; bigram slots first.
  std::vector<std::unordered_map<std::string, std::size_t>> full_counts_;
  std::vector<bool> language_present_;
};

struct ExperimentConfig {
  LanguageCode target{"hil"};
  Setup setup = Setup::L;
  std::size_t k_folds = 5;
  std::uint64_t seed = 0;
  ForestParams forest;
  double profile_fraction = kDefaultTopFraction;
  // Downsample each auxiliary language to its smallest level before merging.
  bool balance = false;
  // Also fit one model on the full target corpus plus auxiliaries.
  bool fit_final_model = false;
  std::size_t jobs = 1;

  void validate() const;
};

struct FoldRecord {
  std::vector<std::size_t> train;  // corpus indices
  std::vector<std::size_t> test;   // corpus indices, target language only
  double accuracy = 0.0;
};

struct SetupResult {
  LanguageCode target{"hil"};
  Setup setup = Setup::L;
  std::uint64_t seed = 0;
  std::vector<FoldRecord> folds;
  double mean_accuracy = 0.0;
  std::optional<Forest> final_model;

  std::vector<double> fold_accuracies() const;
};

SetupResult run_setup(const ExperimentConfig& config, const CorpusCache& cache, const FamilyTree& tree);
SetupResult run_setup(const ExperimentConfig& config, const Corpus& corpus, const FamilyTree& tree);

struct GridOptions {
  std::vector<LanguageCode> targets = target_languages();
  std::vector<Setup> setups{kSetups.begin(), kSetups.end()};
  std::vector<std::uint64_t> seeds{0};
  std::size_t k_folds = 5;
  ForestParams forest;
  double profile_fraction = kDefaultTopFraction;
  bool balance = false;
  bool fit_final_models = false;
  std::size_t jobs = 1;
};

struct GridCell {
  LanguageCode target{"hil"};
  Setup setup = Setup::L;
  std::uint64_t seed = 0;
  std::optional<SetupResult> result;
  std::string error;  // set when the cell could not run
};

struct GridReport {
  std::vector<LanguageCode> targets;
  std::vector<Setup> setups;
  std::vector<std::uint64_t> seeds;
  std::vector<GridCell> cells;  // target-major, then setup, then seed

  // Mean accuracy over seeds; empty when any seed failed for the cell.
  std::optional<double> mean_accuracy(const LanguageCode& target, Setup setup) const;
  // Per-target means for one setup, in target order. Throws if any is missing.
  std::vector<double> column(Setup setup) const;

  nlohmann::ordered_json to_json() const;
  std::string render() const;  // targets as rows, setups as columns
};

// Cells are independent and run on `options.jobs` threads; the report does
// not depend on the thread count. Cells whose corpora are missing carry an
// error and do not stop the others.
GridReport run_grid(const Corpus& corpus, const FamilyTree& tree, const GridOptions& options);

struct RankedFeature {
  std::string name;
  double importance = 0.0;
};

// Top-k features by MDI, descending, ties broken by name.
std::vector<RankedFeature> top_features(const Forest& forest, std::size_t k);
nlohmann::ordered_json importance_to_json(const std::string& label, std::span<const RankedFeature> rows);
std::string render_importance(const std::string& label, std::span<const RankedFeature> rows);

}  // namespace ara
