#include "ara/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "ara/error.hpp"
#include "ara/parallel.hpp"
#include "ara/rng.hpp"

namespace ara {
namespace {

// Stream ids for derive_seed; part of the reproducibility contract.
constexpr std::uint64_t kFoldStream = 0xF01D;
constexpr std::uint64_t kFinalModelStream = 99;
constexpr std::uint64_t kFoldModelStreamBase = 100;
constexpr std::uint64_t kBalanceStreamBase = 200;

std::size_t feature_slot(const LanguageCode& language) {
  for (std::size_t i = 0; i < kFeatureLanguageCodes.size(); ++i) {
    if (kFeatureLanguageCodes[i] == language.str()) return i;
  }
  return kFeatureLanguageCodes.size();
}

void merge_counts(const GramCounts& counts, std::unordered_map<std::string, std::size_t>& into) {
  for (const auto& [gram, c] : counts) into[gram] += c;
}

// Downsamples every level of one language to that language's smallest
// non-empty level.
std::vector<std::size_t> balance_language(const Corpus& corpus, std::vector<std::size_t> docs, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, kNumLevels> by_level;
  for (std::size_t i : docs) by_level[level_index(corpus[i].level)].push_back(i);
  std::size_t smallest = SIZE_MAX;
  for (const auto& v : by_level) {
    if (!v.empty()) smallest = std::min(smallest, v.size());
  }
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < kNumLevels; ++l) {
    auto& v = by_level[l];
    Rng rng(derive_seed(seed, l));
    rng.shuffle(v);
    v.resize(std::min(v.size(), smallest));
    std::sort(v.begin(), v.end());
    out.insert(out.end(), v.begin(), v.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> auxiliary_documents(Setup setup, const LanguageCode& target, const Corpus& corpus,
                                             const FamilyTree& tree, std::optional<std::uint64_t> balance_seed) {
  std::vector<std::size_t> out;
  for (const auto& lang : auxiliary_languages(setup, target, tree)) {
    auto docs = corpus.indices_of(lang);
    if (docs.empty()) {
      throw Error("setup " + std::string(to_string(setup)) + " for " + target.str() + " needs " + lang.str() +
                  " documents, but the corpus has none");
    }
    if (balance_seed) docs = balance_language(corpus, std::move(docs), derive_seed(*balance_seed, kBalanceStreamBase + feature_slot(lang)));
    out.insert(out.end(), docs.begin(), docs.end());
  }
  return out;
}

Dataset make_dataset(const CorpusCache& cache, std::span<const std::size_t> docs, const ProfileSet& profiles) {
  Dataset data(kFeatureCount);
  for (std::size_t i : docs) {
    const FeatureVector fv = cache.features(i, profiles);
    data.add(fv.values, fv.level);
  }
  return data;
}

std::string format_accuracy(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string_view to_string(Setup setup) {
  switch (setup) {
    case Setup::L: return "L";
    case Setup::LP: return "L+P";
    case Setup::LN: return "L+N";
    case Setup::LPN: return "L+P+N";
    case Setup::All: return "*L";
  }
  return "?";
}

std::string_view file_tag(Setup setup) {
  switch (setup) {
    case Setup::L: return "L";
    case Setup::LP: return "LP";
    case Setup::LN: return "LN";
    case Setup::LPN: return "LPN";
    case Setup::All: return "all";
  }
  return "?";
}

Setup parse_setup(std::string_view s) {
  for (Setup setup : kSetups) {
    if (to_string(setup) == s || file_tag(setup) == s) return setup;
  }
  throw Error("unknown setup '" + std::string(s) + "' (expected L, L+P, L+N, L+P+N or *L)");
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> stratified_kfold(std::span<const Level> labels, std::size_t k, std::uint64_t seed,
                                          const WarningSink& warn) {
  if (k < 2) throw Error("k must be at least 2");
  if (labels.empty()) throw Error("cannot split an empty label set");
  std::vector<std::size_t> fold(labels.size(), 0);
  std::size_t offset = 0;
  for (Level level : kLevels) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == level) members.push_back(i);
    }
    if (members.empty()) continue;
    if (members.size() < k && warn) {
      warn("level " + std::string(to_string(level)) + " has " + std::to_string(members.size()) +
           " samples, fewer than " + std::to_string(k) + " folds");
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(level)));
    rng.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j) fold[members[j]] = (offset + j) % k;
    offset = (offset + members.size()) % k;
  }
  return fold;
}

std::vector<LanguageCode> auxiliary_languages(Setup setup, const LanguageCode& target, const FamilyTree& tree) {
  const FamilyRelations rel = family_lookup(tree, target);
  auto parent = [&]() -> LanguageCode {
    if (!rel.parent) throw Error(target.str() + " has no parent language in the family tree");
    return *rel.parent;
  };
  std::vector<LanguageCode> out;
  switch (setup) {
    case Setup::L:
      break;
    case Setup::LP:
      out.push_back(parent());
      break;
    case Setup::LN:
      out.push_back(rel.national);
      break;
    case Setup::LPN:
      out.push_back(parent());
      out.push_back(rel.national);
      break;
    case Setup::All:
      for (const auto& [code, entry] : tree.entries()) out.push_back(code);
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), target), out.end());
  return out;
}

std::vector<std::size_t> assemble_training(Setup setup, const LanguageCode& target,
                                           std::span<const std::size_t> fold_train, const Corpus& corpus,
                                           const FamilyTree& tree) {
  std::vector<std::size_t> out(fold_train.begin(), fold_train.end());
  const auto aux = auxiliary_documents(setup, target, corpus, tree, std::nullopt);
  out.insert(out.end(), aux.begin(), aux.end());
  return out;
}

// ---------------------------------------------------------------------------

CorpusCache::CorpusCache(const Corpus& corpus, FeatureOptions options, std::size_t jobs)
    : corpus_(&corpus),
      text_(corpus.size()),
      grams_(corpus.size()),
      bigrams_(corpus.size()),
      trigrams_(corpus.size()) {
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    const Document& doc = corpus[i];
    text_[i] = ara::text_features(doc, options);
    bigrams_[i] = count_grams(doc.text, 2);
    trigrams_[i] = count_grams(doc.text, 3);
    for (const auto& [g, c] : bigrams_[i]) grams_[i].bigrams.push_back(g);
    for (const auto& [g, c] : trigrams_[i]) grams_[i].trigrams.push_back(g);
  });
  const std::size_t langs = kFeatureLanguageCodes.size();
  full_counts_.resize(2 * langs);
  language_present_.assign(langs, false);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::size_t l = feature_slot(corpus[i].language);
    if (l == langs) continue;
    language_present_[l] = true;
    merge_counts(bigrams_[i], full_counts_[l]);
    merge_counts(trigrams_[i], full_counts_[langs + l]);
  }
}

ProfileSet CorpusCache::profiles_for(const LanguageCode& target, std::span<const std::size_t> target_train,
                                     double top_fraction) const {
  const std::size_t langs = kFeatureLanguageCodes.size();
  std::vector<NgramProfile> profiles;
  for (int n : {2, 3}) {
    for (std::size_t l = 0; l < langs; ++l) {
      LanguageCode code(kFeatureLanguageCodes[l]);
      if (code == target) {
        std::unordered_map<std::string, std::size_t> merged;
        for (std::size_t i : target_train) merge_counts(counts(i, n), merged);
        profiles.push_back(target_train.empty() ? NgramProfile::empty(code, n, top_fraction)
                                                : NgramProfile::from_counts(code, n, top_fraction, merged));
        continue;
      }
      const std::size_t slot = (n == 2 ? 0 : langs) + l;
      profiles.push_back(language_present_[l] ? NgramProfile::from_counts(code, n, top_fraction, full_counts_[slot])
                                              : NgramProfile::empty(code, n, top_fraction));
    }
  }
  return ProfileSet(std::move(profiles));
}

FeatureVector CorpusCache::features(std::size_t doc, const ProfileSet& profiles) const {
  return assemble((*corpus_)[doc], text_[doc], crossngo_features(grams_[doc], profiles));
}

// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (k_folds < 2) throw Error("k_folds must be at least 2");
  if (!(profile_fraction > 0.0 && profile_fraction <= 1.0)) throw Error("profile fraction must be in (0, 1]");
  forest.validate();
}

std::vector<double> SetupResult::fold_accuracies() const {
  std::vector<double> out;
  for (const auto& f : folds) out.push_back(f.accuracy);
  return out;
}

SetupResult run_setup(const ExperimentConfig& config, const CorpusCache& cache, const FamilyTree& tree) {
  config.validate();
  const Corpus& corpus = cache.corpus();
  const auto target_docs = corpus.indices_of(config.target);
  if (target_docs.empty()) throw Error("no documents for target language " + config.target.str());
  if (target_docs.size() < config.k_folds) {
    throw Error(config.target.str() + " has fewer documents than folds");
  }
  std::optional<std::uint64_t> balance_seed;
  if (config.balance) balance_seed.emplace(config.seed);
  const auto aux = auxiliary_documents(config.setup, config.target, corpus, tree, balance_seed);

  std::vector<Level> labels;
  for (std::size_t i : target_docs) labels.push_back(corpus[i].level);
  const auto fold_of = stratified_kfold(labels, config.k_folds, derive_seed(config.seed, kFoldStream));

  SetupResult result;
  result.target = config.target;
  result.setup = config.setup;
  result.seed = config.seed;

  for (std::size_t f = 0; f < config.k_folds; ++f) {
    FoldRecord fold;
    std::vector<std::size_t> target_train;
    for (std::size_t j = 0; j < target_docs.size(); ++j) {
      (fold_of[j] == f ? fold.test : target_train).push_back(target_docs[j]);
    }
    fold.train = target_train;
    fold.train.insert(fold.train.end(), aux.begin(), aux.end());

    const ProfileSet profiles = cache.profiles_for(config.target, target_train, config.profile_fraction);
    ForestParams params = config.forest;
    params.seed = derive_seed(config.seed, kFoldModelStreamBase + f);
    const Forest forest = fit(make_dataset(cache, fold.train, profiles), params, {feature_names().begin(), feature_names().end()}, config.jobs);

    std::size_t correct = 0;
    for (std::size_t i : fold.test) {
      const FeatureVector fv = cache.features(i, profiles);
      if (predict(forest, fv.values) == fv.level) ++correct;
    }
    fold.accuracy = static_cast<double>(correct) / static_cast<double>(fold.test.size());
    result.folds.push_back(std::move(fold));
  }
  double sum = 0.0;
  for (const auto& f : result.folds) sum += f.accuracy;
  result.mean_accuracy = sum / static_cast<double>(result.folds.size());

  if (config.fit_final_model) {
    std::vector<std::size_t> train = target_docs;
    train.insert(train.end(), aux.begin(), aux.end());
    const ProfileSet profiles = cache.profiles_for(config.target, target_docs, config.profile_fraction);
    ForestParams params = config.forest;
    params.seed = derive_seed(config.seed, kFinalModelStream);
    result.final_model = fit(make_dataset(cache, train, profiles), params, {feature_names().begin(), feature_names().end()}, config.jobs);
  }
  return result;
}

SetupResult run_setup(const ExperimentConfig& config, const Corpus& corpus, const FamilyTree& tree) {
  const CorpusCache cache(corpus, {}, config.jobs);
  return run_setup(config, cache, tree);
}

// ---------------------------------------------------------------------------

GridReport run_grid(const Corpus& corpus, const FamilyTree& tree, const GridOptions& options) {
  if (options.seeds.empty()) throw Error("at least one seed is required");
  if (options.targets.empty() || options.setups.empty()) throw Error("grid has no cells");

  GridReport report;
  report.targets = options.targets;
  report.setups = options.setups;
  report.seeds = options.seeds;
  for (const auto& target : options.targets) {
    for (Setup setup : options.setups) {
      for (auto seed : options.seeds) report.cells.push_back(GridCell{target, setup, seed, std::nullopt, {}});
    }
  }

  const CorpusCache cache(corpus, {}, options.jobs);
  parallel_for(report.cells.size(), options.jobs, [&](std::size_t c) {
    GridCell& cell = report.cells[c];
    ExperimentConfig config;
    config.target = cell.target;
    config.setup = cell.setup;
    config.seed = cell.seed;
    config.k_folds = options.k_folds;
    config.forest = options.forest;
    config.profile_fraction = options.profile_fraction;
    config.balance = options.balance;
    config.fit_final_model = options.fit_final_models;
    config.jobs = 1;
    try {
      cell.result = run_setup(config, cache, tree);
    } catch (const Error& e) {
      cell.error = e.what();
    }
  });
  return report;
}

std::optional<double> GridReport::mean_accuracy(const LanguageCode& target, Setup setup) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& cell : cells) {
    if (cell.target != target || cell.setup != setup) continue;
    if (!cell.result) return std::nullopt;
    sum += cell.result->mean_accuracy;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::vector<double> GridReport::column(Setup setup) const {
  std::vector<double> out;
  for (const auto& target : targets) {
    const auto v = mean_accuracy(target, setup);
    if (!v) throw Error("no accuracy for " + target.str() + " under setup " + std::string(to_string(setup)));
    out.push_back(*v);
  }
  return out;
}

nlohmann::ordered_json GridReport::to_json() const {
  nlohmann::ordered_json j;
  std::vector<std::string> target_codes, setup_names;
  for (const auto& t : targets) target_codes.push_back(t.str());
  for (Setup s : setups) setup_names.emplace_back(to_string(s));
  j["targets"] = target_codes;
  j["setups"] = setup_names;
  j["seeds"] = seeds;

  nlohmann::ordered_json cell_list = nlohmann::ordered_json::array();
  for (const auto& cell : cells) {
    nlohmann::ordered_json c;
    c["target"] = cell.target.str();
    c["setup"] = std::string(to_string(cell.setup));
    c["seed"] = cell.seed;
    if (cell.result) {
      std::vector<std::size_t> n_train, n_test;
      for (const auto& f : cell.result->folds) {
        n_train.push_back(f.train.size());
        n_test.push_back(f.test.size());
      }
      c["fold_accuracies"] = cell.result->fold_accuracies();
      c["mean_accuracy"] = cell.result->mean_accuracy;
      c["n_train"] = n_train;
      c["n_test"] = n_test;
    } else {
      c["error"] = cell.error;
    }
    cell_list.push_back(std::move(c));
  }
  j["cells"] = std::move(cell_list);

  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  for (const auto& target : targets) {
    for (Setup setup : setups) {
      nlohmann::ordered_json s;
      s["target"] = target.str();
      s["setup"] = std::string(to_string(setup));
      std::vector<double> per_seed;
      for (const auto& cell : cells) {
        if (cell.target == target && cell.setup == setup && cell.result) per_seed.push_back(cell.result->mean_accuracy);
      }
      const auto mean = mean_accuracy(target, setup);
      s["mean_accuracy"] = mean ? nlohmann::ordered_json(*mean) : nlohmann::ordered_json(nullptr);
      s["per_seed"] = per_seed;
      summary.push_back(std::move(s));
    }
  }
  j["summary"] = std::move(summary);
  return j;
}

std::string GridReport::render() const {
  std::ostringstream os;
  os << std::left << std::setw(10) << "Language" << std::right;
  for (Setup s : setups) os << std::setw(10) << to_string(s);
  os << '\n';
  for (const auto& target : targets) {
    std::optional<double> best;
    for (Setup s : setups) {
      const auto v = mean_accuracy(target, s);
      if (v && (!best || *v > *best)) best = v;
    }
    std::string code = target.str();
    std::transform(code.begin(), code.end(), code.begin(), [](unsigned char c) { return std::toupper(c); });
    os << std::left << std::setw(10) << code << std::right;
    for (Setup s : setups) {
      const auto v = mean_accuracy(target, s);
      std::string text = v ? format_accuracy(*v) : "n/a";
      if (v && best && *v == *best) text = "[" + text + "]";
      os << std::setw(10) << text;
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

std::vector<RankedFeature> top_features(const Forest& forest, std::size_t k) {
  if (k < 1) throw Error("k must be at least 1");
  const auto imp = mdi_importance(forest);
  std::vector<RankedFeature> ranked;
  for (std::size_t f = 0; f < imp.size(); ++f) ranked.push_back({forest.feature_names()[f], imp[f]});
  std::sort(ranked.begin(), ranked.end(), [](const RankedFeature& a, const RankedFeature& b) {
    if (a.importance != b.importance) return a.importance > b.importance;
    return a.name < b.name;
  });
  ranked.resize(std::min(k, ranked.size()));
  return ranked;
}

nlohmann::ordered_json importance_to_json(const std::string& label, std::span<const RankedFeature> rows) {
  nlohmann::ordered_json j;
  j["label"] = label;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& r : rows) list.push_back({{"feature", r.name}, {"importance", r.importance}});
  j["features"] = std::move(list);
  return j;
}

std::string render_importance(const std::string& label, std::span<const RankedFeature> rows) {
  std::ostringstream os;
  std::size_t width = label.size();
  for (const auto& r : rows) width = std::max(width, r.name.size());
  os << label << '\n' << std::fixed << std::setprecision(3);
  for (const auto& r : rows) os << std::left << std::setw(static_cast<int>(width) + 2) << r.name << std::right << r.importance << '\n';
  return os.str();
}

}  // namespace ara
