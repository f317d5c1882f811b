#include "ara/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "ara/error.hpp"
#include "ara/textproc.hpp"
#include "utf8.hpp"

namespace ara {
namespace {

void check_order(int n) {
  if (n != 2 && n != 3) throw Error("n-gram order must be 2 or 3, got " + std::to_string(n));
}

std::size_t order_slot(int n) { return n == 2 ? 0 : 1; }

std::size_t language_slot(const LanguageCode& language) {
  for (std::size_t i = 0; i < kFeatureLanguageCodes.size(); ++i) {
    if (kFeatureLanguageCodes[i] == language.str()) return i;
  }
  throw Error("language " + language.str() + " has no CrossNGO feature slot");
}

void add_word_grams(std::u32string_view word, int n, std::unordered_map<std::string, std::size_t>& counts) {
  if (word.size() < static_cast<std::size_t>(n)) return;
  for (std::size_t i = 0; i + n <= word.size(); ++i) ++counts[utf8::encode(word.substr(i, n))];
}

std::u32string lowered(std::string_view word) {
  std::u32string cps = utf8::decode(word);
  for (auto& cp : cps) cp = utf8::to_lower(cp);
  return cps;
}

void accumulate_text(std::string_view text, int n, std::unordered_map<std::string, std::size_t>& counts) {
  for (const auto& word : text::tokenize_words(text)) add_word_grams(lowered(word), n, counts);
}

}  // namespace

std::vector<std::string> char_ngrams(std::string_view word, int n) {
  check_order(n);
  const std::u32string cps = lowered(word);
  std::vector<std::string> grams;
  if (cps.size() < static_cast<std::size_t>(n)) return grams;
  for (std::size_t i = 0; i + n <= cps.size(); ++i) grams.push_back(utf8::encode(std::u32string_view(cps).substr(i, n)));
  return grams;
}

GramCounts count_grams(std::string_view text, int n) {
  check_order(n);
  std::unordered_map<std::string, std::size_t> counts;
  accumulate_text(text, n, counts);
  GramCounts out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

NgramProfile::NgramProfile(LanguageCode language, int n, double top_fraction)
    : language_(std::move(language)), n_(n), top_fraction_(top_fraction) {
  check_order(n);
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw Error("top fraction must be in (0, 1], got " + std::to_string(top_fraction));
  }
}

NgramProfile NgramProfile::from_counts(LanguageCode language, int n, double top_fraction,
                                       const std::unordered_map<std::string, std::size_t>& counts) {
  NgramProfile profile(std::move(language), n, top_fraction);
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  // The epsilon keeps products like 0.1 * 30 from rounding up a whole gram.
  const auto keep = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(ranked.size()) - 1e-9));
  ranked.resize(std::min(keep, ranked.size()));
  for (auto& [gram, count] : ranked) {
    profile.frequencies_.emplace(gram, count);
    profile.set_.insert(gram);
    profile.grams_.push_back(std::move(gram));
  }
  return profile;
}

NgramProfile NgramProfile::from_grams(LanguageCode language, int n, double top_fraction,
                                      std::vector<std::string> grams) {
  NgramProfile profile(std::move(language), n, top_fraction);
  for (auto& gram : grams) {
    if (utf8::decode(gram).size() != static_cast<std::size_t>(n)) {
      throw Error("gram '" + gram + "' does not have length " + std::to_string(n));
    }
    if (!profile.set_.insert(gram).second) throw Error("duplicate gram '" + gram + "' in profile");
    profile.grams_.push_back(std::move(gram));
  }
  return profile;
}

NgramProfile NgramProfile::empty(LanguageCode language, int n, double top_fraction) {
  return NgramProfile(std::move(language), n, top_fraction);
}

nlohmann::ordered_json NgramProfile::to_json() const {
  nlohmann::ordered_json j;
  j["language"] = language_.str();
  j["n"] = n_;
  j["top_fraction"] = top_fraction_;
  j["grams"] = grams_;
  return j;
}

NgramProfile NgramProfile::from_json(const nlohmann::json& j) {
  try {
    return from_grams(LanguageCode(j.at("language").get<std::string>()), j.at("n").get<int>(),
                      j.at("top_fraction").get<double>(), j.at("grams").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed profile: ") + e.what());
  }
}

NgramProfile build_profile(const Corpus& corpus, const LanguageCode& language, int n, double top_fraction) {
  const auto indices = corpus.indices_of(language);
  return build_profile(corpus, indices, language, n, top_fraction);
}

NgramProfile build_profile(const Corpus& corpus, std::span<const std::size_t> indices, const LanguageCode& language,
                           int n, double top_fraction) {
  check_order(n);
  std::unordered_map<std::string, std::size_t> counts;
  bool any = false;
  for (std::size_t i : indices) {
    const Document& doc = corpus[i];
    if (doc.language != language) continue;
    any = true;
    accumulate_text(doc.text, n, counts);
  }
  if (!any) throw Error("no documents for language " + language.str());
  return NgramProfile::from_counts(language, n, top_fraction, counts);
}

double profile_overlap(const NgramProfile& a, const NgramProfile& b) {
  if (a.n() != b.n()) throw Error("cannot compare profiles of different n");
  if (a.size() == 0 || b.size() == 0) throw Error("cannot compare an empty profile");
  const NgramProfile& small = a.size() <= b.size() ? a : b;
  const NgramProfile& large = a.size() <= b.size() ? b : a;
  std::size_t shared = 0;
  for (const auto& gram : small.grams()) {
    if (large.contains(gram)) ++shared;
  }
  return static_cast<double>(shared) / static_cast<double>(small.size());
}

// ---------------------------------------------------------------------------

OverlapMatrix overlap_matrix(std::span<const NgramProfile> profiles) {
  OverlapMatrix m;
  if (profiles.empty()) return m;
  m.n = profiles.front().n();
  for (const auto& p : profiles) {
    if (p.n() != m.n) throw Error("all profiles must share the same n");
    if (std::find(m.languages.begin(), m.languages.end(), p.language()) != m.languages.end()) {
      throw Error("duplicate profile for language " + p.language().str());
    }
    m.languages.push_back(p.language());
  }
  const std::size_t k = profiles.size();
  m.values.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) {
    if (profiles[i].size() == 0) throw Error("cannot compare an empty profile");
    for (std::size_t j = i + 1; j < k; ++j) {
      const double v = profile_overlap(profiles[i], profiles[j]);
      m.values[i][j] = v;
      m.values[j][i] = v;
    }
  }
  return m;
}

nlohmann::ordered_json OverlapMatrix::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  std::vector<std::string> codes;
  for (const auto& l : languages) codes.push_back(l.str());
  j["languages"] = codes;
  j["matrix"] = values;
  return j;
}

std::string OverlapMatrix::render() const {
  std::ostringstream os;
  os << std::setw(5) << "";
  for (const auto& l : languages) os << std::setw(7) << l.str();
  os << '\n' << std::fixed << std::setprecision(3);
  for (std::size_t i = 0; i < languages.size(); ++i) {
    os << std::left << std::setw(5) << languages[i].str() << std::right;
    for (double v : values[i]) os << std::setw(7) << v;
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

ProfileSet::ProfileSet(std::vector<NgramProfile> profiles) {
  std::vector<const NgramProfile*> slots(kSlots, nullptr);
  for (const auto& p : profiles) {
    const std::size_t s = order_slot(p.n()) * kFeatureLanguageCodes.size() + language_slot(p.language());
    if (slots[s]) throw Error("duplicate profile for " + p.language().str() + " n=" + std::to_string(p.n()));
    slots[s] = &p;
  }
  for (std::size_t s = 0; s < kSlots; ++s) {
    if (!slots[s]) {
      throw Error("missing profile for " + std::string(kFeatureLanguageCodes[s % kFeatureLanguageCodes.size()]) +
                  " n=" + std::to_string(s < kFeatureLanguageCodes.size() ? 2 : 3));
    }
  }
  profiles_.reserve(kSlots);
  for (const auto* p : slots) profiles_.push_back(*p);
}

const NgramProfile& ProfileSet::get(const LanguageCode& language, int n) const {
  check_order(n);
  return profiles_[order_slot(n) * kFeatureLanguageCodes.size() + language_slot(language)];
}

ProfileSet build_profile_set(const Corpus& corpus, std::span<const std::size_t> indices, double top_fraction) {
  const std::size_t langs = kFeatureLanguageCodes.size();
  std::vector<std::unordered_map<std::string, std::size_t>> counts(2 * langs);
  std::vector<bool> present(langs, false);
  for (std::size_t i : indices) {
    const Document& doc = corpus[i];
    const auto it = std::find(kFeatureLanguageCodes.begin(), kFeatureLanguageCodes.end(), doc.language.str());
    if (it == kFeatureLanguageCodes.end()) continue;
    const auto slot = static_cast<std::size_t>(it - kFeatureLanguageCodes.begin());
    present[slot] = true;
    accumulate_text(doc.text, 2, counts[slot]);
    accumulate_text(doc.text, 3, counts[langs + slot]);
  }
  std::vector<NgramProfile> profiles;
  for (int n : {2, 3}) {
    for (std::size_t l = 0; l < langs; ++l) {
      LanguageCode code(kFeatureLanguageCodes[l]);
      if (present[l]) {
        profiles.push_back(NgramProfile::from_counts(code, n, top_fraction, counts[order_slot(n) * langs + l]));
      } else {
        profiles.push_back(NgramProfile::empty(code, n, top_fraction));
      }
    }
  }
  return ProfileSet(std::move(profiles));
}

ProfileSet build_profile_set(const Corpus& corpus, double top_fraction) {
  std::vector<std::size_t> all(corpus.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return build_profile_set(corpus, all, top_fraction);
}

void save_profile(const NgramProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << profile.to_json().dump(2) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

NgramProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read profile " + path.string());
  try {
    return NgramProfile::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void save_profile_set(const ProfileSet& profiles, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& p : profiles.all()) {
    save_profile(p, dir / (p.language().str() + "." + std::to_string(p.n()) + ".json"));
  }
}

ProfileSet load_profile_set(const std::filesystem::path& dir) {
  std::vector<NgramProfile> profiles;
  for (int n : {2, 3}) {
    for (auto code : kFeatureLanguageCodes) {
      profiles.push_back(load_profile(dir / (std::string(code) + "." + std::to_string(n) + ".json")));
    }
  }
  return ProfileSet(std::move(profiles));
}

// ---------------------------------------------------------------------------

DocumentGrams document_grams(std::string_view text) {
  DocumentGrams out;
  for (const auto& [gram, count] : count_grams(text, 2)) out.bigrams.push_back(gram);
  for (const auto& [gram, count] : count_grams(text, 3)) out.trigrams.push_back(gram);
  return out;
}

std::array<double, ProfileSet::kSlots> crossngo_features(const DocumentGrams& grams, const ProfileSet& profiles) {
  std::array<double, ProfileSet::kSlots> out{};
  const std::size_t langs = kFeatureLanguageCodes.size();
  for (std::size_t s = 0; s < ProfileSet::kSlots; ++s) {
    const auto& doc_grams = s < langs ? grams.bigrams : grams.trigrams;
    if (doc_grams.empty()) continue;
    const NgramProfile& profile = profiles.slot(s);
    std::size_t hit = 0;
    for (const auto& g : doc_grams) {
      if (profile.contains(g)) ++hit;
    }
    out[s] = static_cast<double>(hit) / static_cast<double>(doc_grams.size());
  }
  return out;
}

std::array<double, ProfileSet::kSlots> crossngo_features(const Document& doc, const ProfileSet& profiles) {
  return crossngo_features(document_grams(doc.text), profiles);
}

}  // namespace ara
