#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "ara/error.hpp"
#include "ara/features.hpp"
#include "ara/textproc.hpp"
#include "synthetic.hpp"

using namespace ara;

namespace {

Document doc(const std::string& text, const std::string& lang = "hil") {
  return {"d", LanguageCode(lang), Level::L1, text};
}

ProfileSet toy_profiles() {
  std::vector<NgramProfile> profiles;
  for (int n : {2, 3}) {
    for (auto code : kFeatureLanguageCodes) {
      if (code == "hil") {
        profiles.push_back(NgramProfile::from_grams(LanguageCode(code), n, 0.25,
                                                    n == 2 ? std::vector<std::string>{"an", "ba", "xx"}
                                                           : std::vector<std::string>{"ang"}));
      } else {
        profiles.push_back(NgramProfile::empty(LanguageCode(code), n, 0.25));
      }
    }
  }
  return ProfileSet(std::move(profiles));
}

}  // namespace

TEST(Names, FixedOrder) {
  const auto& names = feature_names();
  EXPECT_EQ(names[kWordCount], "word_count");
  EXPECT_EQ(names[kPatternV], "pattern_v");
  EXPECT_EQ(names[kPatternCcvccc], "pattern_ccvccc");
  EXPECT_EQ(names[kAvgClusterLen], "avg_cluster_len");
  EXPECT_EQ(names[kBigramOverlapFirst], "bigram_overlap_hil");
  EXPECT_EQ(names[kTrigramOverlapFirst + 6], "trigram_overlap_bcl");
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), kFeatureCount);
  EXPECT_EQ(feature_column(1), "f02_word_count");
  EXPECT_EQ(feature_column(31), "f32_trigram_overlap_bcl");
}

TEST(Traditional, HandCounted) {
  const auto f = traditional_features(doc("Ang bata. Ang bata."));
  EXPECT_EQ(f[kUniqueWordCount], 2.0);
  EXPECT_EQ(f[kWordCount], 4.0);
  EXPECT_EQ(f[kSentenceCount], 2.0);
  EXPECT_EQ(f[kAvgSentenceLen], 2.0);
  EXPECT_EQ(f[kAvgWordLen], 3.5);
  EXPECT_EQ(f[kAvgSyllablesPerWord], 1.5);

  const auto a = traditional_features(doc("a."));
  EXPECT_EQ(a[kAvgSyllablesPerWord], 1.0);
  EXPECT_EQ(a[kPolysyllableCount], 0.0);
  EXPECT_EQ(traditional_features(doc("maganda."))[kPolysyllableCount], 1.0);
}

TEST(Traditional, EmptyDocumentThrows) {
  try {
    traditional_features(doc("123 ..."));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("empty document"), std::string::npos);
  }
  EXPECT_THROW(syllable_features(doc("!!")), Error);
}

TEST(Syllable, HandCounted) {
  const auto bata = syllable_features(doc("bata"));
  EXPECT_EQ(bata[1], 2.0);  // cv
  EXPECT_EQ(bata[9], 0.0);
  EXPECT_EQ(bata[10], 0.0);
  EXPECT_EQ(syllable_features(doc("a a a"))[0], 3.0);

  const auto plato = syllable_features(doc("plato bata"));
  EXPECT_GE(plato[5], 1.0);  // ccv
  EXPECT_EQ(plato[9], 1.0);
  EXPECT_EQ(plato[10], 2.0);

  const auto transport = syllable_features(doc("transport"));
  EXPECT_EQ(transport[9], 3.0);
  EXPECT_DOUBLE_EQ(transport[10], 7.0 / 3.0);
}

TEST(Syllable, NormalizedPatternsDivideByWords) {
  FeatureOptions options;
  options.normalize_syllable_patterns = true;
  const auto f = syllable_features(doc("bata bata"), options);
  EXPECT_EQ(f[1], 2.0);
}

TEST(Extract, HandComputedVector) {
  const auto fv = extract(doc("Ang bata."), toy_profiles());
  const std::array<double, kFeatureCount> expected = {
      2, 2, 3.5, 1.5, 1, 2, 0,            // traditional
      0, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0,    // ang = vc; bata = cv cv; no clusters
      0.4, 0, 0, 0, 0, 0, 0,              // bigram containment {an, ba} of 5
      1.0 / 3.0, 0, 0, 0, 0, 0, 0};       // trigram containment {ang} of 3
  for (std::size_t i = 0; i < kFeatureCount; ++i) EXPECT_DOUBLE_EQ(fv.values[i], expected[i]) << feature_names()[i];
}

TEST(Extract, InvariantsOnSyntheticCorpus) {
  const auto corpus = fixtures::make_synthetic_corpus({{"hil", "ceb"}, 4, 3});
  const auto profiles = build_profile_set(corpus);
  const auto rows = extract_all(corpus, profiles, {}, 2);
  ASSERT_EQ(rows.size(), corpus.size());
  for (const auto& fv : rows) {
    for (std::size_t i : {0, 1, 4, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16}) {
      EXPECT_GE(fv.values[i], 0.0);
      EXPECT_EQ(fv.values[i], std::floor(fv.values[i]));
    }
    EXPECT_DOUBLE_EQ(fv.values[kAvgSentenceLen], fv.values[kWordCount] / fv.values[kSentenceCount]);
    for (std::size_t i = kBigramOverlapFirst; i < kFeatureCount; ++i) {
      EXPECT_GE(fv.values[i], 0.0);
      EXPECT_LE(fv.values[i], 1.0);
    }
    // Every syllable of a word with a vowel lands in a named slot or in
    // "other"; the named slots never exceed the total.
    double named = 0.0;
    for (std::size_t i = kPatternV; i <= kPatternCcvccc; ++i) named += fv.values[i];
    EXPECT_LE(named, fv.values[kAvgSyllablesPerWord] * fv.values[kWordCount] + 1e-9);
  }
  EXPECT_EQ(extract_all(corpus, profiles, {}, 1)[5].values, rows[5].values);
}

TEST(Csv, RoundTripAndHeader) {
  const auto corpus = fixtures::make_synthetic_corpus({{"hil"}, 1, 5});
  const auto rows = extract_all(corpus, build_profile_set(corpus));
  std::ostringstream out;
  write_feature_csv(rows, out);
  const auto text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_EQ(text.substr(0, 40), "doc_id,language,level,f01_unique_word_co");
  std::istringstream in(text);
  const auto back = read_feature_csv(in);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[0].doc_id, rows[0].doc_id);
  EXPECT_NEAR(back[2].values[kAvgWordLen], rows[2].values[kAvgWordLen], 5e-7);

  std::istringstream bad("doc_id,language,level,x\n");
  EXPECT_THROW(read_feature_csv(bad), Error);
}

TEST(Csv, QuotesIdsWithCommas) {
  FeatureVector fv{"a,\"b\"", LanguageCode("hil"), Level::L2, {}};
  std::vector<FeatureVector> rows{fv};
  std::ostringstream out;
  write_feature_csv(rows, out);
  std::istringstream in(out.str());
  EXPECT_EQ(read_feature_csv(in)[0].doc_id, "a,\"b\"");
}
