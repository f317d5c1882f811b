#pragma once

// Tokenization and syllable analysis for Latin-script Philippine orthography.
//
// Conventions shared by every function here:
//   * input is UTF-8; letters are compared case-insensitively;
//   * vowels are a, e, i, o, u (accented forms fold to their base vowel);
//     y and w are consonants;
//   * the digraph "ng" is a single consonant unit;
//   * hyphens and apostrophes inside a word carry no c/v symbol.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ara::text {

enum class SyllablePattern { V, CV, VC, CVC, VCC, CCV, CVCC, CCVCC, CCVCCC, Other };

inline constexpr std::size_t kNamedPatternCount = 9;

inline constexpr std::array<SyllablePattern, kNamedPatternCount> kNamedPatterns = {
    SyllablePattern::V,   SyllablePattern::CV,   SyllablePattern::VC,
    SyllablePattern::CVC, SyllablePattern::VCC,  SyllablePattern::CCV,
    SyllablePattern::CVCC, SyllablePattern::CCVCC, SyllablePattern::CCVCCC};

std::string_view to_string(SyllablePattern p);
SyllablePattern pattern_from_shape(std::string_view cv_shape);

struct ClusterStats {
  int cluster_count = 0;
  int total_length = 0;  // sum of cluster lengths in consonant units
  double mean_cluster_len = 0.0;
};

// Splits on . ! ? and U+2026 when the punctuation run (plus any closing
// quotes or brackets) is followed by whitespace or end of text. Segments
// without any letter or digit are dropped. Returned segments are trimmed.
std::vector<std::string> tokenize_sentences(std::string_view text);

// Lowercased maximal runs of letters; a hyphen or apostrophe between two
// letters stays inside the token ("sin-o"). Digits and punctuation split.
std::vector<std::string> tokenize_words(std::string_view text);

// Number of letters in a word; hyphens, apostrophes and marks excluded.
std::size_t letter_count(std::string_view word);

// Maps a word onto the alphabet {c, v}. Throws ara::Error("not a word") when
// the input has no letters.
std::string cv_encode(std::string_view word);

// One syllable per vowel. Consonants between two vowels are split by run
// length k: k=1 -> onset of the next syllable; k=2 -> one coda, one onset;
// k>=3 -> (k-2) coda, two onset. Leading consonants form the first onset and
// trailing consonants the last coda. A word without vowels is a single
// syllable covering the whole word.
std::vector<std::string> syllable_shapes(std::string_view word);
std::vector<SyllablePattern> syllabify(std::string_view word);

// Same split rule applied directly to a c/v string.
std::vector<std::string> split_cv(std::string_view cv);

// Vowel count; 0 for words without vowels or letters.
int count_syllables(std::string_view word);

// Clusters are maximal runs of two or more consonant units.
ClusterStats consonant_cluster_stats(std::string_view word);

}  // namespace ara::text
