#pragma once

// Minimal UTF-8 and Latin-script letter helpers used by the text modules.

#include <string>
#include <string_view>
#include <vector>

namespace ara::utf8 {

// Decodes UTF-8; malformed sequences become U+FFFD.
std::u32string decode(std::string_view s);
void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view s);

// Latin letters: ASCII, Latin-1 Supplement, Latin Extended-A/B and Latin
// Extended Additional. Other scripts are not recognized as letters.
bool is_letter(char32_t cp);
bool is_combining_mark(char32_t cp);
bool is_digit(char32_t cp);
bool is_space(char32_t cp);
bool is_word_joiner(char32_t cp);  // hyphen or apostrophe variants
char32_t to_lower(char32_t cp);
// Strips diacritics from lowercase vowels (a-grave -> a); other letters pass.
char32_t fold_vowel(char32_t lower);

}  // namespace ara::utf8
