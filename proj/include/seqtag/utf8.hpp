#ifndef SEQTAG_UTF8_HPP
#define SEQTAG_UTF8_HPP

#include <string>
#include <string_view>
#include <vector>

// Minimal, locale-independent UTF-8 helpers. Case mapping covers ASCII,
// Latin-1 Supplement and Latin Extended-A, which is what French text needs.
namespace seqtag::utf8 {

std::vector<char32_t> decode(std::string_view text);
std::string encode(const std::vector<char32_t>& cps);
void append(std::string& out, char32_t cp);

bool is_upper(char32_t cp);
bool is_lower(char32_t cp);
bool is_digit(char32_t cp);
bool is_space(char32_t cp);
char32_t to_lower(char32_t cp);

std::string lowercase(std::string_view text);
// First / last n code points (the whole string when shorter).
std::string prefix(std::string_view text, std::size_t n);
std::string suffix(std::string_view text, std::size_t n);
std::size_t length(std::string_view text);

}  // namespace seqtag::utf8

#endif  // SEQTAG_UTF8_HPP
