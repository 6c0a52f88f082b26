#include "seqtag/utf8.hpp"

namespace seqtag::utf8 {

std::vector<char32_t> decode(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    char32_t cp;
    std::size_t extra;
    if (c < 0x80) {
      cp = c, extra = 0;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F, extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F, extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07, extra = 3;
    } else {
      // Stray continuation or invalid lead byte: pass through as U+FFFD.
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    if (i + extra >= text.size()) {
      out.push_back(0xFFFD);
      break;
    }
    bool ok = true;
    for (std::size_t k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append(out, cp);
  return out;
}

namespace {

// Latin Extended-A alternates upper/lower in pairs, with a few gaps.
bool extended_a_upper(char32_t cp) {
  if (cp < 0x0100 || cp > 0x017F) return false;
  if (cp == 0x0130) return true;
  if (cp == 0x0131 || cp == 0x0138 || cp == 0x0149 || cp == 0x017F) return false;
  if (cp == 0x0178) return true;
  if ((cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E)) return (cp & 1) == 1;
  return (cp & 1) == 0;
}

bool extended_a_lower(char32_t cp) {
  if (cp < 0x0100 || cp > 0x017F) return false;
  if (cp == 0x0130 || cp == 0x0178) return false;
  if (cp == 0x0131 || cp == 0x0138 || cp == 0x0149 || cp == 0x017F) return true;
  return !extended_a_upper(cp);
}

}  // namespace

bool is_upper(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return true;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return true;
  return extended_a_upper(cp);
}

bool is_lower(char32_t cp) {
  if (cp >= 'a' && cp <= 'z') return true;
  if (cp >= 0x00DF && cp <= 0x00FF && cp != 0x00F7) return true;
  return extended_a_lower(cp);
}

bool is_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\v' || cp == '\f' ||
         cp == 0x00A0;
}

char32_t to_lower(char32_t cp) {
  if (!is_upper(cp)) return cp;
  if (cp <= 'Z') return cp + 0x20;
  if (cp <= 0x00DE) return cp + 0x20;
  if (cp == 0x0130) return 'i';
  if (cp == 0x0178) return 0x00FF;
  return cp + 1;
}

std::string lowercase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : decode(text)) append(out, to_lower(cp));
  return out;
}

std::string prefix(std::string_view text, std::size_t n) {
  auto cps = decode(text);
  if (cps.size() > n) cps.resize(n);
  return encode(cps);
}

std::string suffix(std::string_view text, std::size_t n) {
  auto cps = decode(text);
  if (cps.size() > n) cps.erase(cps.begin(), cps.end() - static_cast<std::ptrdiff_t>(n));
  return encode(cps);
}

std::size_t length(std::string_view text) { return decode(text).size(); }

}  // namespace seqtag::utf8
