#include "cqarank/textproc.hpp"

#include <array>
#include <cctype>
#include <stdexcept>

namespace cqarank {

namespace {

constexpr char kJoin = '\x1f';

bool is_space(unsigned char c) { return c <= 0x20 || c == 0x7f; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

struct Chunk {
  std::string_view text;
  std::size_t offset;
};

std::vector<Chunk> chunks(std::string_view text) {
  std::vector<Chunk> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.push_back({text.substr(start, i - start), start});
  }
  return out;
}

std::size_t leading_punct(std::string_view s) {
  std::size_t n = 0;
  while (n < s.size() && is_punct(s[n])) ++n;
  return n;
}

std::size_t trailing_punct(std::string_view s) {
  std::size_t n = 0;
  while (n < s.size() && is_punct(s[s.size() - 1 - n])) ++n;
  return n;
}

// Characters that may trail a URL without belonging to it.
bool url_trailer(char c) {
  constexpr std::string_view set = ".,;:!?)]}\"'>";
  return set.find(c) != std::string_view::npos;
}

std::size_t trailing_url_punct(std::string_view s) {
  std::size_t n = 0;
  while (n < s.size() && url_trailer(s[s.size() - 1 - n])) ++n;
  return n;
}

// Chunk with leading punctuation removed and trailing punctuation removed
// (URL-aware), lowercased.
std::string core_of(std::string_view chunk) {
  const std::size_t lead = leading_punct(chunk);
  if (lead == chunk.size()) return {};
  std::string_view rest = chunk.substr(lead);
  const std::string lowered = lower(rest);
  const std::size_t trail = is_url(lowered) ? trailing_url_punct(rest) : trailing_punct(rest);
  return lower(rest.substr(0, rest.size() - trail));
}

int count_runs(std::string_view text, char symbol, int run_length) {
  int count = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != symbol) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && text[j] == symbol) ++j;
    const auto len = static_cast<int>(j - i);
    if (len == run_length || (run_length == 3 && len > 3)) ++count;
    i = j;
  }
  return count;
}

int count_emoticons(std::string_view text, const std::vector<std::string_view>& faces) {
  int count = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    for (std::string_view face : faces) {
      if (text.substr(i, face.size()) != face) continue;
      const std::size_t after = i + face.size();
      if (after < text.size() && is_alnum(text[after])) continue;
      ++count;
      i = after - 1;
      break;
    }
  }
  return count;
}

bool is_phone(std::string_view chunk) {
  std::size_t end = chunk.size();
  while (end > 0 && std::string_view(".,;:!?").find(chunk[end - 1]) != std::string_view::npos) --end;
  chunk = chunk.substr(0, end);
  if (chunk.empty()) return false;
  const char first = chunk.front();
  if (!(std::isdigit(static_cast<unsigned char>(first)) || first == '+' || first == '(')) return false;
  int digits = 0;
  for (char c : chunk) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ++digits;
    } else if (std::string_view("-()+./").find(c) == std::string_view::npos) {
      return false;
    }
  }
  return digits >= 7;
}

bool alnum_dot(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!is_alnum(c) && c != '.') return false;
  }
  return true;
}

}  // namespace

bool is_url(std::string_view chunk) {
  const std::string l = lower(chunk.substr(0, 8));
  return starts_with(l, "http://") || starts_with(l, "https://") || starts_with(l, "www.");
}

bool is_email(std::string_view chunk) {
  const std::size_t at = chunk.find('@');
  if (at == std::string_view::npos || chunk.find('@', at + 1) != std::string_view::npos) return false;
  const std::string_view local = chunk.substr(0, at);
  const std::string_view domain = chunk.substr(at + 1);
  const std::size_t dot = domain.rfind('.');
  if (dot == std::string_view::npos) return false;
  const std::string_view host = domain.substr(0, dot);
  const std::string_view tld = domain.substr(dot + 1);
  if (!alnum_dot(local) || !alnum_dot(host) || tld.empty()) return false;
  for (char c : tld) {
    if (!is_alnum(c)) return false;
  }
  return true;
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  for (const Chunk& chunk : chunks(text)) {
    const std::string_view s = chunk.text;
    const std::size_t lead = leading_punct(s);
    if (lead == s.size()) {
      out.push_back(lower(s));
      continue;
    }
    const std::string_view rest = s.substr(lead);
    const std::size_t trail = is_url(rest) ? trailing_url_punct(rest) : trailing_punct(rest);
    if (lead > 0) out.push_back(lower(s.substr(0, lead)));
    out.push_back(lower(rest.substr(0, rest.size() - trail)));
    if (trail > 0) out.push_back(lower(rest.substr(rest.size() - trail)));
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  const std::vector<Chunk> cs = chunks(text);
  std::size_t first = 0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const char last = cs[i].text.back();
    const bool terminal = last == '.' || last == '!' || last == '?';
    if (terminal || i + 1 == cs.size()) {
      const std::size_t begin = cs[first].offset;
      const std::size_t end = cs[i].offset + cs[i].text.size();
      out.emplace_back(text.substr(begin, end - begin));
      first = i + 1;
    }
  }
  return out;
}

int NGramCounts::total() const {
  int sum = 0;
  for (const auto& [key, c] : counts) sum += c;
  return sum;
}

int NGramCounts::count(const std::vector<std::string>& gram) const {
  auto it = counts.find(ngram_key(gram));
  return it == counts.end() ? 0 : it->second;
}

std::string ngram_key(const std::vector<std::string>& gram) {
  std::string key;
  for (std::size_t i = 0; i < gram.size(); ++i) {
    if (i > 0) key.push_back(kJoin);
    key += gram[i];
  }
  return key;
}

NGramCounts ngrams(const TokenSeq& tokens, int n) {
  if (n < 1) throw std::invalid_argument("ngrams: n must be >= 1");
  NGramCounts out;
  out.n = n;
  const auto len = static_cast<int>(tokens.size());
  for (int i = 0; i + n <= len; ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back(kJoin);
      key += tokens[i + k];
    }
    ++out.counts[key];
  }
  return out;
}

std::string stem_light(std::string_view token) {
  static constexpr std::array<std::string_view, 5> kSuffixes = {"ing", "ed", "es", "ly", "s"};
  for (std::string_view suffix : kSuffixes) {
    if (ends_with(token, suffix) && token.size() - suffix.size() >= 3) {
      return std::string(token.substr(0, token.size() - suffix.size()));
    }
  }
  return std::string(token);
}

int count_pattern(std::string_view text, Pattern kind, int run_length) {
  if (kind == Pattern::ExclamationRun || kind == Pattern::InterrogationRun) {
    if (run_length < 1 || run_length > 3) {
      throw std::invalid_argument("count_pattern: run length must be 1, 2 or 3");
    }
  }
  int count = 0;
  switch (kind) {
    case Pattern::Url:
      for (const Chunk& c : chunks(text)) {
        if (is_url(c.text.substr(leading_punct(c.text)))) ++count;
      }
      return count;
    case Pattern::Email:
      for (const Chunk& c : chunks(text)) {
        if (is_email(core_of(c.text))) ++count;
      }
      return count;
    case Pattern::Phone:
      for (const Chunk& c : chunks(text)) {
        if (is_phone(c.text)) ++count;
      }
      return count;
    case Pattern::Image: {
      const std::string l = lower(text);
      std::string rest;
      std::size_t i = 0;
      while (i < l.size()) {
        const std::size_t tag = l.find("<img", i);
        if (tag == std::string::npos) {
          rest.append(l, i, std::string::npos);
          break;
        }
        ++count;
        rest.append(l, i, tag - i);
        rest.push_back(' ');
        const std::size_t close = l.find('>', tag);
        i = close == std::string::npos ? l.size() : close + 1;
      }
      for (const Chunk& c : chunks(rest)) {
        const std::string core = core_of(c.text);
        if (ends_with(core, ".jpg") || ends_with(core, ".jpeg") || ends_with(core, ".png") ||
            ends_with(core, ".gif")) {
          ++count;
        }
      }
      return count;
    }
    case Pattern::PositiveSmiley:
      return count_emoticons(text, {":-)", ":)", ":D", ";)", "=)"});
    case Pattern::NegativeSmiley:
      return count_emoticons(text, {":-(", ":'(", ":(", "=("});
    case Pattern::ExclamationRun:
      return count_runs(text, '!', run_length);
    case Pattern::InterrogationRun:
      return count_runs(text, '?', run_length);
    case Pattern::ThankSubstring: {
      const std::string l = lower(text);
      for (std::size_t pos = l.find("thank"); pos != std::string::npos; pos = l.find("thank", pos + 5)) {
        ++count;
      }
      return count;
    }
  }
  return 0;
}

bool is_interrogative(std::string_view sentence) {
  std::size_t end = sentence.size();
  while (end > 0 && is_space(static_cast<unsigned char>(sentence[end - 1]))) --end;
  sentence = sentence.substr(0, end);
  const std::size_t trail = trailing_punct(sentence);
  return sentence.substr(sentence.size() - trail).find('?') != std::string_view::npos;
}

}  // namespace cqarank
