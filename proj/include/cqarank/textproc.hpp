#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cqarank {

/// Lowercased tokens, none empty.
using TokenSeq = std::vector<std::string>;

/// Splits on whitespace, lowercases ASCII letters, and peels leading and
/// trailing punctuation runs off each chunk as tokens of their own. A chunk
/// that is all punctuation ("?!?", ":-)") stays one token. URLs and e-mail
/// addresses are kept whole (trailing sentence punctuation is still peeled).
TokenSeq tokenize(std::string_view text);

/// A whitespace-delimited chunk ending in . ! or ? closes a sentence.
/// Sentences are the original text from their first to last chunk.
std::vector<std::string> split_sentences(std::string_view text);

/// Sliding-window n-gram multiset. Keys join tokens with '\x1f'.
struct NGramCounts {
  int n = 1;
  std::map<std::string, int> counts;

  int total() const;
  int count(const std::vector<std::string>& gram) const;
};

std::string ngram_key(const std::vector<std::string>& gram);

// Throws std::invalid_argument for n < 1.
NGramCounts ngrams(const TokenSeq& tokens, int n);

/// Strips one suffix from {ing, ed, es, ly, s}, longest first, when the
/// remainder keeps at least three characters.
std::string stem_light(std::string_view token);

enum class Pattern {
  Url,
  Email,
  Phone,
  Image,
  PositiveSmiley,
  NegativeSmiley,
  ExclamationRun,
  InterrogationRun,
  ThankSubstring,
};

/// Counts occurrences of `kind` in raw text; see docs/patterns.md for the
/// exact definitions. `run_length` selects the run class (1, 2, or 3 where
/// 3 means three or more) and is required for the two run kinds only.
int count_pattern(std::string_view text, Pattern kind, int run_length = 0);

bool is_url(std::string_view chunk);
bool is_email(std::string_view chunk);

/// Sentence whose final punctuation run contains '?'.
bool is_interrogative(std::string_view sentence);

}  // namespace cqarank
