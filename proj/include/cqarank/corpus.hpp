#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cqarank {

enum class GoldLabel { Good, PotentiallyUseful, Bad };
enum class BinaryLabel { Good, Bad };

std::string_view to_string(GoldLabel label);
// Case-insensitive; throws InputError on anything but the three labels.
GoldLabel parse_gold_label(std::string_view text);

/// Source attributes the reader does not interpret, kept in document order
/// so official files pass through without loss.
using AttributeBag = std::vector<std::pair<std::string, std::string>>;

struct Question {
  std::string id;
  std::string subject;
  std::string body;
  std::string category;
  std::string author_id;
  std::string date;
  AttributeBag attributes;

  bool operator==(const Question&) const = default;
};

struct Comment {
  std::string id;
  int position = 0;  // 1-based document order within the thread
  std::string author_id;
  std::string date;
  std::string body;
  GoldLabel gold_label = GoldLabel::Bad;
  AttributeBag attributes;

  // Good-vs-rest: PotentiallyUseful counts as Bad.
  BinaryLabel binary_label() const {
    return gold_label == GoldLabel::Good ? BinaryLabel::Good : BinaryLabel::Bad;
  }

  bool operator==(const Comment&) const = default;
};

struct Thread {
  Question question;
  std::vector<Comment> comments;  // ascending position, exactly 1..n

  const std::string& id() const { return question.id; }
  bool operator==(const Thread&) const = default;
};

enum class SplitName { TrainPart1, TrainPart2, Dev, Test, Custom };

struct DatasetSplit {
  SplitName name = SplitName::Custom;
  std::string custom_name;
  std::vector<Thread> threads;
};

// Checks thread invariants; throws InputError naming the thread.
void validate_thread(const Thread& thread);

// Builds a split, rejecting duplicate question ids.
DatasetSplit make_split(SplitName name, std::vector<Thread> threads,
                        std::string custom_name = {});

/// Reads SemEval-style cQA XML. Three layouts are recognised:
///   * `<Thread>` wrapping `<RelQuestion>` and sibling `<RelComment>`s
///     (SemEval-2016);
///   * `<Question>` with nested `<Comment>` children (CQA-QL, SemEval-2015);
///   * the same shape with plain lowercase names and attributes
///     (`id`, `category`, `date`, `author`, `relevance`, `<subject>`,
///     `<body>`).
/// Unrecognised attributes land in the attribute bag.
std::vector<Thread> parse_xml(std::string_view input);
std::vector<Thread> parse_xml(std::istream& in);

/// Canonical line-delimited record format: one JSON object per line.
std::vector<Thread> parse_records(std::istream& in);
std::vector<Thread> parse_records(std::string_view input);
void write_records(std::ostream& out, const std::vector<Thread>& threads);
std::string write_records(const std::vector<Thread>& threads);

// Reads a corpus file, choosing the reader from the first non-blank byte
// ('<' means XML, anything else records).
std::vector<Thread> load_corpus(const std::string& path);

}  // namespace cqarank
