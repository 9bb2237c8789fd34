#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cqarank::xml {

using Attributes = std::vector<std::pair<std::string, std::string>>;

/// A parsed element. Mixed content is flattened: `text` holds the
/// concatenated character data of this element's direct text children,
/// while `inner_text()` walks the whole subtree in document order.
struct Element {
  std::string name;
  Attributes attributes;
  std::vector<Element> children;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;

  // Concatenation of all descendant character data, in document order.
  std::string inner_text() const;

  // Attribute lookup by case-insensitive name; nullptr when absent.
  const std::string* attribute(std::string_view key) const;

 private:
  friend class Parser;
  // Interleaving of text and child elements, needed by inner_text().
  // Each entry is either a text segment (child index == npos) or a child.
  struct Piece {
    std::size_t child = static_cast<std::size_t>(-1);
    std::string text;
  };
  std::vector<Piece> pieces_;
};

/// Parses a document into its top-level elements. Processing
/// instructions, comments and DOCTYPE declarations are skipped; the five
/// predefined entities and numeric character references are decoded and
/// unknown entities are kept verbatim. Throws ParseError with line and
/// column on malformed input.
std::vector<Element> parse(std::string_view input);

bool iequals(std::string_view a, std::string_view b);

}  // namespace cqarank::xml
