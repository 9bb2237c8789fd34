#include "cqarank/xml.hpp"

#include <cctype>
#include <cstdint>

#include "cqarank/error.hpp"

namespace cqarank::xml {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::string Element::inner_text() const {
  std::string out;
  for (const Piece& piece : pieces_) {
    if (piece.child == static_cast<std::size_t>(-1)) {
      out += piece.text;
    } else {
      out += children[piece.child].inner_text();
    }
  }
  return out;
}

const std::string* Element::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (iequals(k, key)) return &v;
  }
  return nullptr;
}

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
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

bool is_name_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == ':' || c == '-' || c == '.' ||
         u >= 0x80;
}

}  // namespace

class Parser {
 public:
  explicit Parser(std::string_view in) : in_(in) {}

  std::vector<Element> document() {
    std::vector<Element> roots;
    while (true) {
      skip_misc();
      if (eof()) break;
      if (peek() != '<') fail("text outside of any element");
      roots.push_back(element());
    }
    return roots;
  }

 private:
  bool eof() const { return pos_ >= in_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < in_.size() ? in_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const {
    return in_.substr(pos_, s.size()) == s;
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < in_.size(); ++i, ++pos_) {
      if (in_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("malformed XML: " + what, line_, col_);
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void skip_until(std::string_view terminator, const char* what) {
    while (!eof() && !starts_with(terminator)) advance();
    if (eof()) fail(std::string("unterminated ") + what);
    advance(terminator.size());
  }

  void skip_doctype() {
    int depth = 0;
    while (!eof()) {
      const char c = peek();
      if (c == '[') ++depth;
      if (c == ']') --depth;
      advance();
      if (c == '>' && depth <= 0) return;
    }
    fail("unterminated DOCTYPE");
  }

  // Whitespace, comments, processing instructions, DOCTYPE.
  void skip_misc() {
    while (true) {
      skip_ws();
      if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<!DOCTYPE") || starts_with("<!doctype")) {
        skip_doctype();
      } else {
        return;
      }
    }
  }

  std::string name() {
    const std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) advance();
    if (pos_ == start) fail("expected a name");
    return std::string(in_.substr(start, pos_ - start));
  }

  void entity(std::string& out) {
    // At '&'.
    const std::size_t semi = in_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) {
      out.push_back('&');
      advance();
      return;
    }
    const std::string_view ref = in_.substr(pos_ + 1, semi - pos_ - 1);
    std::string decoded;
    if (ref == "lt") decoded = "<";
    else if (ref == "gt") decoded = ">";
    else if (ref == "amp") decoded = "&";
    else if (ref == "quot") decoded = "\"";
    else if (ref == "apos") decoded = "'";
    else if (ref.size() > 1 && ref[0] == '#') {
      const bool hex = ref[1] == 'x' || ref[1] == 'X';
      const std::string digits(ref.substr(hex ? 2 : 1));
      try {
        std::size_t used = 0;
        const unsigned long cp = std::stoul(digits, &used, hex ? 16 : 10);
        if (used == digits.size() && cp <= 0x10FFFF) {
          append_utf8(decoded, static_cast<std::uint32_t>(cp));
        }
      } catch (const std::exception&) {
      }
    }
    if (decoded.empty()) {
      // Unknown entity: keep it as written.
      out.push_back('&');
      advance();
      return;
    }
    out += decoded;
    advance(semi - pos_ + 1);
  }

  std::string attribute_value() {
    const char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
    advance();
    std::string value;
    while (!eof() && peek() != quote) {
      if (peek() == '&') {
        entity(value);
      } else {
        value.push_back(peek());
        advance();
      }
    }
    if (eof()) fail("unterminated attribute value");
    advance();
    return value;
  }

  void add_text(Element& el, std::string&& text) {
    if (text.empty()) return;
    el.text += text;
    el.pieces_.push_back({static_cast<std::size_t>(-1), std::move(text)});
  }

  Element element() {
    Element el;
    el.line = line_;
    el.column = col_;
    advance();  // '<'
    el.name = name();
    while (true) {
      skip_ws();
      if (eof()) fail("unterminated start tag <" + el.name + ">");
      if (starts_with("/>")) {
        advance(2);
        return el;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      std::string key = name();
      skip_ws();
      if (peek() != '=') fail("expected '=' after attribute " + key);
      advance();
      skip_ws();
      el.attributes.emplace_back(std::move(key), attribute_value());
    }

    std::string text;
    while (true) {
      if (eof()) fail("missing end tag for <" + el.name + ">");
      const char c = peek();
      if (c == '&') {
        entity(text);
      } else if (c != '<') {
        text.push_back(c);
        advance();
      } else if (starts_with("</")) {
        add_text(el, std::move(text));
        advance(2);
        const std::string closing = name();
        if (closing != el.name) {
          fail("end tag </" + closing + "> does not match <" + el.name + ">");
        }
        skip_ws();
        if (peek() != '>') fail("expected '>' in end tag");
        advance();
        return el;
      } else if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<![CDATA[")) {
        advance(9);
        const std::size_t end = in_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        text.append(in_.substr(pos_, end - pos_));
        advance(end - pos_ + 3);
      } else if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else {
        add_text(el, std::move(text));
        text.clear();
        Element child = element();
        el.children.push_back(std::move(child));
        el.pieces_.push_back({el.children.size() - 1, {}});
      }
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

std::vector<Element> parse(std::string_view input) {
  // Skip a UTF-8 byte order mark.
  if (input.substr(0, 3) == "\xEF\xBB\xBF") input.remove_prefix(3);
  return Parser(input).document();
}

}  // namespace cqarank::xml
