#include "cqarank/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <initializer_list>
#include <span>
#include <iterator>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "cqarank/error.hpp"
#include "cqarank/xml.hpp"
#include "json.hpp"

namespace cqarank {

namespace {

using Json = nlohmann::ordered_json;

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

bool name_in(std::string_view name, std::span<const std::string_view> names) {
  return std::any_of(names.begin(), names.end(),
                     [&](std::string_view n) { return xml::iequals(name, n); });
}

constexpr std::string_view kQuestionTags[] = {"Question", "RelQuestion"};
constexpr std::string_view kCommentTags[] = {"Comment", "RelComment"};

// Attribute aliases, first match wins.
constexpr std::string_view kQuestionId[] = {"id", "QID", "RELQ_ID"};
constexpr std::string_view kQuestionCategory[] = {"category", "QCATEGORY", "RELQ_CATEGORY"};
constexpr std::string_view kQuestionDate[] = {"date", "QDATE", "RELQ_DATE"};
constexpr std::string_view kQuestionAuthor[] = {"author", "author_id", "userid", "QUSERID", "RELQ_USERID"};
constexpr std::string_view kQuestionSubject[] = {"subject", "QSubject", "RelQSubject"};
constexpr std::string_view kQuestionBody[] = {"body", "QBody", "RelQBody"};

constexpr std::string_view kCommentId[] = {"id", "CID", "RELC_ID"};
constexpr std::string_view kCommentDate[] = {"date", "CDATE", "RELC_DATE"};
constexpr std::string_view kCommentAuthor[] = {"author", "author_id", "userid", "CUSERID", "RELC_USERID"};
constexpr std::string_view kCommentRelevance[] = {"relevance", "CGOLD", "RELC_RELEVANCE2RELQ"};
constexpr std::string_view kCommentBody[] = {"body", "CBody", "RelCText", "text"};

// Moves the first attribute matching any alias out of `bag`.
std::optional<std::string> take(AttributeBag& bag,
                                std::span<const std::string_view> aliases) {
  for (std::string_view alias : aliases) {
    auto it = std::find_if(bag.begin(), bag.end(),
                           [&](const auto& kv) { return xml::iequals(kv.first, alias); });
    if (it != bag.end()) {
      std::string value = std::move(it->second);
      bag.erase(it);
      return value;
    }
  }
  return std::nullopt;
}

std::string where(const xml::Element& el) {
  return "line " + std::to_string(el.line) + ", column " + std::to_string(el.column);
}

// Reads the text children of `el`: those matching `fields` fill the
// corresponding output, the rest are kept as "child:<name>" bag entries.
void read_children(const xml::Element& el,
                   std::initializer_list<std::pair<std::span<const std::string_view>, std::string*>> fields,
                   AttributeBag& bag) {
  for (const xml::Element& child : el.children) {
    if (name_in(child.name, kCommentTags) || name_in(child.name, kQuestionTags)) continue;
    bool matched = false;
    for (const auto& [aliases, target] : fields) {
      if (name_in(child.name, aliases)) {
        *target = child.inner_text();
        matched = true;
        break;
      }
    }
    if (!matched) bag.emplace_back("child:" + child.name, child.inner_text());
  }
}

Question read_question(const xml::Element& el) {
  Question q;
  q.attributes = el.attributes;
  auto id = take(q.attributes, kQuestionId);
  if (!id || id->empty()) {
    throw ParseError("question element <" + el.name + "> has no id attribute", el.line, el.column);
  }
  q.id = std::move(*id);
  q.category = take(q.attributes, kQuestionCategory).value_or("");
  q.date = take(q.attributes, kQuestionDate).value_or("");
  q.author_id = take(q.attributes, kQuestionAuthor).value_or("");
  read_children(el, {{kQuestionSubject, &q.subject}, {kQuestionBody, &q.body}}, q.attributes);
  return q;
}

Comment read_comment(const xml::Element& el, int position) {
  Comment c;
  c.position = position;
  c.attributes = el.attributes;
  auto id = take(c.attributes, kCommentId);
  if (!id || id->empty()) {
    throw ParseError("comment element <" + el.name + "> has no id attribute", el.line, el.column);
  }
  c.id = std::move(*id);
  c.date = take(c.attributes, kCommentDate).value_or("");
  c.author_id = take(c.attributes, kCommentAuthor).value_or("");
  auto relevance = take(c.attributes, kCommentRelevance);
  if (!relevance) {
    throw InputError("comment " + c.id + " (" + where(el) + ") has no relevance attribute");
  }
  try {
    c.gold_label = parse_gold_label(*relevance);
  } catch (const InputError& e) {
    throw InputError("comment " + c.id + " (" + where(el) + "): " + e.what());
  }
  read_children(el, {{kCommentBody, &c.body}}, c.attributes);
  return c;
}

void collect_comments(const xml::Element& parent, std::vector<Comment>& out) {
  for (const xml::Element& child : parent.children) {
    if (name_in(child.name, kCommentTags)) {
      out.push_back(read_comment(child, static_cast<int>(out.size()) + 1));
    }
  }
}

Thread finish_thread(Question q, std::vector<Comment> comments) {
  Thread t{std::move(q), std::move(comments)};
  validate_thread(t);
  return t;
}

void walk(const xml::Element& el, std::vector<Thread>& out) {
  if (xml::iequals(el.name, "Thread")) {
    const xml::Element* question = nullptr;
    for (const xml::Element& child : el.children) {
      if (name_in(child.name, kQuestionTags)) {
        question = &child;
        break;
      }
    }
    if (question == nullptr) {
      throw ParseError("<" + el.name + "> without a question element", el.line, el.column);
    }
    Question q = read_question(*question);
    for (const auto& [k, v] : el.attributes) q.attributes.emplace_back("thread:" + k, v);
    std::vector<Comment> comments;
    collect_comments(*question, comments);
    collect_comments(el, comments);
    out.push_back(finish_thread(std::move(q), std::move(comments)));
    return;
  }
  if (name_in(el.name, kQuestionTags)) {
    Question q = read_question(el);
    std::vector<Comment> comments;
    collect_comments(el, comments);
    out.push_back(finish_thread(std::move(q), std::move(comments)));
    return;
  }
  for (const xml::Element& child : el.children) walk(child, out);
}

// --- records ---------------------------------------------------------------

Json bag_to_json(const AttributeBag& bag) {
  Json arr = Json::array();
  for (const auto& [k, v] : bag) arr.push_back(Json::array({k, v}));
  return arr;
}

std::string required_string(const Json& obj, const char* key, const char* owner) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(std::string(owner) + " is missing field '" + key + "'");
  if (!it->is_string()) throw InputError(std::string(owner) + " field '" + key + "' must be a string");
  return it->get<std::string>();
}

AttributeBag optional_bag(const Json& obj, const char* owner) {
  AttributeBag bag;
  auto it = obj.find("attrs");
  if (it == obj.end()) return bag;
  if (!it->is_array()) throw InputError(std::string(owner) + " field 'attrs' must be an array");
  for (const Json& kv : *it) {
    if (!kv.is_array() || kv.size() != 2 || !kv[0].is_string() || !kv[1].is_string()) {
      throw InputError(std::string(owner) + " 'attrs' entries must be [key, value] string pairs");
    }
    bag.emplace_back(kv[0].get<std::string>(), kv[1].get<std::string>());
  }
  return bag;
}

Thread thread_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("record is not a JSON object");
  auto qit = j.find("question");
  if (qit == j.end() || !qit->is_object()) throw InputError("record is missing object 'question'");
  const Json& qj = *qit;
  Thread t;
  t.question.id = required_string(qj, "id", "question");
  t.question.subject = required_string(qj, "subject", "question");
  t.question.body = required_string(qj, "body", "question");
  t.question.category = required_string(qj, "category", "question");
  t.question.author_id = required_string(qj, "author_id", "question");
  t.question.date = required_string(qj, "date", "question");
  t.question.attributes = optional_bag(qj, "question");

  auto cit = j.find("comments");
  if (cit == j.end() || !cit->is_array()) throw InputError("record is missing array 'comments'");
  bool explicit_positions = false;
  for (const Json& cj : *cit) {
    if (!cj.is_object()) throw InputError("comment is not a JSON object");
    Comment c;
    c.id = required_string(cj, "id", "comment");
    c.author_id = required_string(cj, "author_id", "comment");
    c.date = required_string(cj, "date", "comment");
    c.body = required_string(cj, "body", "comment");
    c.gold_label = parse_gold_label(required_string(cj, "gold_label", "comment"));
    c.attributes = optional_bag(cj, "comment");
    if (auto pit = cj.find("position"); pit != cj.end()) {
      if (!pit->is_number_integer()) throw InputError("comment " + c.id + " position must be an integer");
      c.position = pit->get<int>();
      explicit_positions = true;
    } else {
      c.position = static_cast<int>(t.comments.size()) + 1;
    }
    t.comments.push_back(std::move(c));
  }
  if (explicit_positions) {
    std::unordered_set<int> seen;
    for (const Comment& c : t.comments) {
      if (!seen.insert(c.position).second) {
        throw InputError("duplicate comment position " + std::to_string(c.position) +
                         " in thread " + t.question.id);
      }
    }
    std::stable_sort(t.comments.begin(), t.comments.end(),
                     [](const Comment& a, const Comment& b) { return a.position < b.position; });
  }
  validate_thread(t);
  return t;
}

}  // namespace

std::string_view to_string(GoldLabel label) {
  switch (label) {
    case GoldLabel::Good: return "Good";
    case GoldLabel::PotentiallyUseful: return "PotentiallyUseful";
    case GoldLabel::Bad: return "Bad";
  }
  return "Bad";
}

GoldLabel parse_gold_label(std::string_view text) {
  if (xml::iequals(text, "Good")) return GoldLabel::Good;
  if (xml::iequals(text, "PotentiallyUseful")) return GoldLabel::PotentiallyUseful;
  if (xml::iequals(text, "Bad")) return GoldLabel::Bad;
  throw InputError("unknown relevance label '" + std::string(text) + "'");
}

void validate_thread(const Thread& thread) {
  const Question& q = thread.question;
  if (q.id.empty()) throw InputError("question with empty id");
  if (blank(q.body) && blank(q.subject)) {
    throw InputError("question " + q.id + " has neither subject nor body text");
  }
  if (thread.comments.empty()) throw InputError("question " + q.id + " has no comments");
  for (std::size_t i = 0; i < thread.comments.size(); ++i) {
    const Comment& c = thread.comments[i];
    if (c.id.empty()) throw InputError("comment with empty id in thread " + q.id);
    if (c.position != static_cast<int>(i) + 1) {
      throw InputError("thread " + q.id + ": comment positions must be exactly 1.." +
                       std::to_string(thread.comments.size()) + " (comment " + c.id +
                       " has position " + std::to_string(c.position) + ")");
    }
  }
}

DatasetSplit make_split(SplitName name, std::vector<Thread> threads, std::string custom_name) {
  std::unordered_set<std::string> ids;
  for (const Thread& t : threads) {
    if (!ids.insert(t.id()).second) throw InputError("duplicate question id " + t.id() + " in split");
  }
  return DatasetSplit{name, std::move(custom_name), std::move(threads)};
}

std::vector<Thread> parse_xml(std::string_view input) {
  std::vector<Thread> threads;
  for (const xml::Element& root : xml::parse(input)) walk(root, threads);
  return threads;
}

std::vector<Thread> parse_xml(std::istream& in) {
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_xml(std::string_view(data));
}

std::vector<Thread> parse_records(std::istream& in) {
  std::vector<Thread> threads;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    try {
      threads.push_back(thread_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), line_no);
    } catch (const InputError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return threads;
}

std::vector<Thread> parse_records(std::string_view input) {
  std::istringstream in{std::string(input)};
  return parse_records(in);
}

void write_records(std::ostream& out, const std::vector<Thread>& threads) {
  for (const Thread& t : threads) {
    Json q = Json::object();
    q["id"] = t.question.id;
    q["subject"] = t.question.subject;
    q["body"] = t.question.body;
    q["category"] = t.question.category;
    q["author_id"] = t.question.author_id;
    q["date"] = t.question.date;
    if (!t.question.attributes.empty()) q["attrs"] = bag_to_json(t.question.attributes);
    Json comments = Json::array();
    for (const Comment& c : t.comments) {
      Json cj = Json::object();
      cj["id"] = c.id;
      cj["position"] = c.position;
      cj["author_id"] = c.author_id;
      cj["date"] = c.date;
      cj["body"] = c.body;
      cj["gold_label"] = std::string(to_string(c.gold_label));
      if (!c.attributes.empty()) cj["attrs"] = bag_to_json(c.attributes);
      comments.push_back(std::move(cj));
    }
    Json rec = Json::object();
    rec["question"] = std::move(q);
    rec["comments"] = std::move(comments);
    out << rec.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
  }
}

std::string write_records(const std::vector<Thread>& threads) {
  std::ostringstream out;
  write_records(out, threads);
  return out.str();
}

std::vector<Thread> load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus file " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t i = 0;
  if (data.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;
  while (i < data.size() && std::isspace(static_cast<unsigned char>(data[i]))) ++i;
  try {
    if (i < data.size() && data[i] == '<') return parse_xml(std::string_view(data));
    return parse_records(std::string_view(data));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace cqarank
