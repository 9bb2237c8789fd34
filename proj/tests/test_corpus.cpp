#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "cqarank/corpus.hpp"
#include "cqarank/error.hpp"

using namespace cqarank;

namespace {

const char* kCqaQl = R"(<?xml version="1.0" encoding="UTF-8"?>
<root>
<Question QID="Q1" QCATEGORY="Visas and Permits" QDATE="2010-08-27 01:40:05" QUSERID="U1" QTYPE="GENERAL">
  <QSubject>Driving license</QSubject>
  <QBody>Can I obtain Driving License &amp; drive?</QBody>
  <Comment CID="Q1_C1" CUSERID="U2" CGOLD="Good" CDATE="2010-08-27 02:00:00">
    <CBody>Yes, go to the traffic department.</CBody>
  </Comment>
  <Comment CID="Q1_C2" CUSERID="U1" CGOLD="potentiallyuseful">
    <CBody>Thanks!</CBody>
  </Comment>
  <Comment CID="Q1_C3" CUSERID="U3" CGOLD="Bad"><CBody><![CDATA[lol <b>]]></CBody></Comment>
</Question>
</root>)";

const char* kSemEval2016 = R"(<xml>
<Thread THREAD_SEQUENCE="Q268_R4">
  <RelQuestion RELQ_ID="Q268_R4" RELQ_CATEGORY="Socialising" RELQ_DATE="2011-01-13" RELQ_USERID="U9">
    <RelQSubject>best beach</RelQSubject>
    <RelQBody></RelQBody>
  </RelQuestion>
  <RelComment RELC_ID="Q268_R4_C1" RELC_DATE="2011-01-13" RELC_USERID="U4" RELC_RELEVANCE2RELQ="Good">
    <RelCText>Try Fuwairit.</RelCText>
  </RelComment>
  <RelComment RELC_ID="Q268_R4_C2" RELC_DATE="2011-01-14" RELC_USERID="U5" RELC_RELEVANCE2RELQ="Bad">
    <RelCText>no idea</RelCText>
  </RelComment>
</Thread>
</xml>)";

const char* kPlain = R"(<questions>
<question id="q7" category="c" date="d" author="a">
  <subject>s</subject><body>what time?</body>
  <comment id="c1" date="d" author="b" relevance="Bad"><body>noon</body></comment>
  <comment id="c2" date="d" author="c" relevance="GOOD"><body>at 5</body></comment>
</question>
</questions>)";

}  // namespace

TEST(ParseXml, CqaQlLayout) {
  const auto threads = parse_xml(kCqaQl);
  ASSERT_EQ(threads.size(), 1u);
  const Thread& t = threads[0];
  EXPECT_EQ(t.id(), "Q1");
  EXPECT_EQ(t.question.category, "Visas and Permits");
  EXPECT_EQ(t.question.author_id, "U1");
  EXPECT_EQ(t.question.date, "2010-08-27 01:40:05");
  EXPECT_EQ(t.question.subject, "Driving license");
  EXPECT_EQ(t.question.body, "Can I obtain Driving License & drive?");
  ASSERT_EQ(t.comments.size(), 3u);
  EXPECT_EQ(t.comments[0].position, 1);
  EXPECT_EQ(t.comments[2].position, 3);
  EXPECT_EQ(t.comments[1].gold_label, GoldLabel::PotentiallyUseful);
  EXPECT_EQ(t.comments[1].binary_label(), BinaryLabel::Bad);
  EXPECT_EQ(t.comments[0].binary_label(), BinaryLabel::Good);
  EXPECT_EQ(t.comments[2].body, "lol <b>");
  // QTYPE is not interpreted but survives.
  bool kept = false;
  for (const auto& [k, v] : t.question.attributes) kept = kept || (k == "QTYPE" && v == "GENERAL");
  EXPECT_TRUE(kept);
}

TEST(ParseXml, SemEval2016Layout) {
  const auto threads = parse_xml(kSemEval2016);
  ASSERT_EQ(threads.size(), 1u);
  EXPECT_EQ(threads[0].id(), "Q268_R4");
  EXPECT_EQ(threads[0].question.subject, "best beach");
  ASSERT_EQ(threads[0].comments.size(), 2u);
  EXPECT_EQ(threads[0].comments[0].id, "Q268_R4_C1");
  EXPECT_EQ(threads[0].comments[0].body, "Try Fuwairit.");
  EXPECT_EQ(threads[0].comments[1].author_id, "U5");
}

TEST(ParseXml, PlainLayout) {
  const auto threads = parse_xml(kPlain);
  ASSERT_EQ(threads.size(), 1u);
  EXPECT_EQ(threads[0].comments[1].gold_label, GoldLabel::Good);
  EXPECT_EQ(threads[0].question.author_id, "a");
}

TEST(ParseXml, MalformedReportsLineAndColumn) {
  try {
    parse_xml("<root>\n<question id=\"q\">\n</root>");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(ParseXml, UnknownRelevanceNamesComment) {
  const std::string xml =
      R"(<r><question id="q"><body>b</body><comment id="bad_c" relevance="Maybe"><body>x</body></comment></question></r>)";
  try {
    parse_xml(xml);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("bad_c"), std::string::npos);
  }
}

TEST(ParseXml, QuestionWithoutCommentsNamesQuestion) {
  try {
    parse_xml(R"(<r><question id="lonely"><body>b</body></question></r>)");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("lonely"), std::string::npos);
  }
}

TEST(Records, RoundTrip) {
  const auto threads = parse_xml(kCqaQl);
  const std::string text = write_records(threads);
  EXPECT_EQ(parse_records(text), threads);
  // One line per thread.
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST(Records, ErrorsCarryLineNumber) {
  const std::string good = write_records(parse_xml(kPlain));
  try {
    parse_records(good + "{not json\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Records, DuplicatePositionsRejected) {
  const std::string line =
      R"({"question":{"id":"q","subject":"","body":"b","category":"","author_id":"","date":""},)"
      R"("comments":[{"id":"a","position":1,"author_id":"","date":"","body":"x","gold_label":"Good"},)"
      R"({"id":"b","position":1,"author_id":"","date":"","body":"y","gold_label":"Bad"}]})";
  EXPECT_THROW(parse_records(line), InputError);
}

TEST(Split, DuplicateIdsRejected) {
  auto threads = parse_xml(kPlain);
  threads.push_back(threads[0]);
  EXPECT_THROW(make_split(SplitName::Dev, threads), InputError);
  EXPECT_NO_THROW(make_split(SplitName::Dev, parse_xml(kPlain)));
}

TEST(Validate, PositionsMustBeContiguous) {
  auto t = parse_xml(kPlain)[0];
  EXPECT_NO_THROW(validate_thread(t));
  t.comments[1].position = 3;
  EXPECT_THROW(validate_thread(t), InputError);
}

TEST(Validate, QuestionNeedsText) {
  auto t = parse_xml(kPlain)[0];
  t.question.subject = " ";
  t.question.body = "\t";
  EXPECT_THROW(validate_thread(t), InputError);
}

TEST(GoldLabel, CaseInsensitive) {
  EXPECT_EQ(parse_gold_label("good"), GoldLabel::Good);
  EXPECT_EQ(parse_gold_label("PotentiallyUseful"), GoldLabel::PotentiallyUseful);
  EXPECT_EQ(parse_gold_label("BAD"), GoldLabel::Bad);
  EXPECT_THROW(parse_gold_label("Dialogue"), InputError);
}
