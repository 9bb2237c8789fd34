#include <gtest/gtest.h>

#include "cqarank/textproc.hpp"

using namespace cqarank;

TEST(Tokenize, LowercasesAndPeelsPunctuation) {
  EXPECT_EQ(tokenize("Can I obtain Driving License?"),
            (TokenSeq{"can", "i", "obtain", "driving", "license", "?"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("   \t\n").empty());
}

TEST(Tokenize, KeepsUrlsWhole) {
  EXPECT_EQ(tokenize("see http://a.b/c now!"), (TokenSeq{"see", "http://a.b/c", "now", "!"}));
  EXPECT_EQ(tokenize("(www.qatarliving.com)."), (TokenSeq{"(", "www.qatarliving.com", ").",}));
}

TEST(Tokenize, PunctuationOnlyChunkIsOneToken) {
  EXPECT_EQ(tokenize("ok ?!? :-)"), (TokenSeq{"ok", "?!?", ":-)"}));
  EXPECT_EQ(tokenize("."), (TokenSeq{"."}));
}

TEST(Tokenize, NoEmptyTokens) {
  for (const char* s : {"a  b", "\"quoted\"", "...", "x,y", "end."}) {
    for (const auto& t : tokenize(s)) EXPECT_FALSE(t.empty()) << s;
  }
}

TEST(SplitSentences, Examples) {
  EXPECT_EQ(split_sentences("Yes. Just apply."), (std::vector<std::string>{"Yes.", "Just apply."}));
  EXPECT_EQ(split_sentences("no terminal punct"), (std::vector<std::string>{"no terminal punct"}));
  EXPECT_EQ(split_sentences("Really?!? Ok."), (std::vector<std::string>{"Really?!?", "Ok."}));
  EXPECT_TRUE(split_sentences("").empty());
}

TEST(NGrams, Counts) {
  const TokenSeq s{"a", "b", "a"};
  const auto one = ngrams(s, 1);
  EXPECT_EQ(one.count({"a"}), 2);
  EXPECT_EQ(one.count({"b"}), 1);
  EXPECT_EQ(one.total(), 3);
  const auto two = ngrams(s, 2);
  EXPECT_EQ(two.count({"a", "b"}), 1);
  EXPECT_EQ(two.count({"b", "a"}), 1);
  EXPECT_EQ(two.total(), 2);
  EXPECT_EQ(ngrams(TokenSeq{"a"}, 2).total(), 0);
  EXPECT_THROW(ngrams(s, 0), std::invalid_argument);
}

TEST(StemLight, Examples) {
  EXPECT_EQ(stem_light("driving"), "driv");
  EXPECT_EQ(stem_light("is"), "is");
  EXPECT_EQ(stem_light("uses"), "use");
  EXPECT_EQ(stem_light("walked"), "walk");
  EXPECT_EQ(stem_light("quickly"), "quick");
  EXPECT_EQ(stem_light("cat"), "cat");
}

TEST(Patterns, ThankAndRuns) {
  EXPECT_EQ(count_pattern("Thanks, thank you", Pattern::ThankSubstring), 2);
  EXPECT_EQ(count_pattern("!!! wow !!", Pattern::ExclamationRun, 3), 1);
  EXPECT_EQ(count_pattern("!!! wow !!", Pattern::ExclamationRun, 2), 1);
  EXPECT_EQ(count_pattern("!!! wow !!", Pattern::ExclamationRun, 1), 0);
  EXPECT_EQ(count_pattern("what?? really????", Pattern::InterrogationRun, 3), 1);
  EXPECT_EQ(count_pattern("what?? really????", Pattern::InterrogationRun, 2), 1);
}

TEST(Patterns, EmailUrlPhoneImage) {
  EXPECT_EQ(count_pattern("mail me a@b.com or c@d.org", Pattern::Email), 2);
  EXPECT_EQ(count_pattern("see http://x.org and www.y.com.", Pattern::Url), 2);
  EXPECT_EQ(count_pattern("call +974 5555 1234 or 44556677.", Pattern::Phone), 1);
  EXPECT_EQ(count_pattern("pic <img src=\"a.png\"> and b.jpg", Pattern::Image), 2);
}

TEST(Patterns, Smileys) {
  EXPECT_EQ(count_pattern("great :) really :-) :D", Pattern::PositiveSmiley), 3);
  EXPECT_EQ(count_pattern("sad :( very :'(", Pattern::NegativeSmiley), 2);
}

TEST(Interrogative, FinalRunDecides) {
  EXPECT_TRUE(is_interrogative("Is it open?"));
  EXPECT_TRUE(is_interrogative("Really?!"));
  EXPECT_FALSE(is_interrogative("It is open."));
}
