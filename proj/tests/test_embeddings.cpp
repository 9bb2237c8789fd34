#include <gtest/gtest.h>

#include <sstream>

#include "cqarank/embeddings.hpp"
#include "cqarank/error.hpp"

using namespace cqarank;

TEST(LoadTable, WithAndWithoutHeader) {
  std::istringstream a("2 3\ncat 1 0 0\ndog 0 1 0\n");
  const auto t = load_table(a, "g");
  EXPECT_EQ(t.dim(), 3u);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ((*t.find("dog"))[1], 1.0);

  std::istringstream b("cat 1 0\ndog 0 1\n");
  EXPECT_EQ(load_table(b, "g").dim(), 2u);
}

TEST(LoadTable, WidthMismatchNamesLine) {
  std::istringstream in("cat 1 0 0\ndog 0 1\n");
  try {
    load_table(in, "g");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(LoadTable, DuplicatesLastWins) {
  std::istringstream in("cat 1 0\ncat 0 1\n");
  const auto t = load_table(in, "g");
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.duplicate_rows(), 1u);
  EXPECT_EQ((*t.find("cat"))[1], 1.0);
}

TEST(LoadTable, MissingFileIsConfigError) {
  try {
    load_table(std::string("/nonexistent/vectors.txt"), "g");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/vectors.txt"), std::string::npos);
  }
}

TEST(EmbedText, MeanOfKnownWords) {
  EmbeddingTable t("g", 2);
  t.insert("a", std::vector<double>{1, 0});
  t.insert("b", std::vector<double>{0, 1});
  const auto v = embed_text({"a", "b", "zzz"}, t);
  EXPECT_DOUBLE_EQ(v.values[0], 0.5);
  EXPECT_DOUBLE_EQ(v.values[1], 0.5);
  const auto none = embed_text({"zzz"}, t);
  EXPECT_EQ(none.values, (std::vector<double>{0, 0}));
  EXPECT_EQ(oov_count({"a", "zzz", "q"}, t), 2u);
}

TEST(Cosine, Properties) {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> z{0, 0, 0};
  EXPECT_NEAR(cosine(a, a), 1.0, 1e-15);
  EXPECT_EQ(cosine(a, z), 0.0);
  const std::vector<double> neg{-1, -2, -3};
  EXPECT_NEAR(cosine(a, neg), -1.0, 1e-15);
  EXPECT_THROW(cosine(a, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Sidecar, LoadAndLookup) {
  std::istringstream in("Q1 1 2\nQ1_C1 3 4\n");
  const auto s = load_sidecar_vectors(in, 2);
  EXPECT_EQ((*s.find("Q1_C1"))[0], 3.0);
  EXPECT_FALSE(s.find("nope").has_value());
  std::istringstream bad("Q1 1 2 3\n");
  try {
    load_sidecar_vectors(bad, 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("Q1"), std::string::npos);
  }
}
