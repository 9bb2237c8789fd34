#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "cqarank/error.hpp"
#include "cqarank/features.hpp"
#include "cqarank/synthetic.hpp"

using namespace cqarank;

namespace {

struct Fixture {
  EmbeddingTable google{"google", 2};
  EmbeddingTable domain{"domain", 3};
  SidecarVectors syntax{2};

  Fixture() {
    google.insert("visa", std::vector<double>{1, 0});
    google.insert("apply", std::vector<double>{0, 1});
    domain.insert("visa", std::vector<double>{1, 1, 0});
    syntax.insert("q", std::vector<double>{1, 0});
  }

  FeatureResources resources() const { return {&google, &domain, &syntax, nullptr, nullptr}; }
};

Question question(std::string body, std::string author = "u1") {
  Question q;
  q.id = "q";
  q.body = std::move(body);
  q.author_id = std::move(author);
  return q;
}

Comment comment(std::string body, int position = 1, std::string author = "u2") {
  Comment c;
  c.id = "c" + std::to_string(position);
  c.body = std::move(body);
  c.position = position;
  c.author_id = std::move(author);
  return c;
}

double value(const FeatureContext& ctx, const FeatureVector& v, const std::string& name) {
  const auto& e = ctx.schema().entries;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k].name == name) return v.values[k];
  }
  ADD_FAILURE() << "no feature " << name;
  return 0.0;
}

}  // namespace

TEST(Schema, GroupWidths) {
  Fixture f;
  const FeatureContext ctx({}, f.resources());
  const auto& s = ctx.schema();
  EXPECT_EQ(s.group_width(FeatureGroup::MTfeats), kMTfeatsWidth);
  EXPECT_EQ(s.group_width(FeatureGroup::BLEUcomp), kBLEUcompWidth);
  EXPECT_EQ(s.group_width(FeatureGroup::CosineSim), 2u);
  EXPECT_EQ(s.group_width(FeatureGroup::TaskComment), kTaskCommentWidth);
  EXPECT_EQ(s.group_width(FeatureGroup::TaskPair), kTaskPairWidth);
  EXPECT_EQ(s.group_width(FeatureGroup::TaskMeta), kTaskMetaWidth);
  EXPECT_EQ(s.input_dim(), 5u);
  std::set<std::string> names;
  for (const auto& e : s.entries) names.insert(e.name);
  EXPECT_EQ(names.size(), s.total_dim());
}

TEST(Schema, TogglesChangeWidthAndId) {
  Fixture f;
  const FeatureConfig full;
  const FeatureContext base(full, f.resources());
  EXPECT_EQ(FeatureContext(full, f.resources()).schema_id(), base.schema_id());
  struct Case {
    bool FeatureConfig::*flag;
    std::size_t width;
  };
  for (const Case c : {Case{&FeatureConfig::mtfeats, kMTfeatsWidth}, Case{&FeatureConfig::bleucomp, kBLEUcompWidth},
                       Case{&FeatureConfig::task_comment, kTaskCommentWidth},
                       Case{&FeatureConfig::task_pair, kTaskPairWidth}, Case{&FeatureConfig::task_meta, kTaskMetaWidth}}) {
    FeatureConfig cfg = full;
    cfg.*(c.flag) = false;
    const FeatureContext ctx(cfg, f.resources());
    EXPECT_EQ(ctx.schema().total_dim() + c.width, base.schema().total_dim());
    EXPECT_NE(ctx.schema_id(), base.schema_id());
  }
  FeatureConfig swapped = full;
  swapped.swap_mte_direction = true;
  EXPECT_NE(FeatureContext(swapped, f.resources()).schema_id(), base.schema_id());
}

TEST(Context, MissingResourceIsConfigError) {
  FeatureConfig cfg;
  cfg.syntax = true;
  EXPECT_THROW(FeatureContext(cfg, FeatureResources{}), ConfigError);
}

TEST(CommentFeatures, Thanks) {
  Fixture f;
  const FeatureContext ctx({}, f.resources());
  const auto named = comment_features(comment("Thanks!"), ctx);
  ASSERT_EQ(named.size(), kTaskCommentWidth);
  auto get = [&](const std::string& n) {
    for (const auto& [k, v] : named) {
      if (k == n) return v;
    }
    ADD_FAILURE() << n;
    return -1.0;
  };
  EXPECT_EQ(get("comment.thank"), 1);
  EXPECT_EQ(get("comment.exclamation_run1"), 1);
  EXPECT_EQ(get("comment.tokens"), 2);
  EXPECT_EQ(get("comment.sentences"), 1);
  EXPECT_EQ(get("comment.pos_present"), 0);
}

TEST(CommentFeatures, PunctuationOnly) {
  Fixture f;
  const FeatureContext ctx({}, f.resources());
  const auto named = comment_features(comment("."), ctx);
  for (const auto& [k, v] : named) {
    if (k == "comment.tokens") EXPECT_EQ(v, 1);
    if (k == "comment.type_token_ratio") EXPECT_EQ(v, 1);
  }
}

TEST(CommentFeatures, UrlAndEmails) {
  Fixture f;
  const FeatureContext ctx({}, f.resources());
  for (const auto& [k, v] : comment_features(comment("see http://x.org or a@b.com, c@d.com"), ctx)) {
    if (k == "comment.url") EXPECT_EQ(v, 1);
    if (k == "comment.email") EXPECT_EQ(v, 2);
  }
}

TEST(PairFeatures, MetaFeatures) {
  Fixture f;
  const FeatureContext ctx({}, f.resources());
  const auto v3 = pair_features(question("visa?"), comment("apply", 3, "u1"), ctx);
  EXPECT_DOUBLE_EQ(value(ctx, v3, "meta.reciprocal_rank"), 1.0 / 3.0);
  EXPECT_EQ(value(ctx, v3, "meta.same_author"), 1.0);
  const auto v4 = pair_features(question("visa?"), comment("apply", 4, "u9"), ctx);
  EXPECT_LT(value(ctx, v4, "meta.reciprocal_rank"), value(ctx, v3, "meta.reciprocal_rank"));
  EXPECT_EQ(value(ctx, v4, "meta.same_author"), 0.0);
  EXPECT_EQ(v3.values.size(), ctx.schema().total_dim());
  EXPECT_EQ(v3.schema_id, ctx.schema_id());
}

TEST(PairFeatures, IdenticalTexts) {
  Fixture f;
  const FeatureContext ctx({}, f.resources());
  const auto v = pair_features(question("how to apply visa"), comment("how to apply visa"), ctx);
  EXPECT_DOUBLE_EQ(value(ctx, v, "mt.bleu"), 1.0);
  EXPECT_DOUBLE_EQ(value(ctx, v, "mt.ter"), 0.0);
  EXPECT_NEAR(value(ctx, v, "cos.google"), 1.0, 1e-12);
  EXPECT_NEAR(value(ctx, v, "cos.domain"), 1.0, 1e-12);
}

TEST(PairFeatures, ZeroDenominatorIndicator) {
  Fixture f;
  const FeatureContext ctx({}, f.resources());
  // Every comment token is in the google table, so its OOV count is 0.
  const auto v = pair_features(question("visa unknownword"), comment("visa"), ctx);
  EXPECT_EQ(value(ctx, v, "pair.ratio_oov"), 0.0);
  EXPECT_EQ(value(ctx, v, "pair.ratio_oov_zero_denominator"), 1.0);
  EXPECT_EQ(value(ctx, v, "pair.ratio_tokens"), 2.0);
  EXPECT_EQ(value(ctx, v, "pair.ratio_tokens_zero_denominator"), 0.0);
}

TEST(PairFeatures, Deterministic) {
  Fixture f;
  const FeatureContext ctx({}, f.resources());
  const auto a = pair_features(question("what about visa?"), comment("apply online :) thanks"), ctx);
  const auto b = pair_features(question("what about visa?"), comment("apply online :) thanks"), ctx);
  EXPECT_EQ(a.values, b.values);
}

TEST(PairFeatures, PosAnnotations) {
  Fixture f;
  PosAnnotations pos;
  pos.insert("c1", {PosTag::Verb, PosTag::Noun});
  FeatureResources r = f.resources();
  r.pos = &pos;
  const FeatureContext ctx({}, r);
  const auto v = pair_features(question("visa"), comment("apply visa"), ctx);
  EXPECT_EQ(value(ctx, v, "comment.pos_noun"), 1.0);
  EXPECT_EQ(value(ctx, v, "comment.pos_verb"), 1.0);
  EXPECT_EQ(value(ctx, v, "comment.pos_present"), 1.0);
  pos.insert("c1", {PosTag::Verb});
  EXPECT_THROW(pair_features(question("visa"), comment("apply visa"), ctx), InputError);
}

TEST(PosFile, Parses) {
  std::istringstream in("c1\tNOUN VERB OTHER\n");
  const auto p = load_pos_annotations(in);
  ASSERT_NE(p.find("c1"), nullptr);
  EXPECT_EQ(p.find("c1")->size(), 3u);
  std::istringstream bad("c1\tNOUN FOO\n");
  EXPECT_THROW(load_pos_annotations(bad), ParseError);
}

TEST(Scaler, FitAndApply) {
  const std::vector<FeatureVector> vs{{{2, 5}, 9}, {{4, 5}, 9}};
  const Scaler s = fit_scaler(vs);
  EXPECT_EQ(s.min, (std::vector<double>{2, 5}));
  EXPECT_EQ(s.max, (std::vector<double>{4, 5}));
  EXPECT_EQ(apply_scaler(s, {{3, 5}, 9}).values, (std::vector<double>{0, 0}));
  EXPECT_EQ(apply_scaler(s, {{2, 7}, 9}).values, (std::vector<double>{-1, 0}));
  EXPECT_EQ(apply_scaler(s, {{7, 5}, 9}).values, (std::vector<double>{1, 0}));
  EXPECT_THROW(apply_scaler(s, {{3, 5}, 8}), SchemaError);
  EXPECT_THROW(fit_scaler(std::vector<FeatureVector>{}), InputError);
  const Scaler one = fit_scaler(std::vector<FeatureVector>{{{1, 2}, 9}});
  EXPECT_EQ(one.min, one.max);
}

TEST(Normalizer, FitsOnTrainingOnly) {
  SyntheticConfig sc;
  sc.train_threads = 6;
  sc.test_threads = 6;
  const auto corpus = make_synthetic(sc);
  const auto g = to_table(corpus.google, "google");
  const auto d = to_table(corpus.domain, "domain");
  const FeatureContext ctx({}, FeatureResources{&g, &d, nullptr, nullptr, nullptr});
  auto train = prepare_threads(corpus.train, ctx);
  auto test = prepare_threads(corpus.test, ctx);
  const Normalizer on_train = fit_normalizer(train, true);
  std::vector<PreparedThread> both = train;
  both.insert(both.end(), test.begin(), test.end());
  const Normalizer on_both = fit_normalizer(both, true);
  // The test split moves at least one extreme, so fitting on it would leak.
  EXPECT_TRUE(on_train.features.min != on_both.features.min || on_train.features.max != on_both.features.max);
}

TEST(FeatureDump, RoundTrip) {
  Fixture f;
  const FeatureContext ctx({}, f.resources());
  Thread t;
  t.question = question("visa please");
  t.comments = {comment("apply", 1), comment("no idea", 2)};
  const auto prepared = prepare_threads(std::vector<Thread>{t}, ctx);
  std::stringstream buf;
  write_feature_dump(buf, ctx.schema(), prepared);
  const FeatureDump dump = read_feature_dump(buf);
  EXPECT_EQ(dump.schema_id, ctx.schema_id());
  EXPECT_EQ(dump.names.size(), ctx.schema().total_dim());
  const auto again = prepare_thread(t, ctx, &dump);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(again.pair_features[i].values, prepared[0].pair_features[i].values);

  FeatureConfig other;
  other.task_meta = false;
  const FeatureContext other_ctx(other, f.resources());
  EXPECT_THROW(prepare_thread(t, other_ctx, &dump), SchemaError);
}
