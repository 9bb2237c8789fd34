#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cqarank/config.hpp"
#include "cqarank/error.hpp"

using namespace cqarank;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = -1;
  std::string out;  // stdout and stderr together
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(CQARANK_BIN) + " " + args + " 2>&1";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("cqarank_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kGold = R"(<r>
<question id="Q1"><body>what?</body>
  <comment id="Q1_C1" relevance="Bad"><body>a</body></comment>
  <comment id="Q1_C2" relevance="Good"><body>b</body></comment>
</question>
<question id="Q2"><body>where?</body>
  <comment id="Q2_C1" relevance="Good"><body>c</body></comment>
  <comment id="Q2_C2" relevance="PotentiallyUseful"><body>d</body></comment>
</question>
</r>)";

}  // namespace

TEST(Config, ParsesKeysAndComments) {
  std::istringstream in("# run\ntrain.epochs = 7   # short\nfeatures.task_meta = false\nrank.accumulation = sum\n\n");
  RunConfig cfg;
  read_config(in, cfg);
  EXPECT_EQ(cfg.train.epochs, 7);
  EXPECT_FALSE(cfg.features.task_meta);
  EXPECT_EQ(cfg.accumulation, Accumulation::PlainSum);
}

TEST(Config, ErrorsNameTheLine) {
  RunConfig cfg;
  std::istringstream unknown("train.epochs = 3\nbogus.key = 1\n");
  try {
    read_config(unknown, cfg);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("bogus.key"), std::string::npos);
  }
  std::istringstream bad_value("train.lambda = lots\n");
  EXPECT_THROW(read_config(bad_value, cfg), ConfigError);
  std::istringstream no_eq("train.lambda\n");
  EXPECT_THROW(read_config(no_eq, cfg), ConfigError);
}

TEST(Config, DumpRoundTrips) {
  RunConfig cfg;
  apply_override(cfg, "train.eta=0.05");
  apply_override(cfg, "features.swap_mte_direction=true");
  apply_override(cfg, "train.variant=classification");
  std::istringstream in(dump_config(cfg));
  RunConfig back;
  read_config(in, back);
  EXPECT_EQ(back.train.eta, 0.05);
  EXPECT_EQ(back.features, cfg.features);
  EXPECT_EQ(back.train.variant, Variant::Classification);
  EXPECT_EQ(dump_config(back), dump_config(cfg));
}

TEST(Config, VanillaPreset) {
  RunConfig cfg;
  apply_preset(cfg, "mte_vanilla");
  EXPECT_FALSE(cfg.features.task_comment);
  EXPECT_FALSE(cfg.features.task_pair);
  EXPECT_FALSE(cfg.features.task_meta);
  EXPECT_FALSE(cfg.features.domain);
  EXPECT_TRUE(cfg.features.mtfeats);
  EXPECT_THROW(apply_preset(cfg, "turbo"), ConfigError);
}

TEST(Config, ValidateNamesMissingFile) {
  const fs::path d = scratch("validate");
  write(d / "train.jsonl", "");
  RunConfig cfg;
  cfg.paths.train = (d / "train.jsonl").string();
  cfg.paths.model = (d / "m.bin").string();
  cfg.paths.google_embeddings = "/nonexistent/google.txt";
  cfg.paths.domain_embeddings = (d / "train.jsonl").string();
  try {
    validate(cfg, static_cast<unsigned>(Need::Train));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/google.txt"), std::string::npos) << e.what();
  }
  cfg.features.google = false;
  EXPECT_NO_THROW(validate(cfg, static_cast<unsigned>(Need::Train)));
  fs::remove_all(d);
}

TEST(Config, RelativePathsResolveAgainstConfigFile) {
  const fs::path d = scratch("relative");
  write(d / "run.conf", "paths.train = data/train.jsonl\npaths.test = /abs/test.jsonl\n");
  const RunConfig cfg = load_config((d / "run.conf").string());
  EXPECT_EQ(fs::path(cfg.paths.train), d / "data/train.jsonl");
  EXPECT_EQ(cfg.paths.test, "/abs/test.jsonl");
  fs::remove_all(d);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("no-such-command").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST(Cli, MissingEmbeddingFileExitsTwoNamingPath) {
  const fs::path d = scratch("missing");
  write(d / "train.xml", kGold);
  write(d / "run.conf", "paths.train = train.xml\npaths.model = m.bin\npaths.google_embeddings = nope/google.txt\n"
                        "features.domain = false\n");
  const CliRun r = run("train -c " + (d / "run.conf").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("nope/google.txt"), std::string::npos) << r.out;
  EXPECT_FALSE(fs::exists(d / "m.bin"));
  fs::remove_all(d);
}

TEST(Cli, EvaluatePerfectAndWorstRankings) {
  const fs::path d = scratch("evaluate");
  write(d / "gold.xml", kGold);
  write(d / "perfect.tsv", "Q1\tQ1_C2\t1\t1\tperfect\nQ1\tQ1_C1\t2\t0\tperfect\nQ2\tQ2_C1\t1\t1\tperfect\n"
                           "Q2\tQ2_C2\t2\t0\tperfect\n");
  write(d / "worst.tsv", "Q1\tQ1_C1\t1\t1\tworst\nQ1\tQ1_C2\t2\t0\tworst\nQ2\tQ2_C2\t1\t1\tworst\n"
                         "Q2\tQ2_C1\t2\t0\tworst\n");
  const CliRun r = run("evaluate --gold " + (d / "gold.xml").string() + " " + (d / "perfect.tsv").string() + " " +
                    (d / "worst.tsv").string() + " --summary " + (d / "summary.tsv").string());
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("100.00"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("50.00"), std::string::npos) << r.out;
  EXPECT_LT(r.out.find("perfect"), r.out.find("worst"));
  const std::string summary = slurp(d / "summary.tsv");
  EXPECT_EQ(summary.substr(0, 10), "perfect\t1\t");

  write(d / "unknown.tsv", "Q1\tQ1_C9\t1\t1\tx\n");
  const CliRun u = run("evaluate --gold " + (d / "gold.xml").string() + " " + (d / "unknown.tsv").string());
  EXPECT_EQ(u.status, 2);
  EXPECT_NE(u.out.find("Q1_C9"), std::string::npos);
  fs::remove_all(d);
}

TEST(Cli, ScoreMetrics) {
  const CliRun r = run("score-metrics --hyp \"the cat sat on mat\" --ref \"the cat sat on the mat\"");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("bleu\t0.5789"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("p2\t0.750000\t3/4"), std::string::npos) << r.out;
}

TEST(Cli, TaskMetaToggleChangesSchema) {
  const fs::path d = scratch("schema");
  ASSERT_EQ(run("synth -o " + d.string() + " --train 4 --test 2").status, 0);
  const std::string conf = (d / "run.conf").string();
  const CliRun a = run("extract-features -c " + conf + " -o " + (d / "a.tsv").string());
  const CliRun b = run("extract-features -c " + conf + " --set features.task_meta=false -o " + (d / "b.tsv").string());
  ASSERT_EQ(a.status, 0) << a.out;
  ASSERT_EQ(b.status, 0) << b.out;
  auto header = [](const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line.substr(0, line.find('\t', 8));
  };
  EXPECT_NE(header(d / "a.tsv"), header(d / "b.tsv"));
  EXPECT_EQ(header(d / "a.tsv").substr(0, 8), "#schema\t");
  fs::remove_all(d);
}

TEST(Cli, EndToEndOnSyntheticData) {
  const fs::path d = scratch("e2e");
  ASSERT_EQ(run("synth -o " + d.string() + " --train 30 --test 10").status, 0);
  const std::string conf = (d / "run.conf").string();
  const CliRun t = run("train -c " + conf + " --set train.epochs=5 --log " + (d / "log.tsv").string());
  ASSERT_EQ(t.status, 0) << t.out;
  EXPECT_TRUE(fs::exists(d / "model.bin"));
  ASSERT_EQ(run("rank -c " + conf + " -m pairwise -o " + (d / "nn.tsv").string()).status, 0);
  ASSERT_EQ(run("rank -c " + conf + " -m baseline-time -o " + (d / "time.tsv").string()).status, 0);
  const CliRun e = run("evaluate --gold " + (d / "test.jsonl").string() + " " + (d / "nn.tsv").string() + " " +
                    (d / "time.tsv").string());
  ASSERT_EQ(e.status, 0) << e.out;
  EXPECT_NE(e.out.find("pairwise"), std::string::npos);
  EXPECT_NE(e.out.find("baseline-time"), std::string::npos);

  // The full-feature model refuses a context without the meta features.
  const CliRun wrong = run("rank -c " + conf + " --set features.task_meta=false -m pairwise");
  EXPECT_EQ(wrong.status, 2);
  EXPECT_NE(wrong.out.find("schema"), std::string::npos) << wrong.out;
  fs::remove_all(d);
}
