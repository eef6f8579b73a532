#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "tenantalloc/io.hpp"
#include "test_support.hpp"

namespace ta = tenantalloc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + TENANTALLOC_CLI + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fx(const std::string& name) { return std::string(TENANTALLOC_FIXTURES) + "/" + name; }

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("tenantalloc-cli-" + std::to_string(getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string operator()(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

}  // namespace

TEST(CliRun, TwoAgentExample) {
  auto r = cli("run " + fx("e2.json") + " --mechanism msir");
  ASSERT_EQ(r.code, 0);
  auto file = ta::read_allocation(ta::testing::e2(), r.out);
  EXPECT_EQ(file.allocation, ta::Allocation::endowment(ta::testing::e2()));
  EXPECT_EQ(file.welfare, 0u);

  r = cli("run " + fx("e2.json") + " --mechanism mir");
  ASSERT_EQ(r.code, 0);
  file = ta::read_allocation(ta::testing::e2(), r.out);
  EXPECT_EQ(file.allocation[0], ta::HouseSlot{1});
  EXPECT_EQ(file.welfare, 1u);
}

TEST(CliRun, EmptyInstance) {
  const auto r = cli("run " + fx("empty.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"welfare\": 0"), std::string::npos);
}

TEST(CliRun, PermutationSources) {
  Scratch tmp;
  ta::write_file(tmp("order.json"), "[\"3\", \"1\", \"2\", \"5\", \"4\"]\n");
  EXPECT_EQ(cli("run " + fx("e1.json") + " --permutation file:" + tmp("order.json")).code, 0);
  const auto a = cli("run " + fx("e1.json") + " --permutation seed:11");
  const auto b = cli("run " + fx("e1.json") + " --permutation seed:11");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  ta::write_file(tmp("bad.json"), "[\"1\", \"1\", \"2\", \"3\", \"4\"]\n");
  EXPECT_EQ(cli("run " + fx("e1.json") + " --permutation file:" + tmp("bad.json")).code, 2);
  EXPECT_EQ(cli("run " + fx("e1.json") + " --permutation random").code, 2);
}

TEST(CliRun, OutputFile) {
  Scratch tmp;
  ASSERT_EQ(cli("run " + fx("e1.json") + " --mechanism mir --output " + tmp("x.json")).code, 0);
  const auto file = ta::read_allocation(ta::testing::e1(), ta::read_file(tmp("x.json")));
  EXPECT_EQ(file.welfare, 5u);
  EXPECT_TRUE(file.trace);
}

TEST(CliVerify, ExitCodes) {
  auto r = cli("verify " + fx("e3.json") + " " + fx("e3_z.json") + " --properties ir,core");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("ir: holds"), std::string::npos);
  EXPECT_NE(r.out.find("\"coalition\":[\"1\",\"2\"]"), std::string::npos);

  EXPECT_EQ(cli("verify " + fx("e1.json") + " " + fx("e1_y.json") + " --properties ir,po").code, 0);
  EXPECT_EQ(cli("verify " + fx("e1.json") + " " + fx("e1_x.json") + " --properties sir").code, 0);
  EXPECT_EQ(cli("verify " + fx("e1.json") + " " + fx("e1_x.json") + " --properties maxw").code, 1);
  EXPECT_EQ(cli("verify " + fx("e1.json") + " " + fx("e1_x.json") + " --properties bogus").code, 2);
  EXPECT_EQ(cli("verify " + fx("e1.json") + " " + fx("e3_z.json")).code, 2);
}

TEST(CliVerify, BudgetExceeded) {
  const auto r = cli("verify " + fx("e1.json") + " " + fx("e1_x.json") + " --properties maxw-ir",
                     "TENANTALLOC_MAX_ENUM_AGENTS=2");
  EXPECT_EQ(r.code, 4);
}

TEST(CliGen, DeterministicAndValidated) {
  const auto a = cli("gen --agents 4 --houses 5 --seed 3");
  const auto b = cli("gen --agents 4 --houses 5 --seed 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(ta::read_instance(a.out).agent_count(), 4u);
  EXPECT_EQ(cli("gen --agents 0 --houses 0").code, 0);
  EXPECT_EQ(cli("gen --agents 2 --houses 2 --endow-prob 1.5").code, 2);
  EXPECT_EQ(cli("gen --agents 2").code, 2);
}

TEST(CliErrors, BadInput) {
  Scratch tmp;
  ta::write_file(tmp("dup.json"),
                 R"({"agents": [{"id": "1", "endowment": "h1"}, {"id": "2", "endowment": "h1"}],)"
                 R"( "houses": ["h1"]})");
  EXPECT_EQ(cli("run " + tmp("dup.json")).code, 2);
  EXPECT_EQ(cli("run " + tmp("missing.json")).code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("").code, 2);
}

TEST(CliReport, SmallRun) {
  Scratch tmp;
  const auto r = cli("report --trials 50 --seed 1 --max-agents 4 --max-houses 4 --out-dir " +
                     tmp("ce"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(tmp("ce/summary.json")));
  EXPECT_TRUE(fs::exists(tmp("ce/mir-core-instance.json")));
  EXPECT_EQ(cli("report --trials 5 --max-agents 30 --out-dir " + tmp("ce2")).code, 4);
}
