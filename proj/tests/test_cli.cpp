#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "incdb/io.hpp"
#include "incdb/oracle.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = INCDB_TEST_DATA;
const std::string kCli = INCDB_CLI_PATH;

struct Outcome {
  int code;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("incdb_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const std::string cmd = "'" + kCli + "' " + args + " > '" + out.string() + "' 2> '" + (dir_ / "stderr.txt").string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, incdb::io::read_file(out)};
  }

  std::string running(const std::string& table = "running.csv") const {
    return "--schema " + (kData / "running_schema.txt").string() + " --table " + (kData / table).string() +
           " --fds " + (kData / "running_fds.txt").string();
  }
  std::string chain() const {
    return "--schema " + (kData / "abc_schema.txt").string() + " --table " + (kData / "chain.csv").string() +
           " --fds " + (kData / "chain_fds.txt").string();
  }
  fs::path write(const std::string& name, const std::string& text) const {
    incdb::io::write_file(dir_ / name, text);
    return dir_ / name;
  }
  std::string read(const fs::path& p) const { return incdb::io::read_file(p); }

  fs::path dir_;
};

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_F(Cli, ChaseWritesOutputs) {
  ASSERT_EQ(run("chase " + running() + " --out " + (dir_ / "o").string()).code, 0);
  const std::string dstar = read(dir_ / "o" / "dstar.csv");
  EXPECT_EQ(lines(dstar), 8u);
  EXPECT_NE(dstar.find("i3,k',m,\n"), std::string::npos);
  EXPECT_EQ(read(dir_ / "o" / "inc.txt"), "Id -> C: i2\n");
  EXPECT_NE(read(dir_ / "o" / "stats.txt").find("conflict_degree 2"), std::string::npos);

  ASSERT_EQ(run("chase " + chain() + " --out " + (dir_ / "e").string()).code, 0);
  EXPECT_EQ(read(dir_ / "e" / "inc.txt"), "B -> C: b\n");
}

TEST_F(Cli, ChaseIsByteIdenticalAcrossRuns) {
  ASSERT_EQ(run("chase " + running() + " --out " + (dir_ / "a").string()).code, 0);
  ASSERT_EQ(run("chase " + running() + " --out " + (dir_ / "b").string()).code, 0);
  for (const char* f : {"dstar.csv", "inc.txt", "stats.txt"}) EXPECT_EQ(read(dir_ / "a" / f), read(dir_ / "b" / f));
}

TEST_F(Cli, EmptyFDFile) {
  const auto fds = write("none.txt", "");
  const std::string args = "--schema " + (kData / "running_schema.txt").string() + " --table " +
                           (kData / "running.csv").string() + " --fds " + fds.string();
  ASSERT_EQ(run("chase " + args + " --out " + (dir_ / "o").string()).code, 0);
  EXPECT_EQ(read(dir_ / "o" / "inc.txt"), "");
  EXPECT_EQ(lines(read(dir_ / "o" / "dstar.csv")), 8u);
}

TEST_F(Cli, Classify) {
  ASSERT_EQ(run("classify " + chain() + " --out " + (dir_ / "e").string()).code, 0);
  EXPECT_EQ(lines(read(dir_ / "e" / "inc_tuples.csv")), 10u);
  ASSERT_EQ(run("classify " + running() + " --out " + (dir_ / "r").string()).code, 0);
  const std::string labeled = read(dir_ / "r" / "labeled.csv");
  std::size_t trues = 0, incs = 0;
  std::istringstream in(labeled);
  for (std::string line; std::getline(in, line);) {
    if (line.ends_with(",true")) ++trues;
    if (line.ends_with(",inc")) ++incs;
  }
  EXPECT_EQ(trues, 3u);
  EXPECT_EQ(incs, 4u);
}

TEST_F(Cli, Truth) {
  EXPECT_EQ(run("truth " + running() + " --tuple Id=i2").out, "inc\n");
  EXPECT_EQ(run("truth " + running() + " --tuple \"Id=i1,K=k'\"").out, "false\n");
  EXPECT_EQ(run("truth " + running() + " --tuple Id=i9").out, "unkn\n");
  EXPECT_EQ(run("truth " + running() + " --tuple Id").code, 2);
}

TEST_F(Cli, Merge) {
  const std::string fds = (kData / "running_fds.txt").string();
  const Outcome r = run("merge --schema " + (kData / "running_schema.txt").string() + " --table " +
                    (kData / "running_d1.csv").string() + " --fds " + fds + " --table " +
                    (kData / "running_d2.csv").string() + " --fds " + fds + " --out " + (dir_ / "m").string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Id=i2 | true,true | true | inc | no\n"), std::string::npos);
  EXPECT_NE(r.out.find("Id=i2,C=c | true,false | inc | inc | yes\n"), std::string::npos);
  EXPECT_EQ(lines(read(dir_ / "m" / "merged.csv")), 9u);
}

TEST_F(Cli, Query) {
  EXPECT_EQ(run("query " + running() + " --query \"SELECT Id,K,C\" --mode consistent").out, "Id,K,C\ni1,k,c\n");
  EXPECT_EQ(lines(run("query " + running() + " --query \"SELECT Id,K,M\" --mode lower").out), 4u);
  EXPECT_EQ(lines(run("query " + running() + " --query \"SELECT Id,K,M\" --mode upper").out), 6u);
  EXPECT_EQ(lines(run("query " + running() + " --query \"SELECT M,C WHERE K = 'k''\" --mode consistent").out), 5u);
  EXPECT_EQ(run("query " + running() + " --query \"SELECT Id,K,C\" --mode plain --annotate").out,
            "Id,K,C,truth\ni1,k,c,true\ni2,k',c,inc\ni2,k',c',inc\n");
}

TEST_F(Cli, QueryErrors) {
  EXPECT_EQ(run("query " + running() + " --query \"SELECT Id WHERE\"").code, 2);
  EXPECT_EQ(run("query " + running() + " --query \"SELECT Id WHERE K = M\"").code, 3);
  EXPECT_EQ(run("query " + running() + " --query \"SELECT Id\" --mode best").code, 2);
}

TEST_F(Cli, Repairs) {
  const Outcome r = run("repairs " + running() + " --out " + (dir_ / "r").string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2\n");
  EXPECT_EQ(lines(read(dir_ / "r" / "repair_1.csv")), 6u);
  EXPECT_EQ(run("repairs " + chain() + " --out " + (dir_ / "e").string()).out, "2\n");
  EXPECT_EQ(run("repairs " + running("running_d1.csv") + " --out " + (dir_ / "c").string()).out, "1\n");
  const Outcome capped = run("repairs " + running() + " --out " + (dir_ / "x").string() + " --cap 1");
  EXPECT_EQ(capped.code, 4);
  EXPECT_NE(read(dir_ / "stderr.txt").find("2"), std::string::npos);
}

TEST_F(Cli, ParseErrors) {
  const auto bad = write("bad.csv", "Id,Q\ni1,q\n");
  const std::string args = "--schema " + (kData / "running_schema.txt").string() + " --table " + bad.string() +
                           " --fds " + (kData / "running_fds.txt").string();
  EXPECT_EQ(run("chase " + args + " --out " + (dir_ / "o").string()).code, 2);
  EXPECT_EQ(run("chase --schema " + (kData / "running_schema.txt").string()).code, 2);
  EXPECT_EQ(run("nonsense").code, 2);
}

TEST_F(Cli, Check) {
  const Outcome r = run("check --seed 1 --instances 5 --discrepancies " + (dir_ / "d.txt").string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(incdb::oracle::kMuStarIsModel), std::string::npos);
}
