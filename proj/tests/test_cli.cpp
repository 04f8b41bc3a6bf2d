#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#ifndef STRATINT_BIN
#error "STRATINT_BIN must name the stratint executable"
#endif

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" STRATINT_BIN "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(field);
        field.clear();
      } else {
        field += c;
      }
    }
    fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

double column_mean(const std::vector<std::vector<std::string>>& rows, std::size_t col) {
  double sum = 0.0;
  for (std::size_t r = 1; r < rows.size(); ++r) sum += std::stod(rows[r][col]);
  return sum / static_cast<double>(rows.size() - 1);
}

}  // namespace

TEST(Cli, CoeffsExamples) {
  const auto a = run("coeffs --basis legendre --exps 0 --interval 0 1 --orders 2");
  ASSERT_EQ(a.status, 0);
  const auto rows = csv_rows(a.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"j1", "value"}));
  EXPECT_NEAR(std::stod(rows[1][1]), 1.0, 1e-14);
  EXPECT_NEAR(std::stod(rows[2][1]), 0.0, 1e-14);
  EXPECT_NEAR(std::stod(rows[3][1]), 0.0, 1e-14);
  EXPECT_EQ(rows[3][0], "2");

  const auto b = run("coeffs --basis legendre --exps 0,0 --orders 0,0 --interval 0 1");
  ASSERT_EQ(b.status, 0);
  const auto brows = csv_rows(b.out);
  ASSERT_EQ(brows.size(), 2u);
  EXPECT_EQ(brows[1][0], "0");
  EXPECT_EQ(brows[1][1], "0");
  EXPECT_NEAR(std::stod(brows[1][2]), 0.5, 1e-15);
}

TEST(Cli, CsvUsesCrlfAndSeventeenDigits) {
  const auto a = run("coeffs --basis legendre --exps 1 --interval 0 1 --orders 1");
  ASSERT_EQ(a.status, 0);
  EXPECT_NE(a.out.find("\r\n"), std::string::npos);
  const auto rows = csv_rows(a.out);
  EXPECT_EQ(rows[2][1], "-0.28867513459481287");
  EXPECT_NEAR(std::stod(rows[2][1]), -1.0 / (2.0 * std::sqrt(3.0)), 1e-16);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("coeffs --basis chebyshev --exps 0 --orders 2").status, 2);
  EXPECT_EQ(run("coeffs --exps 0,0,0,0,0 --orders 1").status, 2);
  EXPECT_EQ(run("coeffs --exps -1 --orders 1").status, 2);
  EXPECT_EQ(run("verify nosuch").status, 2);
  EXPECT_EQ(run("sde --problem heston").status, 2);
  EXPECT_EQ(run("sde --ladder 4,8").status, 2);
  EXPECT_EQ(run("sample --spec 0@1 --format xml").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST(Cli, VerifySuites) {
  for (const char* suite : {"golden", "orthonormality", "trace", "partitions", "fastpath"}) {
    const auto r = run(std::string("verify ") + suite);
    EXPECT_EQ(r.status, 0) << suite << "\n" << r.out;
    EXPECT_EQ(r.out.find("false"), std::string::npos) << suite;
  }
}

TEST(Cli, SampleHeaderQuotingAndShape) {
  const auto r = run("sample --spec 0@1 --spec 0,0@1,2 --n 3 --seed 5");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find("\r\n")), "0@1,\"0,0@1,2\"");
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& row : rows) EXPECT_EQ(row.size(), 2u);
}

TEST(Cli, SampleMeans) {
  constexpr int n = 100000;
  const auto r = run("sample --spec 0@1 --spec 0,0@1,1 --order 4 --n 100000 --interval 2.5 3.75 --seed 11");
  ASSERT_EQ(r.status, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), static_cast<std::size_t>(n) + 1);
  const double len = 1.25;
  EXPECT_LT(std::abs(column_mean(rows, 0)), 4.0 / std::sqrt(n) * std::sqrt(len));
  // The equal-component double integral has mean L/2 and standard deviation L/sqrt 2.
  EXPECT_NEAR(column_mean(rows, 1), len / 2.0, 5.0 * len / std::sqrt(2.0 * n));
}

TEST(Cli, SeedFromEnvironment) {
  const auto flag = run("sample --spec 0@1 --n 4 --seed 99");
  const auto env = run("sample --spec 0@1 --n 4", "STRAT_SEED=99");
  const auto other = run("sample --spec 0@1 --n 4", "STRAT_SEED=98");
  EXPECT_EQ(flag.out, env.out);
  EXPECT_NE(flag.out, other.out);
}

TEST(Cli, JsonMirrorsCsv) {
  const auto csv = run("coeffs --basis trig --exps 0,0 --orders 2 --seed 3");
  const auto js = run("coeffs --basis trig --exps 0,0 --orders 2 --seed 3 --format json");
  ASSERT_EQ(js.status, 0);
  const auto doc = nlohmann::json::parse(js.out);
  EXPECT_EQ(doc["metadata"]["seed"], 3);
  EXPECT_EQ(doc["metadata"]["command"], "coeffs");
  EXPECT_TRUE(doc["metadata"].contains("version"));
  EXPECT_EQ(doc["metadata"]["flags"]["basis"], "trig");
  const auto rows = csv_rows(csv.out);
  ASSERT_EQ(doc["rows"].size() + 1, rows.size());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& obj = doc["rows"][r - 1];
    EXPECT_EQ(obj["j1"].get<std::int64_t>(), std::stoll(rows[r][0]));
    EXPECT_EQ(obj["value"].get<double>(), std::stod(rows[r][2]));
  }
}

TEST(Cli, ConvergeMatchesTailLaw) {
  const auto r = run("converge --integral I00 --indices 1,2 --ladder 1,2,4,8,16 --n 20000 --seed 4");
  ASSERT_EQ(r.status, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int p = std::stoi(rows[i][0]);
    const double expected = 1.0 / (4.0 * (2 * p + 1)) - 1.0 / (4.0 * 257.0);
    EXPECT_NEAR(std::stod(rows[i][2]), expected, 5.0 * std::stod(rows[i][3])) << p;
    EXPECT_NEAR(std::stod(rows[i][4]), expected, 1e-12) << p;
  }
  const auto single = run("converge --integral I00 --ladder 3 --n 100");
  EXPECT_EQ(csv_rows(single.out).size(), 2u);
}

TEST(Cli, ConvergeTrigonometricTailDecreases) {
  const auto r = run("converge --integral I00t --indices 1,2 --ladder 1,2,4,8 --pref 64 --n 20000 --seed 4");
  ASSERT_EQ(r.status, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i][2]), std::stod(rows[i - 1][2]));
}

TEST(Cli, CacheRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "stratint_cli_cache_test.bin";
  std::filesystem::remove(path);
  const std::string args = "coeffs --exps 0,1 --orders 5 --cache '" + path.string() + "'";
  const auto first = run(args);
  ASSERT_EQ(first.status, 0);
  EXPECT_TRUE(std::filesystem::exists(path));
  const auto second = run(args);
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(first.out, run("coeffs --exps 0,1 --orders 5").out);
  // A stale file is recomputed and replaced.
  const auto stale = run("coeffs --exps 0,2 --orders 5 --cache '" + path.string() + "'");
  EXPECT_EQ(stale.status, 0);
  EXPECT_EQ(stale.out, run("coeffs --exps 0,2 --orders 5").out);
  std::filesystem::remove(path);
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "stratint_cli_output_test.csv";
  const auto direct = run("coeffs --exps 2 --orders 3");
  ASSERT_EQ(run("coeffs --exps 2 --orders 3 -o '" + path.string() + "'").status, 0);
  std::ifstream in(path, std::ios::binary);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(written, direct.out);
  std::filesystem::remove(path);
}

TEST(Cli, ByteIdenticalAcrossRunsAndThreads) {
  const std::vector<std::string> commands = {
      "coeffs --basis legendre --exps 0,1,2 --orders 4",
      "sample --spec 0@1 --spec 1,0@2,1 --n 50",
      "verify fastpath",
      "converge --integral I01 --ladder 1,2,4 --pref 16 --n 300",
      "sde --problem linear2d --ladder 4,8,16,32 --n 20",
  };
  for (const auto& cmd : commands) {
    for (const char* format : {"csv", "json"}) {
      const std::string base = cmd + " --seed 17 --format " + format;
      const auto a = run(base + " --threads 1");
      const auto b = run(base + " --threads 1");
      const auto c = run(base + " --threads 4");
      EXPECT_EQ(a.status, 0) << base;
      EXPECT_FALSE(a.out.empty()) << base;
      EXPECT_EQ(a.out, b.out) << base;
      EXPECT_EQ(a.out, c.out) << base;
    }
  }
}
