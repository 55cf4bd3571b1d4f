#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "experiment.hpp"
#include "json.hpp"
#include "wick/serialization.hpp"

using namespace wick;
using namespace wick::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  }
  return rows;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

}  // namespace

TEST_CASE("config parsing") {
  const auto j = nlohmann::json::parse(R"({
    "expansion": {"dim": 1, "coeffs": [{"alpha": [0], "c": 1}, {"alpha": [1], "c": 0.5}]},
    "n_list": [2, 4], "seed": 9, "samples": 2000, "out": "x.csv"})");
  const auto c = parse_config(j);
  REQUIRE(c.expansion.has_value());
  CHECK(c.expansion->coefficient(MultiIndex{1}) == 0.5);
  CHECK(*c.n_list == std::vector<unsigned>{2, 4});
  CHECK(c.seed == 9u);
  CHECK(c.cases == 1000);

  SUBCASE("canonical form is a fixed point") {
    const auto canon = config_to_json(c);
    CHECK(config_to_json(parse_config(canon)) == canon);
    CHECK(config_to_json(parse_config(config_to_json(ExperimentConfig{}))) == config_to_json(ExperimentConfig{}));
    CHECK(canon.dump() == config_to_json(parse_config(nlohmann::json::parse(canon.dump()))).dump());
  }

  SUBCASE("empty and absent n lists differ") {
    CHECK(!parse_config(nlohmann::json::object()).n_list.has_value());
    const auto e = parse_config(nlohmann::json::parse(R"({"n_list": []})"));
    REQUIRE(e.n_list.has_value());
    CHECK(e.n_list->empty());
  }

  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"n": 0})")), ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"n_list": [2, -1]})")), ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"samples": "many"})")), ConfigError);
  CHECK_THROWS(parse_config(nlohmann::json::parse(R"({"expansion": {"dim": 1, "coeffs": [{"alpha": [0, 1], "c": 1}]}})")));
}

TEST_CASE("verify") {
  const auto ok = run_cli({"verify"});
  CHECK(ok.code == kSuccess);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  CHECK(ok.out.find("PASS wick_associativity") != std::string::npos);
  CHECK(ok.out.find("all identities hold") != std::string::npos);

  const auto broken = run_cli({"verify", "--tolerance", "1e-30", "--cases", "50"});
  CHECK(broken.code == kVerificationFailure);
  CHECK(broken.err.find("failed identity: ") != std::string::npos);
  CHECK(broken.out.find("FAIL ") != std::string::npos);
  CHECK(run_cli({"verify", "--tolerance", "1e-30", "--cases", "50"}).err == broken.err);

  // Pass/fail pattern is the same at 10 and 1000 cases on the reference seed.
  auto pattern = [](const std::string& text) {
    std::string p;
    for (const auto& line : data_lines(text)) {
      if (line.rfind("PASS", 0) == 0) p += 'P';
      if (line.rfind("FAIL", 0) == 0) p += 'F';
    }
    return p;
  };
  const auto ten = run_cli({"verify", "--cases", "10"});
  CHECK(ten.code == ok.code);
  CHECK(pattern(ten.out) == pattern(ok.out));
  CHECK(pattern(ok.out).size() == 12);
}

TEST_CASE("converge") {
  TempDir dir("wick_cli_converge");
  const auto a = run_cli({"converge", "--n", "2,4,8,16,32,64,128,256", "--out", dir / "a.csv"});
  REQUIRE(a.code == kSuccess);
  CHECK(a.out.find("fitted_rate") != std::string::npos);
  const auto text = slurp(dir / "a.csv");
  CHECK(text.find("# tool: " + std::string(kToolVersion)) != std::string::npos);
  CHECK(text.find("# input_hash: " + expansion_hash(univariate({1, 1}))) != std::string::npos);
  const auto rows = data_lines(text);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == "n,error,bound,norm_gamma,rate_running");
  double prev = INFINITY;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream row(rows[i]);
    std::string n, e, b;
    std::getline(row, n, ',');
    std::getline(row, e, ',');
    std::getline(row, b, ',');
    CHECK(std::stod(e) < prev);
    CHECK(std::stod(e) <= std::stod(b));
    prev = std::stod(e);
  }
  CHECK(rows[1].rfind("2,0.5859025759109", 0) == 0);

  run_cli({"converge", "--n", "2,4,8,16,32,64,128,256", "--out", dir / "b.csv"});
  CHECK(slurp(dir / "b.csv") == text);

  SUBCASE("h1 = 0 decays to the constant limit") {
    const std::string x = R"({"dim": 1, "coeffs": [{"alpha": [0], "c": 1}, {"alpha": [2], "c": 1}]})";
    REQUIRE(run_cli({"converge", "--expansion", x, "--n", "2,64,512", "--out", dir / "c.csv"}).code == kSuccess);
    const auto r = data_lines(slurp(dir / "c.csv"));
    REQUIRE(r.size() == 4);
    CHECK(r[2].rfind("64,0.0221049328019", 0) == 0);
  }

  SUBCASE("zero mean is refused") {
    const std::string x = R"({"dim": 1, "coeffs": [{"alpha": [1], "c": 1}, {"alpha": [2], "c": 1}]})";
    const auto z = run_cli({"converge", "--expansion", x, "--out", dir / "z.csv"});
    CHECK(z.code == kInvalidInput);
    CHECK(z.err.find("--min-order") != std::string::npos);
    CHECK(!fs::exists(dir / "z.csv"));

    REQUIRE(run_cli({"converge", "--expansion", x, "--min-order", "--n", "1,3,5", "--out", dir / "m.csv"}).code == kSuccess);
    const auto r = data_lines(slurp(dir / "m.csv"));
    CHECK(r == std::vector<std::string>{"n,min_order", "1,1", "3,3", "5,5"});
  }

  SUBCASE("flags override the config file") {
    std::ofstream(dir / "cfg.json") << R"({"n_list": [2, 4], "out": ")" << dir / "from_file.csv" << R"("})";
    REQUIRE(run_cli({"converge", "--config", dir / "cfg.json"}).code == kSuccess);
    CHECK(data_lines(slurp(dir / "from_file.csv")).size() == 3);
    REQUIRE(run_cli({"converge", "--config", dir / "cfg.json", "--n", "8", "--out", dir / "flag.csv"}).code == kSuccess);
    const auto r = data_lines(slurp(dir / "flag.csv"));
    REQUIRE(r.size() == 2);
    CHECK(r[1].rfind("8,", 0) == 0);
  }
}

TEST_CASE("dist") {
  TempDir dir("wick_cli_dist");
  const auto a = run_cli({"dist", "--seed", "42", "--n", "64", "--samples", "100000", "--out", dir / "a.json"});
  REQUIRE(a.code == kSuccess);
  const auto j = nlohmann::json::parse(slurp(dir / "a.json"));
  for (const char* key : {"n", "N", "seed", "ks_lognormal", "ks_log_normal", "frac_nonpositive", "target_mu",
                          "target_sigma_sq", "tool_version", "input_hash"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["seed"] == 42);
  CHECK(j["ks_lognormal"].get<double>() < j["ks_threshold"].get<double>());
  CHECK(j["ks_lognormal_below_threshold"] == true);
  CHECK(fs::exists(dir / "a_samples.csv"));
  CHECK(fs::exists(dir / "a_samples.meta.json"));
  CHECK(data_lines(slurp(dir / "a_samples.csv")).size() == 100001);

  run_cli({"dist", "--seed", "42", "--n", "64", "--samples", "100000", "--out", dir / "b.json"});
  CHECK(slurp(dir / "b.json") == slurp(dir / "a.json"));
  CHECK(slurp(dir / "b_samples.csv") == slurp(dir / "a_samples.csv"));

  const auto small = run_cli({"dist", "--seed", "1", "--samples", "10", "--out", dir / "s.json"});
  CHECK(small.code == kSuccess);
  CHECK(small.err.find("warning: below minimum sample size") != std::string::npos);

  const auto noseed = run_cli({"dist", "--out", dir / "n.json"});
  CHECK(noseed.code == kInvalidInput);
  CHECK(noseed.err.find("seed") != std::string::npos);

  const auto degenerate = run_cli({"dist", "--seed", "3", "--samples", "2000", "--expansion",
                                   R"({"dim": 1, "coeffs": [{"alpha": [0], "c": 2}]})", "--out", dir / "d.json"});
  REQUIRE(degenerate.code == kSuccess);
  const auto d = nlohmann::json::parse(slurp(dir / "d.json"));
  CHECK(d["degenerate"] == true);
  CHECK(d["concentration"] == 1.0);
  CHECK(d["ks_lognormal"].is_null());
}

TEST_CASE("bench") {
  TempDir dir("wick_cli_bench");
  REQUIRE(run_cli({"bench", "--n", "", "--out", dir / "e.csv"}).code == kSuccess);
  CHECK(data_lines(slurp(dir / "e.csv")) == std::vector<std::string>{"n,degree,coeff_count,millis"});

  REQUIRE(run_cli({"bench", "--n", "16,512", "--out", dir / "b.csv"}).code == kSuccess);
  const auto r = data_lines(slurp(dir / "b.csv"));
  REQUIRE(r.size() == 3);
  CHECK(r[1].rfind("16,16,17,", 0) == 0);
  CHECK(r[2].rfind("512,512,513,", 0) == 0);
}

TEST_CASE("invalid input exits 2") {
  CHECK(run_cli({}).code == kInvalidInput);
  CHECK(run_cli({"frobnicate"}).code == kInvalidInput);
  CHECK(run_cli({"converge", "--config", "/nonexistent/cfg.json"}).code == kInvalidInput);
  CHECK(run_cli({"converge", "--n", "2,x"}).code == kInvalidInput);
  CHECK(run_cli({"converge", "--expansion", R"({"dim": 2, "coeffs": [{"alpha": [1], "c": 1}]})"}).code ==
        kInvalidInput);
  TempDir dir("wick_cli_invalid");
  std::ofstream(dir / "bad.json") << R"({"n_max": 8, "typo": true})";
  const auto bad = run_cli({"converge", "--config", dir / "bad.json"});
  CHECK(bad.code == kInvalidInput);
  CHECK(bad.err.find("typo") != std::string::npos);
}

TEST_CASE("installed binary") {
  TempDir dir("wick_cli_binary");
  const std::string bin = WICKCHAOS_BIN;
  const std::string out = dir / "c.csv";
  CHECK(std::system((bin + " converge --n 2,4 --out " + out + " > /dev/null").c_str()) == 0);
  CHECK(data_lines(slurp(out)).size() == 3);
  const int status = std::system((bin + " converge --n 2 --expansion '{\"dim\":1,\"coeffs\":[{\"alpha\":[1],\"c\":1}]}' --out " +
                                  out + " > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
