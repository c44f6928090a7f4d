#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cfdim::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("expand") {
  const auto r = run({"expand", "--rational", "2/5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("# schema: 1") == 0);
  CHECK(r.out.find("[2, 2]") != std::string::npos);
  CHECK(r.out.find("2,2,2,5") != std::string::npos);
}

TEST_CASE("json envelope") {
  const auto r = run({"--format", "json", "series", "--r", "2", "--psi", "poly_log(1,0.6)"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["schema"] == 1);
  CHECK(doc["config"]["psi"] == "poly_log(1,0.6)");
  CHECK(doc["result"]["verdict"] == "convergent");
}

TEST_CASE("dimension with trace") {
  const auto r = run({"--format", "json", "dim", "--r", "1", "--psi", "geometric(2)"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  const double s = doc["result"]["value"];
  CHECK(s > 0.5);
  CHECK(s < 1.0);
  CHECK(doc["result"]["regime"] == "finite-B");
  CHECK(!doc["result"]["trace"].empty());
}

TEST_CASE("fractal csv") {
  const auto r = run({"fractal", "--r", "1", "--B", "10", "--M", "50", "--gens", "3:6"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("n,count,total_length,t_n\n3,") != std::string::npos);
}

TEST_CASE("dichotomy csv is independent of the worker count") {
  const std::vector<std::string> base{"measure", "dichotomy", "--r", "1", "--psi", "poly_log(1,0)",
                                      "--samples", "100", "--m", "4:7"};
  auto one = base, four = base;
  one.insert(one.begin(), {"--workers", "1"});
  four.insert(four.begin(), {"--workers", "4"});
  const auto a = run(one), b = run(four);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("m,block_freq,cum_freq,stderr") != std::string::npos);
}

TEST_CASE("cylinder pressure uses every digit by default") {
  const auto r = run({"--format", "json", "pressure", "--method", "cylinder", "--s", "0.6", "--depth", "12"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  const auto e = nlohmann::json::parse(run({"--format", "json", "pressure", "--s", "0.6", "--grid", "48", "--cap", "4000"}).out);
  const double p = e["result"]["value"];
  CHECK(doc["config"]["cap"] == 0);
  CHECK(double(doc["result"]["lower"]) <= p);
  CHECK(double(doc["result"]["upper"]) >= p);
}

TEST_CASE("errors") {
  CHECK(run({}).code != 0);
  CHECK(run({"bogus"}).code != 0);
  CHECK(run({"expand", "--rational", "7/5"}).code != 0);
  const auto bad = run({"dim", "--psi", "nonsense(1)"});
  CHECK(bad.code != 0);
  CHECK(bad.err.find("error") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}
