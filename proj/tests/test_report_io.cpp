#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "nnvar/distributions.hpp"
#include "nnvar/errors.hpp"
#include "nnvar/report_io.hpp"

using namespace nnvar;

namespace {

Sample read(const std::string& text) {
  std::istringstream in(text);
  return read_dataset_csv(in);
}

std::string parse_error(const std::string& text) {
  try {
    read(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("reading datasets") {
  const Sample s = read("0,1\n2.5, -3\n  1e-3 ,+4\n");
  CHECK(s.n() == 3);
  CHECK(s.dim() == 2);
  CHECK(s(1, 1) == -3.0);
  CHECK(s(2, 0) == 1e-3);
  CHECK(s(2, 1) == 4.0);
  CHECK(read("1\r\n2\r\n\n\n").n() == 2);
}

TEST_CASE("dataset errors name the row and column") {
  CHECK(parse_error("1,2\n3,x\n").find("row 2, column 2") != std::string::npos);
  CHECK(parse_error("1,2\n3,\n").find("row 2, column 2") != std::string::npos);
  CHECK(parse_error("nan,2\n3,4\n").find("row 1, column 1") != std::string::npos);
  CHECK(parse_error("1,2\n3,inf\n").find("row 2, column 2") != std::string::npos);
  CHECK(parse_error("1,2\n3,4,5\n").find("row 2") != std::string::npos);
  CHECK(parse_error("1,2\n\n3,4\n").find("row 2") != std::string::npos);
  CHECK(parse_error("1;2\n3;4\n").find("row 1, column 1") != std::string::npos);
  CHECK_THROWS_AS(read("1,2\n"), EmptySampleError);
  CHECK_THROWS_AS(read(""), EmptySampleError);
  CHECK_THROWS_AS(read_dataset_csv(std::filesystem::path("/nonexistent/data.csv")), ParseError);
}

TEST_CASE("dataset round trip is exact") {
  const Sample s = Distribution::normal_full({0.0, 1.0, 2.0}, {1.0, 0.2, 0.1, 0.2, 2.0, 0.3, 0.1, 0.3, 0.5})
                       .sample(500, 3);
  std::ostringstream out;
  write_dataset_csv(out, s);
  const Sample back = read(out.str());
  CHECK(back.n() == s.n());
  CHECK(back.dim() == s.dim());
  CHECK(std::ranges::equal(back.data(), s.data()));
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(3.0) == "3");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-1e-300) == "-1e-300");
  for (double v : {std::nextafter(1.0, 2.0), 1.0 / 3.0, 6.02214076e23, 5e-324}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("estimate report JSON") {
  EstimateReport r;
  r.zeta = {1.0, 2.0};
  r.entropy = 1.5;
  r.second_moment = 0.25;
  r.varentropy = -2.0;
  r.n = 2;
  r.dim = 1;
  r.unstable = true;
  const auto j = to_json(r, false);
  CHECK(j["entropy"] == 1.5);
  CHECK(j["varentropy"] == -2.0);
  CHECK(j["unstable"] == true);
  CHECK_FALSE(j.contains("zeta"));
  CHECK(to_json(r, true)["zeta"].size() == 2);
  r.varentropy = std::nan("");
  CHECK(to_json(r, false)["varentropy"].is_null());
}

TEST_CASE("functional and condition JSON") {
  FunctionalEstimate t;
  t.functional = "T";
  t.params = {{"eps2", 0.5}, {"R2", 1.0}};
  t.budgets = {10, 20};
  t.estimates = {1.0, std::numeric_limits<double>::infinity()};
  t.stderrs = {0.1, 0.2};
  t.verdict = Verdict::Inconclusive;
  t.floor_hits = 3;
  const auto j = to_json(t);
  CHECK(j["functional"] == "T");
  CHECK(j["params"]["eps2"] == 0.5);
  CHECK(j["estimates"][1].is_null());
  CHECK(j["verdict"] == "Inconclusive");
  CHECK(j["floor_hits"] == 3);

  FunctionalEstimate k = t;
  k.functional = "K";
  CHECK_FALSE(to_json(k).contains("floor_hits"));

  ConditionReport c;
  c.distribution = "normal(d=1)";
  c.k_alpha = {k, k};
  c.q = k;
  c.t = t;
  c.density_bound = 0.4;
  const auto cj = to_json(c);
  CHECK(cj["schema"] == kSchemaVersion);
  CHECK(cj["functionals"].size() == 4);
  CHECK(cj["params"]["alphas"].size() == 4);
  CHECK(cj["params"]["budget"] == 1 << 18);
  CHECK(cj["density_ratio"].contains("c_estimate"));
}

TEST_CASE("campaign JSON and CSV") {
  CampaignConfig cfg;
  cfg.name = "t";
  cfg.n_grid = {20, 40};
  cfg.replications = 5;
  cfg.estimand = Estimand::Both;
  const McReport r = run_campaign(cfg);
  const auto j = to_json(r, false);
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["varentropy"]["truth"] == 0.5);
  CHECK(j["rows"][0]["varentropy"]["stderr_mean"].is_null());
  CHECK_FALSE(j["rows"][0].contains("runtime_seconds"));
  CHECK(to_json(r, true)["rows"][0].contains("runtime_seconds"));
  CHECK(j["estimand"] == "both");

  std::ostringstream out;
  write_campaign_csv(out, r, Estimand::Varentropy);
  std::istringstream lines(out.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "n,mean,bias,variance,mse,stderr_mean,stderr_mse");
  CHECK(first.rfind("20,", 0) == 0);
  CHECK(first.ends_with(",,"));  // stderr cells empty below 30 replications
  std::ostringstream unused;
  CHECK_THROWS_AS(write_campaign_csv(unused, r, Estimand::Both), InvalidParamsError);
}

TEST_CASE("normality JSON") {
  NormalityTestResult r;
  r.varentropy = 0.6;
  r.statistic = 0.1;
  r.p_value = 0.2;
  r.n = 100;
  r.dim = 1;
  r.calibration_replications = 999;
  r.calibration_seed = 4;
  const auto j = to_json(r);
  CHECK(j["p_value"] == 0.2);
  CHECK(j["calibration"]["replications"] == 999);
  CHECK(j["reject"] == false);
}
