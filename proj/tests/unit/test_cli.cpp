#include "estimability/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace estimability;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;

  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path work_dir() {
  const auto dir = fs::current_path() / "cli_unit";
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string &name, const std::string &contents) {
  const auto path = work_dir() / name;
  std::ofstream(path) << contents;
  return path.string();
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string heaviside_csv(int n) {
  std::ostringstream s;
  s.precision(17);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      s << (j ? "," : "") << (j <= i ? 1.0 / n : 0.0);
    s << '\n';
  }
  return s.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze the non-identifiable example") {
  const auto p = write_file("p_sum.csv", "1,1\n");
  const auto q = write_file("q_first.csv", "1,0\n");
  const auto r = invoke({"analyze", p, "--param", q});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["identifiable"] == false);
  CHECK(j["parameter_identifiable"] == false);
  CHECK(j["classification"] == "NON_IDENTIFIABLE");
}

TEST_CASE("analyze classifications") {
  const auto eye = write_file("eye.csv", "1,0,0\n0,1,0\n0,0,1\n");
  auto j = invoke({"analyze", eye}).json();
  CHECK(j["classification"] == "WELL_POSED");
  CHECK(j["condition_number"].get<double>() == doctest::Approx(1.0));
  for (const auto *key : {"identifiable", "numerical_rank", "sigma_max", "sigma_min",
                          "condition_number", "stability_constant", "classification", "spectrum",
                          "decay_exponent"})
    CHECK(j.contains(key));

  const auto k = write_file("heaviside256.csv", heaviside_csv(256));
  j = invoke({"analyze", k, "--kappa-threshold", "100"}).json();
  CHECK(j["classification"] == "ILL_CONDITIONED");
  CHECK(j["condition_number"].get<double>() > 300.0);
  j = invoke({"analyze", k}).json();
  CHECK(j["classification"] == "WELL_POSED");
}

TEST_CASE("analyze writes to --out") {
  const auto eye = write_file("eye2.csv", "2,0\n0,1\n");
  const auto target = work_dir() / "report.json";
  fs::remove(target);
  const auto r = invoke({"analyze", eye, "--out", target.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(nlohmann::json::parse(read_file(target))["condition_number"].get<double>() ==
        doctest::Approx(2.0));
}

TEST_CASE("input errors exit with 2") {
  const auto bad = write_file("bad.csv", "1,2\n3,oops\n");
  auto r = invoke({"analyze", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);

  CHECK(invoke({"analyze", "/nonexistent/file.csv"}).code == 2);
  CHECK(invoke({"analyze", bad, "--bogus"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("solve") {
  const auto a = write_file("a.csv", "1,0\n0,1\n1,1\n");
  const auto d = write_file("d.csv", "1\n2\n3\n");
  auto j = invoke({"solve", a, d}).json();
  CHECK(j["method"] == "none");
  CHECK(j["solution"][0].get<double>() == doctest::Approx(1.0));
  CHECK(j["solution"][1].get<double>() == doctest::Approx(2.0));
  CHECK(j["residual"].get<double>() <= 1e-12);

  j = invoke({"solve", a, d, "--method", "tikhonov", "--lambda", "0.5"}).json();
  CHECK(j["parameter"].get<double>() == 0.5);
  CHECK(j["solution_norm"].get<double>() < std::sqrt(5.0));

  const auto csv = work_dir() / "solution.csv";
  const auto r = invoke({"solve", a, d, "--method", "tsvd", "--k", "1", "--csv", csv.string()});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["parameter"] == 1);
  const auto rows = read_file(csv);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 2);

  CHECK(invoke({"solve", a, d, "--method", "tikhonov"}).code == 2);
  CHECK(invoke({"solve", a, d, "--method", "tsvd"}).code == 2);
  CHECK(invoke({"solve", a, d, "--method", "ridge"}).code == 2);
  // Noise level above ‖d‖ leaves nothing to select.
  CHECK(invoke({"solve", a, d, "--method", "tikhonov", "--noise", "100"}).code == 2);
  const auto short_d = write_file("d_short.csv", "1\n2\n");
  CHECK(invoke({"solve", a, short_d}).code == 2);
}

TEST_CASE("fredholm-demo") {
  const auto csv = work_dir() / "fredholm.csv";
  auto r = invoke({"fredholm-demo", "--n", "1000", "--n-osc", "8", "--csv", csv.string()});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["amplification"].get<double>() == doctest::Approx(16.0 * std::numbers::pi).epsilon(0.1));
  CHECK(j["delta"].get<double>() == doctest::Approx(1.0 / (16.0 * std::numbers::pi)));
  const auto table = read_file(csv);
  CHECK(table.rfind("y,F_unperturbed,F_perturbed,f_recovered,f_analytic\n", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 1001);

  r = invoke({"fredholm-demo", "--n", "100", "--n-osc", "8"});
  CHECK(r.code == 2);
  CHECK(r.err.find("h <= delta/10") != std::string::npos);

  r = invoke({"fredholm-demo", "--n", "600", "--lambda", "1e-4", "--csv", csv.string()});
  REQUIRE(r.code == 0);
  CHECK(r.json().contains("regularized_sup_deviation"));
  CHECK(read_file(csv).find("f_regularized") != std::string::npos);

  CHECK(invoke({"fredholm-demo", "--lambda", "1", "--noise", "1"}).code == 2);
  CHECK(invoke({"fredholm-demo", "--n", "5000", "--lambda", "1"}).code == 2);
}

TEST_CASE("influence") {
  const auto dist = write_file("dist.csv", "1,1\n2,1\n3,1\n4,1\n5,1\n6,1\n7,1\n8,1\n9,1\n");
  auto j = invoke({"influence", dist}).json();
  CHECK(j["functional"] == "mean");
  CHECK(j["gross_error_sensitivity"] == "unbounded");
  CHECK(j["unbounded_flag"] == true);
  CHECK(j["asymptotic_variance"].get<double>() == doctest::Approx(60.0 / 9.0).epsilon(1e-8));

  const auto csv = work_dir() / "influence.csv";
  const auto r = invoke({"influence", dist, "--functional", "median", "--symmetric", "--csv",
                         csv.string()});
  REQUIRE(r.code == 0);
  j = r.json();
  CHECK(j["unbounded_flag"] == false);
  CHECK(j["gross_error_sensitivity"].is_number());
  const auto table = read_file(csv);
  CHECK(std::count(table.begin(), table.end(), '\n') == 23);

  CHECK(invoke({"influence", dist, "--functional", "mode"}).code == 2);
  CHECK(invoke({"influence", dist, "--probes", "0:10:5"}).code == 2);
  // The median of two tied halves has no settled influence at its atoms.
  const auto tied = write_file("tied.csv", "-1,1\n1,1\n");
  CHECK(invoke({"influence", tied, "--functional", "median"}).code == 3);
}

TEST_CASE("finite-check") {
  auto j = invoke({"finite-check", "--max-domain", "4", "--max-codomain", "4"}).json();
  CHECK(j["counterexamples"] == 0);
  CHECK(j["fisher_maps_checked"].get<int>() > 0);
  CHECK(invoke({"finite-check", "--max-domain", "1"}).json()["counterexamples"] == 0);
  CHECK(invoke({"finite-check", "--max-domain", "6"}).code == 2);
  CHECK(invoke({"finite-check", "--max-codomain", "0"}).code == 2);
}

TEST_CASE("identical invocations give identical bytes") {
  const auto dist = write_file("dist_det.csv", "0.5,2\n-3,1\n8,1\n");
  for (const auto &args : std::vector<std::vector<std::string>>{
           {"influence", dist, "--functional", "trimmed:0.1"},
           {"fredholm-demo", "--n", "300", "--n-osc", "4", "--lambda", "1e-5"},
           {"finite-check", "--max-domain", "3", "--max-codomain", "3"}}) {
    const auto first = invoke(args);
    const auto second = invoke(args);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
  }
}

} // TEST_SUITE
