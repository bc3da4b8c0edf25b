#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "skewform/cli.hpp"
#include "skewform/errors.hpp"
#include "skewform/form_parser.hpp"

using nlohmann::json;
using skewform::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

json invoke_json(std::vector<std::string> args) {
  args.insert(args.begin() + 1, "--json");
  const auto r = invoke(args);
  REQUIRE(r.code == 0);
  return json::parse(r.out);
}

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("skewform_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST_CASE("rank of z1^2 + 6 z1 z2 + 4 z2^2 at mu_12 = 2") {
  const auto mu = write_temp("mu12_2.json", R"({"n": 2, "mu": [[1, 2], [0.5, 1]]})");
  const auto r = invoke_json({"rank", "--mu", mu, "z1^2 + 6 z1 z2 + 4 z2^2"});
  CHECK(r["command"] == "rank");
  CHECK(r["rank"] == 1);
  REQUIRE(r["witnesses"].size() == 1);
  CHECK(r["witnesses"][0]["text"] == "(z1 + 2 z2)^2");
  CHECK(r["witnesses"][0]["kind"] == "square");
  for (const char* key : {"command", "mu", "form", "diagnostics", "witnesses", "residuals"}) CHECK(r.contains(key));
}

TEST_CASE("factor lists both classes at mu_12 = 2") {
  const auto mu = write_temp("mu12_2b.json", R"({"mu": {"12": 2}})");
  const auto r = invoke_json({"factor", "--mu", mu, "z1^2 + 6 z1 z2 + 4 z2^2"});
  std::vector<std::string> texts;
  for (const auto& w : r["witnesses"]) texts.push_back(w["text"]);
  CHECK(texts.size() == 2);
  CHECK(std::find(texts.begin(), texts.end(), "(z1 + 2 z2)^2") != texts.end());
  CHECK(std::find(texts.begin(), texts.end(), "(z1 + z2)(z1 + 4 z2)") != texts.end());
  CHECK(r["residuals"].size() == 2);
}

TEST_CASE("zero form has rank 0") { CHECK(invoke_json({"rank", "0"})["rank"] == 0); }

TEST_CASE("sum of three squares at mu = 1") {
  const auto r = invoke_json({"rank", "z1^2 + z2^2 + z3^2"});
  CHECK(r["rank"] == 3);
  CHECK(r["diagnostics"]["min_abs_D8"].get<double>() == doctest::Approx(2.0));
  CHECK(r["diagnostics"]["D8"].size() == 4);
  CHECK(r["witnesses"].empty());
}

TEST_CASE("sum-of-products switch") {
  const auto mu = write_temp("mu3_one.json", R"({"n": 3, "mu": {}})");
  const auto r = invoke_json({"factor", "--sum-of-products", "--mu", mu, "z1^2 + 2 z1 z2"});
  REQUIRE(r["witnesses"].size() == 1);
  CHECK(r["witnesses"][0]["text"] == "(-z2)(z2) + (z1 + z2)^2");
}

TEST_CASE("expand") {
  const auto mu = write_temp("mu12_2c.json", R"({"mu": {"12": 2}})");
  const auto r = invoke_json({"expand", "--mu", mu, "(z1 + 2 z2)*(z1 + 2 z2)"});
  CHECK(r["form"] == "z1^2 + 6 z1 z2 + 4 z2^2");
  CHECK(r["terms"].size() == 3);
  CHECK(invoke_json({"expand", "z1"})["form"] == "z1");
  const auto generic = write_temp("mu3_generic.json", R"({"mu": {"12": 2, "13": 3, "23": [0, 1]}})");
  const auto g = invoke_json({"expand", "--mu", generic, "z3 z2 z1"});
  REQUIRE(g["terms"].size() == 1);
  // mu_13 mu_23 mu_12 = 3 * i * 2.
  CHECK(g["terms"][0]["coeff"][0].get<double>() == doctest::Approx(0.0));
  CHECK(g["terms"][0]["coeff"][1].get<double>() == doctest::Approx(6.0));
}

TEST_CASE("minors for n = 2 and n = 3") {
  const auto two = invoke_json({"minors", "z1^2 + z2^2"});
  CHECK(two["diagnostics"].contains("D"));
  const auto three = invoke_json({"minors", "z1^2 + z2^2 + z3^2"});
  for (const char* key : {"D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8", "sextic"})
    CHECK(three["diagnostics"].contains(key));
}

TEST_CASE("human and JSON reports carry the same numbers") {
  const auto mu = write_temp("mu_c.json", R"({"mu": {"12": [0.3, 1.1], "13": -1, "23": 2}})");
  const std::string form = "z1^2 + 0.1 z1 z2 - 3 z2 z3 + 7 z3^2";
  const auto j = invoke_json({"rank", "--mu", mu, form});
  const auto text = invoke({"rank", "--mu", mu, form}).out;
  auto shown = [](const json& v) {
    if (v.is_number()) return skewform::format_number(v.get<double>());
    return skewform::format_scalar({v[0].get<double>(), v[1].get<double>()});
  };
  CHECK(text.find("rank: " + std::to_string(j["rank"].get<int>())) != std::string::npos);
  CHECK(text.find("form: " + j["form"].get<std::string>()) != std::string::npos);
  const auto& d = j["diagnostics"];
  for (const char* key : {"D1", "D4", "D7", "sextic"})
    CHECK(text.find(std::string(key) + ": " + shown(d[key]) + "\n") != std::string::npos);
  for (const auto& v : d["D8"])
    CHECK(text.find("D8" + v["signs"].get<std::string>() + ": " + shown(v["value"])) != std::string::npos);
  CHECK(text.find("min |D8|: " + shown(d["min_abs_D8"])) != std::string::npos);
}

TEST_CASE("input errors exit 1") {
  CHECK(invoke({"rank", "z1^3"}).code == 1);
  CHECK(invoke({"rank", "z1 +"}).code == 1);
  CHECK(invoke({"rank"}).code == 1);
  CHECK(invoke({"bogus"}).code == 1);
  CHECK(invoke({"rank", "--mu", "/nonexistent/mu.json", "z1^2"}).code == 1);
  const auto bad = write_temp("mu_bad.json", R"({"mu": [[1, 2], [2, 1]]})");
  CHECK(invoke({"rank", "--mu", bad, "z1^2"}).code == 1);
  const auto garbage = write_temp("mu_garbage.json", "{not json");
  CHECK(invoke({"rank", "--mu", garbage, "z1^2"}).code == 1);
  const auto small = write_temp("mu_small.json", R"({"mu": {"12": 2}})");
  const auto r = invoke({"rank", "--mu", small, "z3^2"});
  CHECK(r.code == 1);
  CHECK(r.err.find("position 0") != std::string::npos);
}

TEST_CASE("tolerance precedence is flag, then file, then default") {
  const auto mu = write_temp("mu_tol.json", R"({"mu": {"12": 2}, "tolerance": 1e-6})");
  CHECK(invoke_json({"rank", "--mu", mu, "z1^2"})["mu"]["tolerance"] == 1e-6);
  CHECK(invoke_json({"rank", "--mu", mu, "--tol", "1e-4", "z1^2"})["mu"]["tolerance"] == 1e-4);
  CHECK(invoke_json({"rank", "z1^2"})["mu"]["tolerance"] == 1e-9);
  // A perturbation below the file tolerance is treated as zero.
  CHECK(invoke_json({"rank", "--mu", mu, "z1^2 + 1e-8 z1 z2"})["rank"] == 1);
}

TEST_CASE("form file") {
  const auto form = write_temp("form.txt", "z1^2 + 2 z1 z2 + z2^2\n");
  CHECK(invoke_json({"rank", "--form-file", form})["rank"] == 1);
}

TEST_CASE("permutation diagnostic") {
  const auto r = invoke_json({"rank", "--permutations", "z1 z2 + z3^2"});
  CHECK(r["permutations"].size() == 6);
}

TEST_CASE("selftest") {
  const auto a = invoke({"selftest", "--seed", "7", "--cases", "20", "--json"});
  const auto b = invoke({"selftest", "--seed", "7", "--cases", "20", "--json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto empty = invoke_json({"selftest", "--cases", "0"});
  CHECK(empty["failure_count"] == 0);
  CHECK(empty["failures"].empty());
}

TEST_CASE("the installed binary honours exit codes") {
  const std::string bin = SKEWFORM_BIN;
  CHECK(std::system((bin + " rank 'z1^2' > /dev/null").c_str()) == 0);
  const int code = std::system((bin + " rank 'z1^3' > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(code) == 1);
}
