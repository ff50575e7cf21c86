#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "field_spec.hpp"
#include "output.hpp"
#include "spherevol/errors.hpp"

using namespace spherevol;
using namespace spherevol::cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("field specs") {
  CHECK(parse_field_spec("canonical:3").k == 3);
  CHECK(parse_field_spec("perturbed:2:0.1:9").field.winding() == 1);
  CHECK_THROWS_AS(parse_field_spec("canonical"), InvalidArgument);
  CHECK_THROWS_AS(parse_field_spec("canonical:0"), InvalidArgument);
  CHECK_THROWS_AS(parse_field_spec("canonical:2x"), InvalidArgument);
  CHECK_THROWS_AS(parse_field_spec("perturbed:2:0.1"), InvalidArgument);
  CHECK_THROWS_AS(parse_field_spec("perturbed:2:-1:3"), InvalidArgument);
  CHECK_THROWS_AS(parse_field_spec("expr:sin(a)"), InvalidArgument);
  CHECK_THROWS_AS(parse_field_spec("grid:"), InvalidArgument);
}

TEST_CASE("CSV quoting") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
  const auto flat = flatten(json{{"a", {{"b", {1, 2}}}}, {"c", "x"}});
  REQUIRE(flat.size() == 3);
  CHECK(flat[0].first == "a.b.0");
  CHECK(flat[2].first == "c");
}

TEST_CASE("volume command") {
  const Run r = run({"volume", "--field", "canonical:1"});
  REQUIRE(r.code == kOk);
  const json j = json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["value"].get<double>() == doctest::Approx(19.7392088).epsilon(1e-8));
  CHECK(j["converged"] == true);
  CHECK(r.err.empty());

  const Run two = run({"volume", "--field", "canonical:2", "--csv"});
  CHECK(two.code == kOk);
  CHECK(two.out.find("25.13274") != std::string::npos);
  CHECK(two.out.find("\r\n") != std::string::npos);
}

TEST_CASE("exit codes") {
  const Run missing = run({"volume", "--field", "grid:missing.json"});
  CHECK(missing.code == kBadInput);
  CHECK(missing.out.empty());
  CHECK_FALSE(missing.err.empty());

  CHECK(run({"volume"}).code == kBadInput);
  CHECK(run({"frobnicate"}).code == kBadInput);
  CHECK(run({"volume", "--field", "canonical:3", "--rel-tol", "1e-18"}).code == kNotConverged);
  CHECK(run({"surface", "--k", "3"}).code == kBadInput);
  CHECK(run({"audit", "--field", "canonical:1", "--strict"}).code == kModuleError);
  CHECK(run({"--help"}).code == kOk);
}

TEST_CASE("bound, index, audit and verify") {
  const json b = json::parse(run({"bound", "--k", "3"}).out);
  CHECK(b["bound"].get<double>() == doctest::Approx(41.98705035770).epsilon(1e-10));
  CHECK(b["agm_difference"].get<double>() < 1e-10);

  const json i = json::parse(run({"index", "--field", "canonical:4"}).out);
  CHECK(i["north"] == 4);
  CHECK(i["south"] == -2);

  const json a = json::parse(run({"audit", "--field", "canonical:3"}).out);
  CHECK(a["chain"].size() == 5);
  CHECK(a["all_equal"] == true);
  const json a1 = json::parse(run({"audit", "--field", "canonical:1"}).out);
  CHECK(a1["first_violation"] == 3);

  const json v = json::parse(run({"verify", "--field", "perturbed:3:0.2:4"}).out);
  CHECK(v["violation"] == false);
  CHECK(v["margin"].get<double>() > 0.0);
}

TEST_CASE("surface command with export") {
  const Run r = run({"surface", "--k", "4", "--resolution", "8x16", "--export", "cli_test_mesh.off",
                     "--mean-curvature"});
  REQUIRE(r.code == kOk);
  const json j = json::parse(r.out);
  CHECK(j["topology"]["euler"] == 0);
  CHECK(j["topology"]["surface"] == "klein_bottle");
  CHECK(j["sup_abs_H"].get<double>() < 1e-8);
  std::ifstream off("cli_test_mesh.off"), side("cli_test_mesh.json");
  CHECK(off.good());
  CHECK(side.good());
  std::remove("cli_test_mesh.off");
  std::remove("cli_test_mesh.json");
  CHECK(run({"surface", "--k", "4", "--resolution", "8by16"}).code == kBadInput);
}

TEST_CASE("determinism and manifest replay") {
  const std::vector<std::string> args{"optimize", "--k", "3", "--grid-alpha", "8",
                                      "--grid-beta", "16", "--seed", "11"};
  const Run first = run(args);
  const Run second = run(args);
  REQUIRE(first.code == kOk);
  CHECK(first.out == second.out);

  std::vector<std::string> with_manifest = args;
  with_manifest.insert(with_manifest.end(), {"--manifest", "cli_test_manifest.json", "--csv"});
  REQUIRE(run(with_manifest).code == kOk);
  std::ifstream in("cli_test_manifest.json");
  const json m = json::parse(in);
  CHECK(m["command"] == "optimize");
  CHECK(m["seed"] == 11);
  CHECK(m["tool_version"] == tool_version());
  CHECK(m["results"] == json::parse(first.out));
  CHECK(m["argv"].size() == args.size());

  const Run replay = run({"replay", "cli_test_manifest.json"});
  CHECK(replay.code == kOk);
  CHECK(json::parse(replay.out)["reproduced"] == true);

  json tampered = m;
  tampered["results"]["final"] = 0.0;
  {
    std::ofstream out("cli_test_manifest.json");
    out << tampered.dump();
  }
  CHECK(run({"replay", "cli_test_manifest.json"}).code == kReplayMismatch);
  std::remove("cli_test_manifest.json");
  CHECK(run({"replay", "cli_test_manifest.json"}).code == kBadInput);
}

TEST_CASE("optimize CSV is the trace table") {
  const Run r = run({"optimize", "--k", "1", "--grid-alpha", "6", "--grid-beta", "12", "--csv"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.rfind("iteration,volume\r\n", 0) == 0);
}
