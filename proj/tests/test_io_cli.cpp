// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "kob/error.hpp"
#include "kob/io.hpp"
#include "test_support.hpp"

using namespace kob;
using io::json;

namespace {

const std::string fixtures = KOB_FIXTURES;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "kob");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string &name) { return fixtures + "/" + name; }

std::string u1_path(int from, int to) {
  std::string s;
  for (int i = from; i <= to; ++i)
    s += (s.empty() ? "t" : ",t") + std::to_string(i);
  return s;
}

std::filesystem::path temp_file(const std::string &name) {
  return std::filesystem::temp_directory_path() / ("kob_test_" + name);
}

} // namespace

TEST_CASE("parse_real and format_double") {
  CHECK(io::parse_real("1/2") == 0.5);
  CHECK(io::parse_real("-3/4") == -0.75);
  CHECK(io::parse_real("0.125") == 0.125);
  CHECK_THROWS_AS(io::parse_real("1/0"), InputError);
  CHECK_THROWS_AS(io::parse_real("abc"), InputError);
  CHECK_THROWS_AS(io::parse_real("1.5x"), InputError);
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("holonomy JSON round-trip and validation") {
  const auto h = circle::HolonomySpec::from_angles({0.25, 0.5});
  const json j = io::holonomy_to_json(h, circle::SpinStructure::periodic);
  const auto back = io::parse_holonomy(j);
  CHECK(*back.holonomy.angles() == *h.angles());
  CHECK(back.spin == circle::SpinStructure::periodic);

  testing::Rng rng(71);
  const auto hm = circle::HolonomySpec::from_matrix(testing::random_unitary(3, rng));
  const auto backm = io::parse_holonomy(io::holonomy_to_json(hm));
  CHECK(frobenius_distance(*backm.holonomy.matrix(), *hm.matrix()) == 0.0);
  CHECK(!backm.spin.has_value());

  CHECK_THROWS_AS(io::parse_holonomy(json::parse(R"({"k":1,"angles":[0],"extra":1})")), InputError);
  CHECK_THROWS_AS(io::parse_holonomy(json::parse(R"({"k":2,"angles":[0]})")), InputError);
  CHECK_THROWS_AS(io::parse_holonomy(json::parse(R"({"k":1})")), InputError);
  CHECK_THROWS_AS(io::parse_holonomy(json::parse(R"({"k":1,"angles":[0],"delta":0.5})")), InputError);
  CHECK_THROWS_AS(io::parse_holonomy(json::parse(R"({"k":1,"matrix":[[[2,0]]]})")), ValidationError);
  CHECK(io::parse_holonomy(json::parse(R"({"k":1,"angles":["1/2"],"delta":"0"})")).spin ==
        circle::SpinStructure::periodic);
}

TEST_CASE("family JSON round-trip and validation") {
  const auto fam = io::parse_family(io::read_json_file(fixture("constant_family.json")));
  CHECK(fam.size() == 3);
  CHECK(fam.edges().size() == 2);
  const auto again = io::parse_family(io::family_to_json(fam));
  CHECK(again.size() == 3);
  CHECK(again.points()[2].op == fam.points()[2].op);
  CHECK(io::family_to_json(again) == io::family_to_json(fam));

  CHECK_THROWS_AS(io::parse_family(json::parse(R"({"dim":1,"points":[{"id":"a","matrix":[[[0,0]]],"x":1}]})")),
                  InputError);
  CHECK_THROWS_AS(io::parse_family(json::parse(R"({"dim":2,"points":[{"id":"a","matrix":[[[0,0]]]}]})")),
                  InputError);
  CHECK_THROWS_AS(io::read_json_file(fixture("malformed.json")), InputError);
  CHECK_THROWS_AS(io::read_json_file(fixture("does_not_exist.json")), InputError);
}

TEST_CASE("cli spectrum") {
  auto r = run({"spectrum", "--angles", "0.5", "--delta", "1/2", "--epsilon", "1"});
  CHECK(r.code == cli::ok);
  CHECK(r.out == "value,multiplicity\n0,1\n");

  r = run({"spectrum", "--angles", "0", "--delta", "1/2", "--epsilon", "1"});
  CHECK(r.code == cli::ok);
  CHECK(r.out == "value,multiplicity\n");

  r = run({"spectrum", fixture("minus_identity_k3.json"), "--epsilon", "1", "--truncation", "4"});
  CHECK(r.code == cli::ok);
  CHECK(r.out.substr(0, 19) == "value,multiplicity\n");
  CHECK(r.out.find(",3\n") != std::string::npos);

  r = run({"spectrum", fixture("half_angle_k1.json"), "--epsilon", "7"});
  CHECK(r.code == cli::ok);
  CHECK(r.out == "value,multiplicity\n-6.2831853071795862,1\n0,1\n6.2831853071795862,1\n");

  CHECK(run({"spectrum", fixture("malformed.json"), "--epsilon", "1"}).code == cli::input_error);
  CHECK(run({"spectrum", "--angles", "0", "--epsilon", "-1"}).code == cli::input_error);
  CHECK(run({"spectrum", "--epsilon", "1"}).code == cli::input_error);
  CHECK(run({"spectrum", "--angles", "0", "--delta", "1/3", "--epsilon", "1"}).code == cli::input_error);
}

TEST_CASE("cli output is deterministic and can go to a file") {
  const auto a = run({"spectrum", "--angles", "0.1,0.7,0.7", "--epsilon", "20"});
  const auto b = run({"--jobs", "3", "spectrum", "--angles", "0.1,0.7,0.7", "--epsilon", "20"});
  CHECK(a.out == b.out);
  const auto path = temp_file("spectrum.csv");
  const auto c = run({"-o", path.string(), "spectrum", "--angles", "0.1,0.7,0.7", "--epsilon", "20"});
  CHECK(c.code == cli::ok);
  CHECK(c.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == a.out);
  std::filesystem::remove(path);
}

TEST_CASE("cli kernel-dim") {
  auto r = run({"kernel-dim", fixture("minus_identity_k3.json")});
  CHECK(r.code == cli::ok);
  CHECK(r.out == "3\n");
  r = run({"kernel-dim", fixture("minus_identity_k3.json"), "--delta", "0"});
  CHECK(r.out == "0\n");
  r = run({"kernel-dim", "--angles", "0,0", "--delta", "0"});
  CHECK(r.out == "2\n");
}

TEST_CASE("cli cohomology") {
  auto r = run({"cohomology", "--k", "3", "--indices", "1,2,3"});
  CHECK(r.code == cli::ok);
  CHECK(r.out == "1/1 * c1^c2^c3\nnonzero\n");
  r = run({"cohomology", "--k", "3", "--indices", "1,1"});
  CHECK(r.code == cli::input_error);
  CHECK(r.err.find("ascending") != std::string::npos);
  r = run({"cohomology", "--k", "2", "--indices", "1,2,3"});
  CHECK(r.code == cli::ok);
  CHECK(r.out == "0\nzero\n");
  CHECK(run({"cohomology", "--k", "0", "--indices", "1"}).code == cli::input_error);
  CHECK(run({"cohomology", "--k", "2", "--indices", "1,x"}).code == cli::input_error);
}

TEST_CASE("cli cover") {
  auto r = run({"cover", fixture("constant_family.json"), "--k", "1", "--epsilon", "0.4"});
  CHECK(r.code == cli::ok);
  auto j = json::parse(r.out);
  CHECK(j["covered"] == true);
  CHECK(j["max_spectral_count"] == 0);
  CHECK(j["sets"][0]["ids"].size() == 3);
  CHECK(j["tolerances"]["inv_tol"] == 1e-8);

  r = run({"cover", fixture("all_shifts_family.json"), "--k", "2", "--epsilon", "0.6"});
  CHECK(r.code == cli::verified_negative);
  j = json::parse(r.out);
  CHECK(j["covered"] == false);
  CHECK(j["uncovered_ids"] == json::array({"bad"}));
  CHECK(j["max_spectral_count"] == 3);

  r = run({"cover", fixture("constant_family.json"), "--k", "1", "--epsilon", "0.5"});
  CHECK(r.code == cli::input_error);
  CHECK(r.err.find("p0") != std::string::npos);

  r = run({"--inv-tol", "1e-3", "cover", fixture("constant_family.json"), "--k", "1", "--epsilon", "0.4"});
  CHECK(json::parse(r.out)["tolerances"]["inv_tol"] == 1e-3);
  CHECK(run({"--inv-tol", "-1", "cover", fixture("constant_family.json"), "--k", "1", "--epsilon", "0.4"}).code ==
        cli::input_error);
}

TEST_CASE("cli verify") {
  auto r = run({"verify", "--k", "3", "--resolution", "8", "--delta", "1/2", "--truncation", "4",
                "--epsilons", "1,0.1"});
  CHECK(r.code == cli::ok);
  auto j = json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["witness"]["id"] == "4_4_4");
  CHECK(j["witness"]["kernel_dim"] == 3);
  CHECK(j["witness"]["epsilon"] == 0.1);
  CHECK(r.err.find("verdict: PASS") != std::string::npos);

  r = run({"verify", "--k", "1", "--resolution", "8", "--delta", "1/2", "--truncation", "4", "--epsilons", "1"});
  CHECK(r.code == cli::ok);
  CHECK(json::parse(r.out)["per_epsilon"][0]["witness_coords"] == json::array({0.5}));

  r = run({"verify", "--k", "1", "--resolution", "1", "--delta", "1/2", "--truncation", "4", "--epsilons", "1"});
  CHECK(r.code == cli::input_error);

  r = run({"verify", "--k", "2", "--resolution", "4", "--truncation", "4", "--epsilons", "0.1", "--exclude", "2_2"});
  CHECK(r.code == cli::verified_negative);
  CHECK(json::parse(r.out)["note"].get<std::string>().find("sampling gap") != std::string::npos);

  const auto path = temp_file("verdict.json");
  r = run({"-o", path.string(), "verify", "--k", "2", "--resolution", "4", "--truncation", "2", "--epsilons", "1",
           "--bounded"});
  CHECK(r.code == cli::ok);
  CHECK(r.out.find("verdict: PASS") != std::string::npos);
  CHECK(io::read_json_file(path.string())["bounded_transform"] == true);
  std::filesystem::remove(path);
}

TEST_CASE("cli flow") {
  auto r = run({"flow", fixture("constant_family.json"), "--path", "p0,p1,p2", "--eta", "0.1"});
  CHECK(r.code == cli::ok);
  CHECK(r.out == "0\n");
  r = run({"flow", fixture("u1_loop_family.json"), "--path", u1_path(0, 64), "--eta", "1.5"});
  CHECK(r.code == cli::ok);
  CHECK(r.out == "1\n");
  r = run({"flow", fixture("u1_loop_family.json"), "--path", "t0,t32,t64", "--eta", "1.5"});
  CHECK(r.code == cli::input_error);
  CHECK(r.err.find("t0 -> t32") != std::string::npos);
  r = run({"flow", fixture("u1_loop_family.json"), "--path", u1_path(0, 32), "--eta", "0.5"});
  CHECK(r.code == cli::input_error);
}

TEST_CASE("cli usage errors") {
  CHECK(run({}).code == cli::input_error);
  CHECK(run({"bogus"}).code == cli::input_error);
  CHECK(run({"--help"}).code == cli::ok);
}
