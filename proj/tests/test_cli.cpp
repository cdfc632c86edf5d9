#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "pgcl/rational.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json parsed() const { return json::parse(out); }
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = pgcl::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("pgcl_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) const {
    fs::path p = dir_ / name;
    std::ofstream(p) << text << "\n";
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("cli parse") {
  Scratch s;
  Result r = cli({"parse", s.file("fair.pgcl", oracle::kFair)});
  CHECK(r.code == 0);
  CHECK(r.out == std::string(oracle::kFair) + "\n");
  CHECK(cli({"parse", s.file("bad.pgcl", "x := ")}).code == 2);
  CHECK(cli({"parse", s.file("range.pgcl", "{x := 1} [3/2] {x := 0}")}).code == 2);
  CHECK(cli({"parse", s.path("missing.pgcl")}).code == 3);
  CHECK(cli({"frobnicate"}).code == 3);
}

TEST_CASE("cli run") {
  Scratch s;
  std::string fair = s.file("fair.pgcl", oracle::kFair);
  Result r = cli({"run", fair, "--choices", "L", "--max-steps", "2", "--json"});
  REQUIRE(r.code == 0);
  json j = r.parsed();
  CHECK(j["schema_version"] == "1");
  CHECK(j["result"]["env"]["x"] == "1/1");
  CHECK(j["result"]["prob"] == "1/2");
  CHECK(j["result"]["terminated"] == true);
  CHECK(cli({"run", fair, "--max-steps", "2"}).code == 5);
  CHECK(cli({"run", fair, "--choices", "LX", "--max-steps", "2"}).code == 3);
}

TEST_CASE("cli expect and term") {
  Scratch s;
  std::string fair = s.file("fair.pgcl", oracle::kFair);
  std::string div = s.file("div.pgcl", oracle::kDiverge);
  std::string geo = s.file("geo.pgcl", oracle::kGeo);

  json f = cli({"expect", fair, "--var", "x", "--nodes", "10", "--json"}).parsed();
  CHECK(f["expectation_mass"]["x"] == "1/2");
  CHECK(f["terminated_mass"] == "1/1");

  json d = cli({"expect", div, "--var", "x", "--nodes", "100", "--json"}).parsed();
  CHECK(d["expectation_mass"]["x"] == "0/1");

  json g = cli({"expect", geo, "--var", "i", "--nodes", "100000", "--max-depth", "126", "--json"}).parsed();
  CHECK(pgcl::parse_rational(g["expectation_mass"]["i"].get<std::string>()) >= pgcl::make_rational(1023, 1024));

  json t = cli({"term", fair, "--nodes", "10", "--json"}).parsed();
  CHECK(t["terminated_mass"] == "1/1");

  json tc = cli({"term", div, "--nodes", "100", "--certify-divergence", "--json"}).parsed();
  CHECK(tc["divergent_mass"] == "1/1");

  json tg = cli({"term", geo, "--nodes", "100000", "--max-depth", "126", "--json"}).parsed();
  CHECK(pgcl::parse_rational(tg["terminated_mass"].get<std::string>()) >= 1 - pgcl::pow2(-21));

  json sb = cli({"term", fair, "--y1", "2", "--y2", "2", "--json"}).parsed();
  CHECK(sb["terminated_mass"] == "1/1");

  CHECK(cli({"term", fair, "--nodes", "10", "--y1", "2", "--y2", "2"}).code == 3);
  CHECK(cli({"expect", fair, "--nodes", "10"}).code == 3);

  Result human = cli({"expect", fair, "--var", "x", "--nodes", "10"});
  CHECK(human.out.find("approximate") != std::string::npos);
}

TEST_CASE("cli lexp and refute-uexp") {
  Scratch s;
  std::string fair = s.file("fair.pgcl", oracle::kFair);
  json w = cli({"lexp", fair, "--var", "x", "--q", "1/4", "--json"}).parsed();
  CHECK(w["verdict"] == "witness");
  CHECK(w["sum"] == "1/2");
  CHECK(w["witness"].contains("y1"));
  CHECK(w["witness"].contains("y2"));

  json u = cli({"lexp", fair, "--var", "x", "--q", "1/2", "--nodes", "200", "--json"}).parsed();
  CHECK(u["verdict"] == "unknown");

  json r = cli({"refute-uexp", fair, "--var", "x", "--q", "1", "--delta", "1/2", "--json"}).parsed();
  CHECK(r["verdict"] == "refuted");
  json nr = cli({"refute-uexp", fair, "--var", "x", "--q", "1", "--delta", "1/4", "--json"}).parsed();
  CHECK(nr["verdict"] == "not_refuted");
  CHECK(cli({"refute-uexp", fair, "--var", "x", "--q", "1", "--delta", "0"}).code == 3);
}

TEST_CASE("cli sample") {
  Scratch s;
  std::string fair = s.file("fair.pgcl", oracle::kFair);
  Result r = cli({"sample", fair, "--var", "x", "-n", "10000", "--seed", "42", "--json"});
  REQUIRE(r.code == 0);
  json j = r.parsed();
  CHECK(std::abs(j["mean"].get<double>() - 0.5) <= 0.02);
  CHECK(j["rng"] == "splitmix64-counter/v1");
  CHECK(cli({"sample", fair, "--var", "x", "-n", "10000", "--seed", "42", "--json", "--workers", "4"}).out == r.out);
}

TEST_CASE("cli reduce") {
  Scratch s;
  std::string one = s.file("one.pgcl", "x := 1");
  std::string out = s.path("p.pgcl");
  Result r = cli({"reduce", "--kind", "ast2exp", one, "--out", out});
  REQUIRE(r.code == 0);
  std::ifstream in(out);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("v := 0; x := 1; v := 1") != std::string::npos);

  CHECK(cli({"reduce", "--kind", "uh2ast", s.file("fair.pgcl", oracle::kFair)}).code == 4);

  std::string out2 = s.path("q.pgcl");
  REQUIRE(cli({"reduce", "--kind", "uh2uexp", one, "--out", out2}).code == 0);
  std::ifstream side(s.path("q.json"));
  json j = json::parse(side);
  CHECK(j["var"] == "v");
  CHECK(j["value"] == "1/1");
  CHECK(j["kind"] == "uh_to_uexp");

  // The written program is valid input again.
  CHECK(cli({"parse", out2}).code == 0);
  CHECK(cli({"reduce", "--kind", "bogus", one}).code == 3);
}
