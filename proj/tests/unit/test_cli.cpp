#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "support/generators.hpp"
#include "swing/cli.hpp"
#include "swing/shortfall.hpp"

using namespace swing;
using namespace swing::cli;

namespace {

std::string contract(const std::string& name) { return std::string(SWING_CONTRACTS_DIR) + "/" + name; }

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_with(RunConfig cfg) {
  std::ostringstream out, err;
  int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(Command cmd, const std::string& file) {
  RunConfig cfg;
  cfg.command = cmd;
  cfg.input = contract(file);
  return cfg;
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

int shell(const std::string& cmd) {
  int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("price of contract B") {
  auto r = run_with(config(Command::price, "contract_b.json"));
  REQUIRE(r.code == kExitOk);
  auto j = Json::parse(r.out);
  CHECK(j["price"] == "2/3");
  CHECK(j["root_values"].size() == 2);
}

TEST_CASE("risk of contract A at the price is zero") {
  auto cfg = config(Command::risk, "contract_a.json");
  cfg.capital = Rational(1, 10);
  auto r = run_with(cfg);
  REQUIRE(r.code == kExitOk);
  CHECK(Json::parse(r.out)["risk"] == "0");
  cfg.capital = Rational();
  CHECK(Json::parse(run_with(cfg).out)["risk"] == "1/10");
}

TEST_CASE("risk curve of the zero contract is a single breakpoint") {
  auto r = run_with(config(Command::risk_curve, "zero.json"));
  REQUIRE(r.code == kExitOk);
  CHECK(Json::parse(r.out)["curve"].dump() == R"([["0","0"]])");
}

TEST_CASE("exported risk curve evaluates like the in-memory one") {
  for (const char* name : {"contract_a.json", "contract_b.json", "put_swing.json"}) {
    auto r = run_with(config(Command::risk_curve, name));
    REQUIRE(r.code == kExitOk);
    PwlFn exported = pwl_from_json(Json::parse(r.out)["curve"]);
    auto c = load_contract(contract(name));
    auto st = risk_recursion(c);
    const PwlFn& mem = st.value(0, c.claim_count());
    swing::testing::Rng rng(71);
    for (int i = 0; i < 100; ++i) {
      Rational x = swing::testing::random_wealth(rng, mem.support_end() + Rational(1));
      CHECK(exported(x) == mem(x));
    }
  }
}

TEST_CASE("verify passes on every bundled contract") {
  for (const auto& entry : std::filesystem::directory_iterator(SWING_CONTRACTS_DIR)) {
    auto cfg = config(Command::verify, entry.path().filename().string());
    auto r = run_with(cfg);
    INFO(entry.path().string() << "\n" << r.out << r.err);
    CHECK(r.code == kExitOk);
    CHECK(Json::parse(r.out)["pass"] == true);
  }
}

TEST_CASE("exit codes") {
  auto bad = write_temp("swing_bad.json", R"({"model": {"S0": "1", "a": "-1/2", "b": "1", "p": "1/2", "N": 1},
    "claims": [{"exercise": {"kind": "table", "values": ["0", "1", "-2"]}}]})");
  RunConfig cfg;
  cfg.input = bad;
  auto r = run_with(cfg);
  CHECK(r.code == kExitSpec);
  CHECK(r.err.find("node 2") != std::string::npos);

  cfg.input = write_temp("swing_garbage.json", "{ not json");
  CHECK(run_with(cfg).code == kExitSpec);
  cfg.input = "/nonexistent/contract.json";
  CHECK(run_with(cfg).code == kExitSpec);

  auto capped = config(Command::verify, "put_swing.json");
  capped.cap = 3;
  CHECK(run_with(capped).code == kExitCap);

  CHECK(run_with(config(Command::risk, "contract_a.json")).code == kExitSpec);
  auto extra = config(Command::price, "contract_a.json");
  extra.capital = Rational(1);
  CHECK(run_with(extra).code == kExitSpec);

  auto buyer = config(Command::hedge_simulate, "contract_b.json");
  buyer.buyer = "levels:1";
  CHECK(run_with(buyer).code == kExitSpec);
  buyer.buyer = "levels:1,2";
  CHECK(run_with(buyer).code == kExitOk);
}

TEST_CASE("the binary maps failures to exit codes") {
  const std::string cli = SWING_CLI_PATH;
  CHECK(shell(cli + " price " + contract("contract_a.json")) == 0);
  CHECK(shell(cli + " price /nonexistent.json") == 1);
  CHECK(shell(cli + " risk " + contract("contract_a.json") + " --capital 1/0") == 1);
  CHECK(shell(cli + " verify " + contract("put_swing.json") + " --cap 3") == 2);
  CHECK(shell(cli + " frobnicate") == 1);
}

TEST_CASE("csv and decimal output") {
  auto cfg = config(Command::hedge_simulate, "contract_a.json");
  cfg.format = Format::csv;
  auto r = run_with(cfg);
  CHECK(r.out.rfind("path,level,wealth\n", 0) == 0);
  auto price = config(Command::price, "contract_b.json");
  price.decimals = 4;
  CHECK(Json::parse(run_with(price).out)["price"] == "0.6667");
  auto curve = config(Command::risk_curve, "contract_a.json");
  curve.format = Format::csv;
  curve.samples = 5;
  CHECK(run_with(curve).out == "x,risk\n0,1/10\n1/32,11/160\n1/16,3/80\n3/32,1/160\n1/8,0\n");
}

TEST_CASE("identical inputs give identical bytes") {
  for (Command cmd : {Command::price, Command::strategies, Command::hedge_simulate, Command::risk_curve, Command::verify}) {
    auto cfg = config(cmd, "put_swing.json");
    CHECK(run_with(cfg).out == run_with(cfg).out);
  }
}
