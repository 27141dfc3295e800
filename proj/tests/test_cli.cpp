// End-to-end contract tests against the installed binary.  The test runner
// passes the binary location in FACTORISATIO_BIN; everything here talks to it
// through a shell the way a user would.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string binary_path() {
  const char* bin = std::getenv("FACTORISATIO_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "FACTORISATIO_BIN must point at the CLI binary");
  return bin;
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd = env_prefix + "'" + binary_path() + "' " + args + " 2>/dev/null";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json parse(const RunResult& r) { return nlohmann::json::parse(r.out); }

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path((std::filesystem::temp_directory_path() / name).string()) {
    cleanup();
  }
  ~TempFile() { cleanup(); }
  void cleanup() {
    std::remove(path.c_str());
    std::remove((path + ".cache").c_str());
  }
};

}  // namespace

TEST_CASE("f prints the bare count") {
  CHECK(run_cli("f 28").out == "4\n");
  CHECK(run_cli("f 1").out == "1\n");
  CHECK(run_cli("f 96").out == "19\n");

  CHECK(run_cli("f 0").exit_code == 2);
  CHECK(run_cli("f notanumber").exit_code == 2);
  CHECK(run_cli("f").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);  // no subcommand
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("nosuchcommand").exit_code == 2);
}

TEST_CASE("tables render in both formats, global flags work after the name") {
  CHECK(run_cli("tables stirling 4 --format csv").out == "l,stirling\n1,1\n2,7\n3,6\n4,1\n");

  auto bell = parse(run_cli("tables bell 3"));
  CHECK(bell["table"] == "bell");
  CHECK(bell["rows"][3]["bell"] == "5");

  auto partitions = run_cli("tables partitions 5 --format csv");
  CHECK(partitions.exit_code == 0);
  CHECK(partitions.out.substr(0, 19) == "n,p,estimate,ratio\n");

  CHECK(run_cli("tables nosuchtable 5").exit_code == 2);
  // non-table reports have no CSV form
  CHECK(run_cli("selfdiv 10 --format csv").exit_code == 2);
  CHECK(run_cli("values 5 --format xml").exit_code == 2);
}

TEST_CASE("values walk, exact and budget-limited") {
  auto r = run_cli("values 5 --retain");
  CHECK(r.exit_code == 0);
  auto j = parse(r);
  CHECK(j["count"] == 5);
  CHECK(j["exact"] == true);
  CHECK(j["values"] == nlohmann::json({"1", "2", "3", "4", "5"}));

  auto limited = run_cli("values 10000 --node-budget 1");
  CHECK(limited.exit_code == 4);  // result delivered but flagged inexact
  CHECK(parse(limited)["exact"] == false);

  CHECK(run_cli("values 0").exit_code == 2);
  CHECK(run_cli("values nonsense").exit_code == 2);
}

TEST_CASE("selfdiv counts and histogram") {
  auto j = parse(run_cli("selfdiv 10"));
  CHECK(j["count"] == 7);
  CHECK(j["omega_histogram"]["1"] == 5);
  CHECK(j["omega_histogram"]["2"] == 2);

  CHECK(run_cli("selfdiv 1").exit_code == 2);
  CHECK(run_cli("selfdiv 2000000").exit_code == 2);  // beyond --sieve-limit
}

TEST_CASE("interval means") {
  auto j = parse(run_cli("interval 0 10"));
  CHECK(j["sum_f"] == "16");
  CHECK(j["mean"].get<double>() == 1.6);
  CHECK(j["regime"] == "pre-asymptotic");

  CHECK(run_cli("interval 0 2").exit_code == 2);  // y >= 3
  CHECK(run_cli("interval 18446744073709551615 100").exit_code == 2);  // x + y overflows
}

TEST_CASE("window inequality report") {
  auto j = parse(run_cli("window 2 2 7"));
  CHECK(j["holds"] == true);
  CHECK(j["lhs"] == "101/210");
  CHECK(j["rhs"] == "23831/88200");

  CHECK(run_cli("window 1 2 7").exit_code == 2);  // k >= 2
}

TEST_CASE("mcheck defaults to the derived parameters, flags override") {
  auto j = parse(run_cli("mcheck 100"));
  CHECK(j["k"] == 6);
  CHECK(j["s"] == 16);
  CHECK(j["used_estimate"] == false);

  auto overridden = parse(run_cli("mcheck 1000 --k 20 --s 23"));
  CHECK(overridden["k"] == 20);
  CHECK(overridden["used_estimate"] == true);

  CHECK(run_cli("mcheck").exit_code == 2);
}

TEST_CASE("hscan grid") {
  auto j = parse(run_cli("hscan 1000"));
  CHECK(j["argmax_k"] == 16);
  CHECK(j["grid"][0]["k"] == 3);
  CHECK(j["grid"].size() > 100);
}

TEST_CASE("omegahist thresholds") {
  auto j = parse(run_cli("omegahist 10"));
  CHECK(j["small_omega_threshold"].is_null());
  CHECK(j["omega_histogram"]["1"] == 7);
  CHECK(run_cli("omegahist 2000000").exit_code == 2);  // beyond --sieve-limit
}

TEST_CASE("output is byte-identical across worker counts") {
  auto one = run_cli("selfdiv 100000 --workers 1");
  auto four = run_cli("selfdiv 100000 --workers 4");
  CHECK(one.exit_code == 0);
  CHECK(one.out == four.out);

  auto iv1 = run_cli("interval 0 50000 --workers 1");
  auto iv3 = run_cli("interval 0 50000 --workers 3");
  CHECK(iv1.out == iv3.out);
}

TEST_CASE("checkpoint: interrupt and resume reproduce the straight run") {
  TempFile cp("factorisatio_cli_cp.json");

  auto straight = run_cli("selfdiv 30000");
  REQUIRE(straight.exit_code == 0);

  auto halted = run_cli("selfdiv 30000 --checkpoint-every 10000 --checkpoint-file '" +
                        cp.path + "' --halt-at 15000");
  CHECK(halted.exit_code == 0);
  CHECK(halted.out.empty());  // no report yet, only the checkpoint
  CHECK(std::filesystem::exists(cp.path));

  auto resumed = run_cli("selfdiv 30000 --checkpoint-every 10000 --checkpoint-file '" +
                         cp.path + "' --resume");
  CHECK(resumed.exit_code == 0);
  CHECK(resumed.out == straight.out);
}

TEST_CASE("checkpoint misuse is refused") {
  TempFile cp("factorisatio_cli_cp2.json");

  CHECK(run_cli("selfdiv 30000 --halt-at 15000").exit_code == 2);  // no file/block size
  CHECK(run_cli("selfdiv 30000 --resume").exit_code == 2);         // no file
  // resume from a checkpoint that was never written
  CHECK(run_cli("selfdiv 30000 --checkpoint-file '" + cp.path + "' --resume").exit_code == 5);

  // write one, then point a different job at it
  auto halted = run_cli("selfdiv 30000 --checkpoint-every 10000 --checkpoint-file '" +
                        cp.path + "' --halt-at 15000");
  REQUIRE(halted.exit_code == 0);
  CHECK(run_cli("selfdiv 40000 --checkpoint-every 10000 --checkpoint-file '" + cp.path +
                "' --resume")
            .exit_code == 5);

  // losing the cache snapshot invalidates the checkpoint
  std::remove((cp.path + ".cache").c_str());
  CHECK(run_cli("selfdiv 30000 --checkpoint-every 10000 --checkpoint-file '" + cp.path +
                "' --resume")
            .exit_code == 5);

  // checkpointing disabled: nothing gets written
  TempFile off("factorisatio_cli_cp3.json");
  auto plain = run_cli("selfdiv 30000 --checkpoint-file '" + off.path + "'");
  CHECK(plain.exit_code == 0);
  CHECK_FALSE(std::filesystem::exists(off.path));
}

TEST_CASE("signature cache: environment default and flag override") {
  TempFile env_cache("factorisatio_cli_envcache.txt");
  TempFile flag_cache("factorisatio_cli_flagcache.txt");

  auto r = run_cli("selfdiv 1000", "FACTORISATIO_CACHE='" + env_cache.path + "' ");
  CHECK(r.exit_code == 0);
  CHECK(std::filesystem::exists(env_cache.path));

  // an explicit --cache wins over the environment
  env_cache.cleanup();
  auto r2 = run_cli("selfdiv 1000 --cache '" + flag_cache.path + "'",
                    "FACTORISATIO_CACHE='" + env_cache.path + "' ");
  CHECK(r2.exit_code == 0);
  CHECK(std::filesystem::exists(flag_cache.path));
  CHECK_FALSE(std::filesystem::exists(env_cache.path));

  // a warmed cache must not change any answer
  auto cold = run_cli("selfdiv 1000");
  auto warm = run_cli("selfdiv 1000 --cache '" + flag_cache.path + "'");
  CHECK(cold.out == warm.out);
}
