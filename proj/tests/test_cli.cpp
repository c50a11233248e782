#include "catch_support.hpp"
#include "fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <margopen/cli.hpp>
#include <margopen/document.hpp>

using namespace margopen;
using margopen::testing::R;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "margopen");
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& rel) { return std::string(MARGOPEN_DATA_DIR) + "/" + rel; }

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / ("margopen_test_" + name);
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_CASE("marginals of the coupled fixture", "[cli]") {
  auto r = run({"marginals", data("two_by_two/coupled.json")});
  REQUIRE(r.code == cli::exit_ok);
  auto pair = doc::read_marginal_pair_document(doc::parse_text(r.out, "stdout"));
  testing::TwoByTwo f;
  CHECK(pair.mu == f.mu);
  CHECK(pair.nu == f.nu);
}

TEST_CASE("tensor subcommand", "[cli]") {
  auto r = run({"tensor", data("two_by_two/mu.json"), data("two_by_two/nu.json")});
  REQUIRE(r.code == cli::exit_ok);
  testing::TwoByTwo f;
  CHECK(doc::read_joint_document(doc::parse_text(r.out, "stdout")) == tensor(f.mu, f.nu));
}

TEST_CASE("couple subcommand", "[cli]") {
  auto r = run({"couple", data("two_by_two/lambda0.json"), data("two_by_two/grid.json"), data("two_by_two/mu.json"),
                data("two_by_two/nu.json")});
  REQUIRE(r.code == cli::exit_ok);
  auto report = doc::read_preimage_report_document(doc::parse_text(r.out, "stdout"));
  testing::TwoByTwo f;
  CHECK(report.lambda ==
        joint_from_ids(f.x, f.y, {{"a", "c", R(2, 5)}, {"b", "c", R(1, 10)}, {"b", "d", R(1, 2)}}));

  auto mismatch = run({"couple", data("two_by_two/lambda0.json"), data("two_by_two/grid.json"),
                       data("two_by_two/mu.json"), data("two_by_two/nu_heavy.json")});
  CHECK(mismatch.code == cli::exit_input);
  CHECK(mismatch.err.find("error:") != std::string::npos);
}

TEST_CASE("certify subcommand", "[cli]") {
  auto ok = run({"certify", data("two_by_two/lambda0.json"), data("two_by_two/cells.json"), "--eps", "1/5",
                 "--trials", "1000", "--seed", "42"});
  CHECK(ok.code == cli::exit_ok);
  auto rep = doc::read_cert_report_document(doc::parse_text(ok.out, "stdout"));
  CHECK(rep.violations.empty());
  CHECK(rep.trials == 1000);

  auto again = run({"certify", data("two_by_two/lambda0.json"), data("two_by_two/cells.json"), "--eps", "1/5",
                    "--trials", "1000", "--seed", "42"});
  CHECK(again.out == ok.out);

  auto mutated = run({"certify", data("asymmetric/lambda0.json"), data("asymmetric/cells.json"), "--eps", "1/5",
                      "--trials", "50", "--seed", "1", "--alpha-rule", "max"});
  CHECK(mutated.code == cli::exit_violation);

  CHECK(run({"certify", data("two_by_two/lambda0.json"), data("two_by_two/cells.json"), "--eps", "0.2"}).code ==
        cli::exit_input);
}

TEST_CASE("refine subcommand", "[cli]") {
  auto r = run({"refine", data("two_by_two/lambda0.json"), data("two_by_two/cells.json"), "--eps0", "1/5"});
  REQUIRE(r.code == cli::exit_ok);
  auto res = doc::read_refine_result_document(doc::parse_text(r.out, "stdout"));
  CHECK(res.delta == R(1, 40));
  CHECK(res.grid.cell_count() == 4);
}

TEST_CASE("check subcommand", "[cli]") {
  const auto lam = data("two_by_two/lambda0.json");
  auto r4 = run({"check", lam, "--lemma", "4", "--v=-1/2:3/2", "--v-prime=-1/2:1/2", "--w=-1/2:3/2", "--eps", "3/5"});
  REQUIRE(r4.code == cli::exit_ok);
  auto [which, result] = doc::read_lemma_check_document(doc::parse_text(r4.out, "stdout"));
  CHECK(which == 4);
  CHECK(result.lhs == R(1, 2));

  auto r5 = run({"check", lam, "--lemma", "5", "--v=-1/2:3/2", "--v-prime=-1/2:1/2", "--w=-1/2:3/2",
                 "--w-prime=-1/2:1/2", "--eps", "3/5", "--eps2", "3/5"});
  CHECK(r5.code == cli::exit_ok);

  auto hyp = run({"check", lam, "--lemma", "4", "--v=-1/2:3/2", "--v-prime=-1/2:1/2", "--w=-1/2:3/2", "--eps", "1/2"});
  CHECK(hyp.code == cli::exit_input);
  CHECK(hyp.err.find("hypothesis") != std::string::npos);
}

TEST_CASE("output file and input errors", "[cli]") {
  auto target = std::filesystem::temp_directory_path() / "margopen_test_out.json";
  std::filesystem::remove(target);
  auto r = run({"-o", target.string(), "marginals", data("two_by_two/lambda0.json")});
  CHECK(r.code == cli::exit_ok);
  CHECK(r.out.empty());
  CHECK(std::filesystem::exists(target));

  auto bad = temp_file("bad.json", R"({"schema_version": 1, "kind": "joint_measure", "x_space": []})");
  auto e = run({"marginals", bad.string()});
  CHECK(e.code == cli::exit_input);
  CHECK(e.err.find("x_space") != std::string::npos);

  CHECK(run({"marginals", "/nonexistent/file.json"}).code == cli::exit_input);
  CHECK(run({}).code == cli::exit_input);
  CHECK(run({"frobnicate"}).code == cli::exit_input);
  CHECK(run({"--help"}).code == cli::exit_ok);
}
