#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "realiz/render.hpp"
#include "realiz/suite.hpp"
#include "support.hpp"

using namespace realiz;
using realiz::testing::bundled;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun cli(const std::string& args, const std::string& env = {}) {
  CliRun r;
  std::string cmd = env + " " + REALIZ_CLI + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string inst(const std::string& name) { return std::string(REALIZ_INSTANCE_DIR) + "/" + name + ".json"; }

std::filesystem::path scratch(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / ("realiz-test-" + name);
  std::ofstream(p) << body;
  return p;
}

Report mixed() {
  Report r;
  r.pass("uord", "b", "law b");
  r.add("meets", "a", "law a", Verdict::NotApplicable, {}, "not functional");
  r.unknown("uord", "a", "law a", "budget");
  return r;
}

}  // namespace

TEST(Render, EmptyReportIsEmptyArray) {
  EXPECT_EQ(report_json(Report{}), nlohmann::json::array());
  EXPECT_EQ(render_json(Report{}), "[]\n");
  EXPECT_EQ(exit_code(Report{}), 0);
}

TEST(Render, OrderedByModuleThenId) {
  auto j = report_json(mixed());
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0]["module"], "meets");
  EXPECT_EQ(j[1]["id"], "a");
  EXPECT_EQ(j[2]["id"], "b");
}

TEST(Render, JsonRoundTripIsByteIdentical) {
  SuiteOptions so;
  for (const char* name : {"2-chain", "relcomp-counterexample"}) {
    std::string first = render_json(run_suite(bundled(name), so));
    std::string again = render_json(parse_report_json(nlohmann::json::parse(first)));
    EXPECT_EQ(first, again) << name;
  }
  EXPECT_THROW(parse_report_json(nlohmann::json::object()), std::invalid_argument);
}

TEST(Render, ExitCodes) {
  Report r = mixed();
  EXPECT_EQ(exit_code(r), 2);
  r.fail("udist", "c", "law c", "witness");
  EXPECT_EQ(exit_code(r), 1);
  Report na;
  na.pass("uord", "x", "law");
  na.add("uord", "y", "law", Verdict::NotApplicable, {}, "");
  EXPECT_EQ(exit_code(na), 0);
}

TEST(Render, TextHasSummaryLine) {
  std::string t = render_text(mixed(), false);
  EXPECT_NE(t.find("UNKNOWN  uord/a"), std::string::npos);
  EXPECT_NE(t.find("1 pass, 0 fail, 1 unknown, 1 not applicable"), std::string::npos);
}

TEST(Render, DotListsEveryBasePair) {
  Instance in = bundled("2-chain");
  std::string dot = to_dot(in.uord, "two");
  EXPECT_EQ(dot.rfind("digraph \"two\" {", 0), 0u);
  std::size_t edges = 0;
  for (std::size_t p = dot.find("->"); p != std::string::npos; p = dot.find("->", p + 2)) ++edges;
  EXPECT_EQ(edges, static_cast<std::size_t>(in.uord.bases(0, 0)[0].count()));
}

TEST(Render, SuiteIsDeterministicAcrossWorkers) {
  SuiteOptions one, many;
  many.jobs = 4;
  Instance in = bundled("2-chain");
  EXPECT_EQ(render_json(run_suite(in, one)), render_json(run_suite(in, many)));
}

TEST(Replay, RelcompWitnessReproducesFailure) {
  Instance in = bundled("relcomp-counterexample");
  Report r = check_relcomp(in.uord, *in.meets, *in.rc);
  const Check* c = r.first_failure();
  ASSERT_NE(c, nullptr);
  auto sort = [&](const std::string& key) {
    auto p = c->witness.find(key + "=");
    EXPECT_NE(p, std::string::npos);
    std::string name = c->witness.substr(p + key.size() + 1, c->witness.find(' ', p) - p - key.size() - 1);
    for (std::size_t i = 0; i < in.uord.num_sorts(); ++i)
      if (in.uord.sorts[i] == name) return i;
    ADD_FAILURE() << "no sort " << name;
    return std::size_t{0};
  };
  std::size_t j = sort("j"), k = sort("k");
  auto again = relcomp_pair_violation(in.uord, *in.meets, j, k, in.rc->arrow_of(j, k), in.rc->app_of(j, k));
  ASSERT_TRUE(again.has_value());
  EXPECT_EQ(*again, c->witness);
}

TEST(Cli, ValidateBundledInstances) {
  for (const char* name : {"one-point", "2-chain", "diamond", "relcomp-counterexample"}) {
    CliRun r = cli("validate " + inst(name));
    EXPECT_EQ(r.code, 0) << name << "\n" << r.out;
  }
}

TEST(Cli, BrokenInputExitsThree) {
  EXPECT_EQ(cli("validate " + scratch("broken.json", "{\"uord\": ").string()).code, 3);
  EXPECT_EQ(cli("validate " + scratch("schema.json", "{\"uord\": {\"sorts\": 3}}").string()).code, 3);
  EXPECT_EQ(cli("validate /nonexistent/file.json").code, 3);
  EXPECT_EQ(cli("no-such-command").code, 3);
}

TEST(Cli, RelcompCheckOnCounterexampleFailsWithWitness) {
  CliRun r = cli("relcomp check " + inst("relcomp-counterexample"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL  relcomp/relational-completeness"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("good("), std::string::npos);
}

TEST(Cli, SuiteOnTwoChainPasses) {
  CliRun r = cli("suite --format json " + inst("2-chain"));
  EXPECT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  for (const auto& c : j) EXPECT_NE(c["verdict"], "fail");
}

TEST(Cli, SuiteJsonMatchesLibrary) {
  CliRun r = cli("suite --format json " + inst("2-chain"));
  EXPECT_EQ(r.out, render_json(run_suite(bundled("2-chain"), SuiteOptions{})));
}

TEST(Cli, EntailsAndDesignated) {
  EXPECT_EQ(cli("entails --p H:0,1 --q H:1,1 " + inst("2-chain")).code, 0);
  EXPECT_EQ(cli("entails --p H:1,1 --q H:0,1 " + inst("2-chain")).code, 1);
  CliRun d = cli("designated " + inst("2-chain"));
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("{1}"), std::string::npos) << d.out;
}

TEST(Cli, ExportDot) {
  CliRun r = cli("export-dot " + inst("2-chain"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, to_dot(bundled("2-chain").uord, bundled("2-chain").name));
}

TEST(Cli, PcaAbstract) {
  CliRun r = cli("pca abstract --term \"x\" --vars x --samples 20");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("SKK"), std::string::npos) << r.out;
}

TEST(Cli, FuelFlagOverridesEnvironment) {
  EXPECT_EQ(cli("pca axioms --samples 10", "REALIZ_FUEL=0").code, 2);
  EXPECT_EQ(cli("pca axioms --samples 10 --fuel 10000", "REALIZ_FUEL=0").code, 0);
  EXPECT_EQ(cli("validate " + inst("2-chain"), "REALIZ_FUEL=abc").code, 3);
}
