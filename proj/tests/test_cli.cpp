#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_amc_path;

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_amc(const std::string& args) {
  std::string cmd = g_amc_path + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string tmp_path(const std::string& name) { return "/tmp/amc_cli_test_" + name; }

}  // namespace

TEST_CASE("generate, build, and check round trip through the binary") {
  std::string amas = tmp_path("asvr22.amas");
  RunResult gen = run_amc("gen asvr --voters 2 --candidates 2 --out " + amas);
  CHECK(gen.exit_code == 0);

  RunResult build = run_amc("build " + amas);
  CHECK(build.exit_code == 0);
  CHECK(build.out.find("states: 495") != std::string::npos);

  RunResult check = run_amc("check " + amas +
                            " --formula \"<<Voter1>> G !voted_1_b\" --strategy ir "
                            "--semantics std --expect true");
  CHECK(check.exit_code == 0);
  CHECK(check.out.find("verdict: True") != std::string::npos);

  RunResult fail = run_amc("check " + amas +
                           " --formula \"<<Voter1>> F voted_1_a\" --strategy ir "
                           "--semantics std --expect true");
  CHECK(fail.exit_code == 1);
  CHECK(fail.out.find("verdict: False") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_amc("frobnicate").exit_code == 2);
  CHECK(run_amc("check").exit_code == 2);
  std::string amas = tmp_path("asvr11.amas");
  run_amc("gen asvr --voters 1 --candidates 1 --out " + amas);
  // The reactive perfect-recall combination is conjectured only.
  RunResult r = run_amc("check " + amas +
                        " --formula \"<<Voter1>> F true\" --strategy iR-sound "
                        "--semantics react");
  CHECK(r.exit_code == 2);
}

TEST_CASE("resource limits exit with 3") {
  std::string amas = tmp_path("asvr22b.amas");
  run_amc("gen asvr --voters 2 --candidates 2 --out " + amas);
  RunResult r = run_amc("build " + amas + " --max-states 10");
  CHECK(r.exit_code == 3);
}

TEST_CASE("the sound strategy pipeline emits transducer witnesses") {
  std::string amas = tmp_path("asvr22c.amas");
  run_amc("gen asvr --voters 2 --candidates 2 --out " + amas);
  std::string witness = tmp_path("witness.txt");
  RunResult r = run_amc("check " + amas +
                        " --formula \"<<Voter1>> G !voted_1_b\" --strategy iR-sound "
                        "--semantics std --witness " + witness);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("verdict: SatisfiedSound") != std::string::npos);
  std::ifstream in(witness);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("transducer Voter1") != std::string::npos);
}

TEST_CASE("reduce, export, and the oracles run end to end") {
  std::string amas = tmp_path("asvr22d.amas");
  run_amc("gen asvr --voters 2 --candidates 2 --out " + amas);
  std::string full = tmp_path("full.model");
  std::string red = tmp_path("red.model");
  CHECK(run_amc("build " + amas + " --out " + full).exit_code == 0);
  CHECK(run_amc("reduce " + amas + " --coalition Voter1 --props voted_1_a,voted_1_b --out " +
                red + " --validate-c1 --report " + tmp_path("report.txt"))
            .exit_code == 0);

  RunResult st = run_amc("oracle stutter-equiv " + full + " " + red +
                         " --bound 6 --props voted_1_a,voted_1_b");
  CHECK(st.exit_code == 0);  // True or Inconclusive
  CHECK(st.out.find("verdict: False") == std::string::npos);

  CHECK(run_amc("oracle intersection " + amas).exit_code == 0);
  CHECK(run_amc("oracle simulate " + amas + " --depth 3").exit_code == 0);

  std::string spec = tmp_path("suite.spec");
  {
    std::ofstream out(spec);
    out << "# in-scope formulas\n<<Voter1>> G !voted_1_b\n<<Voter1>> F voted_1_a\n";
  }
  RunResult cmp = run_amc("oracle compare-verdicts " + amas +
                          " --coalition Voter1 --props voted_1_a,voted_1_b --spec " + spec +
                          " --semantics std");
  CHECK(cmp.exit_code == 0);
  CHECK(cmp.out.find("disagreements: 0") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  std::string amas = tmp_path("asvr21.amas");
  run_amc("gen asvr --voters 2 --candidates 1 --out " + amas);
  RunResult b1 = run_amc("build " + amas);
  RunResult b2 = run_amc("build " + amas);
  CHECK(b1.out == b2.out);

  std::string d1 = tmp_path("m1.dot");
  std::string d2 = tmp_path("m2.dot");
  run_amc("export-dot " + amas + " --out " + d1);
  run_amc("export-dot " + amas + " --out " + d2);
  std::ifstream f1(d1), f2(d2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  CHECK(!s1.str().empty());
}

TEST_CASE("expanded systems can be re-checked from their serialized form") {
  std::string amas = tmp_path("asvr11e.amas");
  run_amc("gen asvr --voters 1 --candidates 1 --out " + amas);
  std::string expanded = tmp_path("expanded.amas");
  CHECK(run_amc("expand " + amas + " --out " + expanded).exit_code == 0);
  RunResult b = run_amc("build " + expanded);
  CHECK(b.exit_code == 0);
  CHECK(b.out.find("states:") != std::string::npos);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli [doctest options] <path-to-amc>\n");
    return 1;
  }
  g_amc_path = argv[argc - 1];
  doctest::Context ctx;
  ctx.applyCommandLine(argc - 1, argv);
  return ctx.run();
}
