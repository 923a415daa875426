#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "pipg/cli.hpp"
#include "pipg/io.hpp"

using namespace pipg;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return std::string(PIPG_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("pipg_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors") {
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({"parse", data("missing.pi")}).code == cli::kUsage);
    CHECK(run({"fairtest", data("q1.pi"), data("q2.pi"), "--pole", "sometimes"}).code == cli::kUsage);
    CHECK(run({"trace", "seed", "fork2"}).code == cli::kUsage);
    CHECK(run({"parse", temp_file("bad.pi", "[a] a(b")}).code == cli::kUsage);
    CHECK(run({"trace", "check", temp_file("bad.cospan", "PRESHEAF X\nAGENT 0 2 1\n")}).code == cli::kUsage);
  }

  TEST_CASE("parse and step") {
    auto r = run({"parse", data("q1.pi")});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("Loop") != std::string::npos);
    for (const char* lts : {"conf", "m", "s"}) {
      auto s = run({"step", data("coffee_p.pi"), "--lts", lts, "-n", "2"});
      CHECK_MESSAGE(s.code == cli::kOk, lts << ": " << s.err);
    }
  }

  TEST_CASE("trace check") {
    auto r = run({"trace", "check", data("fork2.cospan")});
    CHECK(r.code == cli::kOk);
    CHECK(r.out == "Ok length=1\n");
    gen::Rng rng(7);
    auto bad = fixtures::drop_final_agent(traces::seed_cospan({presheaf::Object::fork(2)}), rng);
    auto v = run({"trace", "check", temp_file("dropped.cospan", io::print_cospan(bad))});
    CHECK(v.code == cli::kNegative);
    REQUIRE(v.out.rfind("Violation ", 0) == 0);
    auto j = nlohmann::json::parse(v.out.substr(10));
    CHECK(j["condition"] == "Final");
  }

  TEST_CASE("trace sequentialisation and views") {
    auto ts = fixtures::two_syncs();
    std::string path = temp_file("two_syncs.cospan", io::print_cospan(ts.trace));
    auto seq = run({"trace", "seq", path});
    CHECK(seq.code == cli::kOk);
    CHECK(seq.out.find("sync:1,1,2,2,1") < seq.out.find("sync:2,2,2,1,2"));
    auto views = run({"trace", "views", path, "--tie", "greatest"});
    CHECK(views.code == cli::kOk);
    CHECK(views.out.find("in:1,1") != std::string::npos);
    auto both = run({"trace", "compose", data("fork2.cospan"), data("fork2.cospan")});
    CHECK(both.code != cli::kOk);
  }

  TEST_CASE("dot output") {
    auto fork = run({"dot", "causal", data("fork2.cospan")});
    CHECK(fork.code == cli::kOk);
    CHECK(count(fork.out, "shape=diamond") == 1);
    CHECK(count(fork.out, "shape=box") == 3);
    CHECK(count(fork.out, "shape=ellipse") == 2);
    CHECK(run({"dot", "causal", data("fork2.cospan")}).out == fork.out);

    std::string ident = temp_file("ident.cospan", io::print_cospan(traces::identity_trace(fixtures::fork_ambient().x)));
    auto id = run({"dot", "diagram", ident});
    CHECK(id.code == cli::kOk);
    CHECK(count(id.out, "shape=diamond") == 0);
    CHECK(count(id.out, "shape=box") == 2);

    auto ts = fixtures::two_syncs();
    auto two = run({"dot", "diagram", temp_file("two_syncs_dot.cospan", io::print_cospan(ts.trace))});
    CHECK(count(two.out, "shape=diamond") == 2);
  }

  TEST_CASE("translation and back-translation") {
    auto t = run({"translate", data("coffee_q.pi")});
    REQUIRE(t.code == cli::kOk);
    std::string body = t.out.substr(t.out.find('\n') + 1);
    auto z = run({"zeta", temp_file("coffee_q.beh", body)});
    CHECK(z.code == cli::kOk);
    auto again = run({"parse", temp_file("coffee_q_back.pi", z.out)});
    CHECK(again.code == cli::kOk);
    auto loop = run({"zeta", data("q1.pi")});
    CHECK(loop.code == cli::kOk);
    CHECK(run({"parse", temp_file("q1_back.pi", loop.out)}).code == cli::kOk);
  }

  TEST_CASE("fair testing verdicts and exit codes") {
    auto must = run({"fairtest", data("q1.pi"), data("q2.pi"), "--pole", "must", "--tests", "auto:2"});
    CHECK(must.code == cli::kNegative);
    auto j = nlohmann::json::parse(must.out);
    CHECK(j["verdict"] == "Differ");
    CHECK(j["witness"]["test"] == "a<a>.tick.0");
    CHECK(j["witness"]["side"] == "x");

    auto fair = run({"fairtest", data("q1.pi"), data("q2.pi"), "--pole", "fair", "--tests", "auto:2"});
    CHECK(fair.code == cli::kOk);
    auto jf = nlohmann::json::parse(fair.out);
    CHECK(jf["verdict"] == "Same");
    CHECK(jf["witness"].is_null());
    CHECK(jf["complete"] == true);

    auto capped = run({"fairtest", data("q1.pi"), data("q2.pi"), "--tests", "auto:1", "--cap", "1"});
    CHECK(capped.code == cli::kInconclusive);

    std::string tests = temp_file("tests.txt", "# one test\na<a>.tick.0\n");
    CHECK(run({"fairtest", data("q1.pi"), data("q2.pi"), "--pole", "must", "--tests", tests}).code ==
          cli::kNegative);
  }

  TEST_CASE("bisimulation modes") {
    CHECK(run({"bisim", "--expansion", data("coffee_p.pi"), "--against", "auto", "--depth", "6"}).code == cli::kOk);
    CHECK(run({"bisim", "--expansion", data("q1.pi"), "--against", "zeta", "--depth", "6"}).code == cli::kOk);
    CHECK(run({"bisim", data("p1.pi"), data("p1.pi"), "--mode", "strong"}).code == cli::kOk);
    // Without a test neither coffee machine moves.
    CHECK(run({"bisim", data("coffee_p.pi"), data("coffee_q.pi"), "--mode", "weak"}).code == cli::kOk);
    CHECK(run({"bisim", temp_file("tick.pi", "[] tick.0\n"), temp_file("nil.pi", "[] 0\n")}).code == cli::kNegative);
    CHECK(run({"bisim", data("q1.pi"), data("q2.pi"), "--mode", "strong"}).code == cli::kNegative);
    std::string rec = temp_file("fwd.pi", "Fwd := a(x).b<x>.Fwd\n[a, b] Fwd\n");
    CHECK(run({"bisim", "--expansion", rec, "--against", "auto"}).code == cli::kInconclusive);
  }

  TEST_CASE("pole membership of one configuration") {
    std::string tested = temp_file("q1_tested.pi", "Loop := tau.Loop\n[a] Loop | a(x).0 ; a<a>.tick.0\n");
    CHECK(run({"bbot", tested, "--pole", "fair"}).code == cli::kOk);
    auto must = run({"bbot", tested, "--pole", "must"});
    CHECK(must.code == cli::kNegative);
    CHECK(nlohmann::json::parse(must.out)["verdict"] == "false");
    CHECK(run({"bbot", tested, "--pole", "must", "--lts", "m"}).code == cli::kNegative);
  }

  TEST_CASE("the installed binary reports the same exit codes") {
    std::string tool = PIPG_TOOL_PATH;
    auto status = [&](const std::string& args) {
      int s = std::system((tool + " " + args + " > /dev/null 2>&1").c_str());
      return WEXITSTATUS(s);
    };
    CHECK(status("trace check " + data("fork2.cospan")) == 0);
    CHECK(status("fairtest " + data("q1.pi") + " " + data("q2.pi") + " --pole must --tests auto:2") == 1);
    CHECK(status("nonsense") == 2);
  }
}
