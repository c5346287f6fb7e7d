#include <doctest.h>
#include <json.hpp>

#include <sstream>

#include "qfb/cli.hpp"

using qfb::run;
using Json = nlohmann::json;

namespace {

struct Result {
  int rc;
  std::string out, err;
};

Result call(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int rc = run(args, in, out, err);
  return {rc, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("classify emits versioned JSON") {
    Result r = call({"classify", "--field", "Q", "--form", "<1,1,1,1,1,1,1,1>"});
    CHECK(r.rc == 0);
    Json j = Json::parse(r.out);
    CHECK(j["schema"] == 1);
    CHECK(j["branch"] == "GP3");
    CHECK(j["index"] == 1);
  }

  TEST_CASE("transfer and hilbert print their values") {
    Result t = call({"transfer", "--ext", "Q(sqrt 2)", "--form", "<1>"});
    CHECK(t.rc == 0);
    CHECK(t.out == "<2, 4>\n");
    Result h = call({"hilbert", "-1", "-1", "2"});
    CHECK(h.rc == 0);
    CHECK(h.out == "-1\n");
    Result hi = call({"hilbert", "-1", "-1", "inf", "--format", "json"});
    CHECK(Json::parse(hi.out)["places"][0]["symbol"] == -1);
    Result split = call({"hilbert", "--field", "Q(sqrt 2)", "-1", "-1", "inf"});
    CHECK(split.out.find("-1") != std::string::npos);
  }

  TEST_CASE("construct and verify") {
    Result c = call({"construct", "--field", "R((x))((y))", "--form", "<1,1,1,1,1,-x,-y,x*y>"});
    CHECK(c.rc == 0);
    Json j = Json::parse(c.out);
    CHECK(j["branch"] == "transfer-needed");
    CHECK(j["verified"] == true);
    Result v = call({"verify", "--form", "<1,1,1,1,1,1,1,1>", "--ext", "Q x Q", "--psi", "<<-1,-1>>", "--psi2",
                     "<<-1,-1>>"});
    CHECK(v.rc == 0);
    CHECK(Json::parse(v.out)["ok"] == true);
    Result w = call({"verify", "--form", "<1,1,1,1,1,1,1,1>", "--ext", "Q(sqrt 2)", "--psi", "<1,1,1,delta>"});
    CHECK(w.rc == 1);
    CHECK(Json::parse(w.out)["ok"] == false);
  }

  TEST_CASE("exit codes") {
    CHECK(call({}).rc == 64);
    CHECK(call({"classify"}).rc == 64);
    CHECK(call({"nonsense"}).rc == 64);
    CHECK(call({"classify", "--form", "<1,2"}).rc == 65);
    CHECK(call({"classify", "--form", "<1,2>"}).rc == 2);
    CHECK(call({"construct", "--form", "<1,1,1>"}).rc == 2);
    CHECK(call({"transfer", "--ext", "Q", "--form", "<1>"}).rc == 65);
    CHECK(call({"verify-lemma", "switch", "--ext", "Q(sqrt 2)", "--form", "<1,1>"}).rc == 0);
    CHECK(call({"verify-lemma", "etale", "--form", "<1,1,1,1>", "--form2", "<1,2,3,6>"}).rc == 0);
    CHECK(call({"brauer", "index", "--field", "R((x))((y))", "--symbols", "(-1,-1)+(x,y)"}).out == "4\n");
    CHECK(call({"--help"}).rc == 0);
  }

  TEST_CASE("batch mode runs one command per line") {
    Result r = call({"batch"}, "hilbert -1 -1 2\n\n# note\ntransfer --ext 'Q(sqrt 2)' --form \"<1>\"\n");
    CHECK(r.rc == 0);
    CHECK(r.out == "-1\n<2, 4>\n");
    Result bad = call({"batch"}, "hilbert -1 -1 2\nclassify --form <1\nhilbert 2 3 3\n");
    CHECK(bad.rc == 65);
    CHECK(bad.out.find("-1\n") == 0);
  }

  TEST_CASE("split_command_line") {
    auto v = qfb::split_command_line("a 'b c' \"d\"  e''");
    REQUIRE(v.size() == 4);
    CHECK(v[1] == "b c");
    CHECK(v[3] == "e");
    CHECK_THROWS(qfb::split_command_line("a 'b"));
  }

  TEST_CASE("selftest output is reproducible") {
    Result a = call({"selftest", "--seed", "5"});
    Result b = call({"selftest", "--seed", "5"});
    CHECK(a.rc == 0);
    CHECK(a.out == b.out);
    Json j = Json::parse(a.out);
    CHECK(j["passed"] == true);
    CHECK(j["suites"].size() >= 8);
  }
}
