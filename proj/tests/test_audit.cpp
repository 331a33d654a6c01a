#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "abaudit/abmetric.hpp"
#include "abaudit/audit.hpp"
#include "abaudit/errors.hpp"

using namespace abaudit;

namespace {

AuditOptions options() {
  AuditOptions opt;
  opt.fixtures_dir = FIXTURE_DIR;
  return opt;
}

// Deliberately expensive to build, so share one report across the cases
// that only read it.
const AuditReport& shared_report() {
  static const AuditReport rep = run_all(options());
  return rep;
}

std::string write_temp(const std::string& name, const std::string& body) {
  std::string path = std::string("audit_tmp_") + name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("fixture loader reads the small key-value grammar") {
  AtomTable at;

  std::string p = write_temp("scalar.txt",
                             "# remark\n"
                             "kind = scalar\n"
                             "note = hello\n"
                             "expr = alpha^2\n");
  Fixture f = load_fixture(at, p);
  CHECK(f.kind == "scalar");
  CHECK(f.note == "hello");
  CHECK(f.expr == at.a() * at.a());

  p = write_temp("cont.txt",
                 "kind = vector\n"
                 "expr = alpha*yi\n"
                 "       + beta*bi\n");
  f = load_fixture(at, p);
  CHECK(f.expr == at.a() * at.s(at.yi) + at.s(at.beta) * at.s(at.bi));

  p = write_temp("pair.txt",
                 "kind = pair\n"
                 "pair bi yi = alpha\n"
                 "pair sigmai yi = -beta\n");
  f = load_fixture(at, p);
  REQUIRE(f.pairs.size() == 2);
  CHECK(std::get<0>(f.pairs[0]) == at.bi);
  CHECK(std::get<1>(f.pairs[0]) == at.yi);
  CHECK(std::get<2>(f.pairs[1]) == -at.s(at.beta));
}

TEST_CASE("fixture loader rejects malformed files") {
  AtomTable at;
  CHECK_THROWS_AS(load_fixture(at, "no_such_file.txt"), ValidationError);
  CHECK_THROWS_AS(
      load_fixture(at, write_temp("nokind.txt", "expr = alpha\n")),
      ValidationError);
  CHECK_THROWS_AS(
      load_fixture(at, write_temp("badkind.txt",
                                  "kind = tensor\nexpr = alpha\n")),
      ValidationError);
  CHECK_THROWS_AS(
      load_fixture(at, write_temp("noexpr.txt", "kind = scalar\n")),
      ValidationError);
  CHECK_THROWS_AS(
      load_fixture(at, write_temp("badkey.txt",
                                  "kind = scalar\nexprr = alpha\n")),
      ValidationError);
  CHECK_THROWS_AS(
      load_fixture(at, write_temp("badpair.txt",
                                  "kind = pair\npair bq yi = alpha\n")),
      ValidationError);
  CHECK_THROWS_AS(
      load_fixture(at, write_temp("nopairs.txt", "kind = pair\n")),
      ValidationError);
}

TEST_CASE("every audited formula lands on its expected verdict") {
  const AuditReport& rep = shared_report();
  auto want = expected_statuses();
  REQUIRE(rep.records.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CAPTURE(rep.records[i].id);
    CAPTURE(rep.records[i].detail);
    CHECK(rep.records[i].id == want[i].first);
    CHECK(rep.records[i].status == want[i].second);
  }
  CHECK(rep.count(CheckStatus::Fail) == 0);
  CHECK_FALSE(rep.clean());
}

TEST_CASE("finding details name the defect and the repair") {
  const AuditReport& rep = shared_report();
  auto detail = [&](const std::string& id) -> const std::string& {
    for (const CheckRecord& r : rep.records)
      if (r.id == id) return r.detail;
    static const std::string none;
    return none;
  };
  CHECK(detail("conformal.si0").find("corrected/si0_bar.txt") !=
        std::string::npos);
  CHECK(detail("conformal.cij").find("one half") != std::string::npos);
  CHECK(detail("gap.p3").find("negative") != std::string::npos);
  CHECK(detail("gap.p3").find("printed versus") != std::string::npos);
  CHECK(detail("gap.lead").find("printed versus") != std::string::npos);
  CHECK(detail("gap.p1").find("repeats the free index") != std::string::npos);
  CHECK(detail("chart.si0").find("evaluates to") != std::string::npos);
  CHECK(detail("gap.square.p3").find("gap.p3") != std::string::npos);
}

TEST_CASE("renderers agree with the report and stay deterministic") {
  const AuditReport& rep = shared_report();

  std::string text = render_text(rep, false);
  CHECK(text.find("gap.p3") != std::string::npos);
  CHECK(text.find("finding") != std::string::npos);
  CHECK(text.find(" ms") == std::string::npos);
  std::string timed = render_text(rep, true);
  CHECK(timed.find(" ms)") != std::string::npos);

  std::string js = render_json(rep, false);
  CHECK(js.find("\"schema_version\": 1") != std::string::npos);
  CHECK(js.find("elapsed_ms") == std::string::npos);
  CHECK(render_json(rep, true).find("elapsed_ms") != std::string::npos);

  AuditReport again = run_all(options());
  CHECK(render_json(rep, false) == render_json(again, false));
  CHECK(render_text(rep, false) == render_text(again, false));
}

TEST_CASE("selftest passes on the shipped fixture tree") {
  std::ostringstream log;
  CHECK(selftest(options(), log) == 0);
  CHECK(log.str().find("selftest: ok") != std::string::npos);
  CHECK(log.str().find("corrupted fixture is correctly distinguished") !=
        std::string::npos);
}

TEST_CASE("a corrupted fixture flips its record away from pass") {
  AuditOptions opt = options();
  AtomTable at;
  LPieces fam = family_pieces(at);
  Fixture flipped = load_fixture(
      at, opt.fixtures_dir + "/selftest/partial_la_flipped.txt");
  CHECK_FALSE(flipped.expr == fam.La);

  Fixture good = load_fixture(at, opt.fixtures_dir + "/printed/partial_la.txt");
  CHECK(good.expr == fam.La);
}
