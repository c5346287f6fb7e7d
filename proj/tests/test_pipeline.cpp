#include <doctest.h>

#include "qfb/brauer.hpp"
#include "qfb/parse.hpp"
#include "qfb/pipeline.hpp"

using namespace qfb;

namespace {

QuadraticForm form(const FieldPtr& F, const char* text) { return QuadraticForm(F, parse_form_entries(F, text)); }

void round_trip(const QuadraticForm& phi, const PipelineBounds& b = {}) {
  TransferPresentation T = construct_presentation(phi, b);
  PresentationCheck c = verify_presentation(phi, T);
  CAPTURE(phi.str());
  CAPTURE(T.psi.str());
  CHECK(c.ok);
  CHECK(is_isometric(transfer(T.psi), phi));
  CHECK(is_GP2(T.psi));
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("classification branches") {
    FieldPtr Q = Field::rationals();
    CHECK(classify(form(Q, "<1, 1, 1, 1, 1, 1, 1, 1>")).branch == Branch::GP3);
    CHECK(classify(form(Q, "<1, 1, 1, 1, 7, 7, 7, 7>")).branch == Branch::GP3);
    ClassificationReport r = classify(form(Q, "<1, 1, 1, 1, 1, 1, 3, 3>"));
    CHECK(r.branch == Branch::PfisterMultiple);
    CHECK(r.index == 2);
    CHECK(classify(form(Q, "<1, 1, 1, 1>")).branch == Branch::NotApplicable);
    CHECK(classify(form(Q, "<1, 1, 1, 1, 1, 1, 1, 2>")).branch == Branch::NotApplicable);
    FieldPtr T = parse_field("R((x))((y))");
    ClassificationReport t = classify(form(T, "<1, 1, 1, 1, 1, -x, -y, x*y>"));
    CHECK(t.branch == Branch::TransferNeeded);
    CHECK(t.index == 4);
    CHECK(branch_name(Branch::PfisterMultiple) == "pfister-multiple");
  }

  TEST_CASE("GP3 and Pfister-multiple presentations over Q") {
    FieldPtr Q = Field::rationals();
    round_trip(form(Q, "<1, 1, 1, 1, 1, 1, 1, 1>"));
    round_trip(form(Q, "<<-1, -1, -1>>"));
    round_trip(form(Q, "<<2, 3, -5>>").scaled(Q->from_int(7)));
    round_trip(form(Q, "<1, 1, 1, 1, 1, 1, 2, 2>"));
    round_trip(form(Q, "<4, -21, 22, -1176/11, -12, 399, 186, -22344/31>"));
  }

  TEST_CASE("index four over R((x))((y)) needs two GP2 pieces") {
    FieldPtr T = parse_field("R((x))((y))");
    round_trip(form(T, "<1, 1, 1, 1, 1, -x, -y, x*y>"));
    round_trip(form(T, "<-1, -1, -1, -1, x, y, -x, -y>"));
  }

  TEST_CASE("index four through a field extension of Q((t))") {
    FieldPtr F = parse_field("Q((t))");
    PipelineBounds b;
    b.allow_split = false;
    struct Case {
      const char *d, *a, *c;
    };
    for (Case k : {Case{"2", "t*delta", "t*(1 + delta)"}, Case{"5", "2 + delta", "t*delta"}}) {
      EtaleExtension E = EtaleExtension::quadratic(F, parse_elem(F, k.d));
      const FieldPtr& L = E.field();
      QuadraticForm phi = transfer(E, pfister(L, {parse_elem(L, k.a), parse_elem(L, k.c)}));
      ClassificationReport r = classify(phi);
      CHECK(r.index == 4);
      TransferPresentation T = construct_presentation(phi, b);
      CHECK_FALSE(T.psi.ext.is_split());
      CHECK(verify_presentation(phi, T).ok);
    }
  }

  TEST_CASE("verification rejects wrong presentations") {
    FieldPtr Q = Field::rationals();
    QuadraticForm phi = form(Q, "<1, 1, 1, 1, 1, 1, 1, 1>");
    EtaleExtension S = EtaleExtension::split(Q);
    TransferPresentation bad{EtaleForm::of(S, form(Q, "<<-1, -1>>"), form(Q, "<<2, 3>>")), {}, Q->one(), ""};
    PresentationCheck c = verify_presentation(phi, bad);
    CHECK_FALSE(c.ok);
    CHECK_FALSE(c.reasons.empty());
    TransferPresentation not_gp2{EtaleForm::of(S, form(Q, "<1, 1, 1, 2>"), form(Q, "<1, 1, 1, 2>")), {}, Q->one(), ""};
    CHECK_FALSE(verify_presentation(phi, not_gp2).ok);
    TransferPresentation good{EtaleForm::of(S, form(Q, "<<-1, -1>>"), form(Q, "<<-1, -1>>")), {}, Q->one(), ""};
    CHECK(verify_presentation(phi, good).ok);
  }

  TEST_CASE("not applicable inputs") {
    FieldPtr Q = Field::rationals();
    try {
      construct_presentation(form(Q, "<1, 1, 1>"));
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::PreconditionViolated);
    }
  }
}
