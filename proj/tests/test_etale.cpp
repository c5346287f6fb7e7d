#include <doctest.h>

#include <random>

#include "qfb/etale.hpp"
#include "qfb/parse.hpp"

using namespace qfb;

namespace {

// Gram matrix of (u, v) -> tr(a u v) on the basis {1, delta}, diagonalised by hand.
QuadraticForm transfer_oracle(const FieldPtr& F, const Elem& d, const std::vector<std::pair<long, long>>& entries) {
  std::vector<Elem> out;
  for (auto [x, y] : entries) {
    Elem a = F->from_int(x), b = F->from_int(y);
    Elem g00 = F->from_int(2) * a, g01 = F->from_int(2) * b * d, g11 = F->from_int(2) * a * d;
    if (!g00.is_zero()) {
      out.push_back(g00);
      out.push_back((g00 * g11 - g01 * g01) / g00);
    } else {
      // g00 = 0: the plane is hyperbolic
      out.push_back(F->one());
      out.push_back(F->from_int(-1));
    }
  }
  return QuadraticForm(F, out);
}

}  // namespace

TEST_SUITE("etale") {
  TEST_CASE("transfer of <1> from Q(sqrt 2)") {
    FieldPtr L = parse_field("Q(sqrt 2)");
    QuadraticForm t = transfer(EtaleExtension::of_field(L), QuadraticForm(L, {L->one()}));
    CHECK(t.str() == "<2, 4>");
  }

  TEST_CASE("transfer agrees with the trace-form Gram oracle") {
    FieldPtr Q = Field::rationals();
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<long> d(-9, 9);
    for (long m : {2L, -1L, 5L, -3L}) {
      EtaleExtension E = EtaleExtension::quadratic(Q, Q->from_int(m));
      const FieldPtr& L = E.field();
      for (int i = 0; i < 20; ++i) {
        std::vector<std::pair<long, long>> ents;
        std::vector<Elem> psi;
        for (int k = 0; k < 3; ++k) {
          long x = 0, y = 0;
          while (x == 0 && y == 0) {
            x = d(rng);
            y = d(rng);
          }
          ents.emplace_back(x, y);
          psi.push_back(L->make_quad(Q->from_int(x), Q->from_int(y)));
        }
        QuadraticForm t = transfer(E, QuadraticForm(L, psi));
        CHECK(t.dim() == 6);
        CHECK(is_isometric(t, transfer_oracle(Q, Q->from_int(m), ents)));
      }
    }
  }

  TEST_CASE("transfer is additive and kills hyperbolic planes") {
    FieldPtr Q = Field::rationals();
    EtaleExtension E = EtaleExtension::quadratic(Q, Q->from_int(3));
    const FieldPtr& L = E.field();
    QuadraticForm a(L, parse_form_entries(L, "<1 + delta, 2>"));
    QuadraticForm b(L, parse_form_entries(L, "<delta>"));
    CHECK(is_isometric(transfer(E, a + b), transfer(E, a) + transfer(E, b)));
    CHECK(is_hyperbolic(transfer(E, QuadraticForm(L, parse_form_entries(L, "<1 + delta, -1 - delta>")))));
  }

  TEST_CASE("transfer of a base scalar is c<2, 2d>") {
    FieldPtr Q = Field::rationals();
    for (long m : {2L, -1L, 7L}) {
      EtaleExtension E = EtaleExtension::quadratic(Q, Q->from_int(m));
      for (long c : {1L, -3L, 5L}) {
        QuadraticForm t = transfer(E, QuadraticForm(E.field(), {E.field()->from_int(c)}));
        CHECK(is_isometric(t, QuadraticForm(Q, {Q->from_int(2 * c), Q->from_int(2 * c * m)})));
      }
    }
  }

  TEST_CASE("split algebra") {
    FieldPtr Q = Field::rationals();
    EtaleExtension E = EtaleExtension::quadratic(Q, Q->from_int(4));
    REQUIRE(E.is_split());
    QuadraticForm a(Q, parse_form_entries(Q, "<1, 2>")), b(Q, parse_form_entries(Q, "<3, 5>"));
    EtaleForm psi = EtaleForm::of(E, a, b);
    CHECK(transfer(psi).str() == "<1, 2, 3, 5>");
    CHECK(E.str() == "Q x Q");
    CHECK(is_GP2(EtaleForm::of(E, QuadraticForm(Q, parse_form_entries(Q, "<<2, 3>>")),
                              QuadraticForm(Q, parse_form_entries(Q, "<<-1, -1>>")))));
    CHECK_THROWS_AS(EtaleForm::of(E, a), Error);
  }

  TEST_CASE("norm, trace and conjugation") {
    FieldPtr Q = Field::rationals();
    EtaleExtension E = EtaleExtension::quadratic(Q, Q->from_int(5));
    EtaleElement z{parse_elem(E.field(), "3 + 2*delta"), Elem()};
    CHECK(norm(E, z) == Q->from_int(9 - 20));
    CHECK(trace(E, z) == Q->from_int(6));
    CHECK(norm(E, conj(E, z)) == norm(E, z));
  }

  TEST_CASE("scaling by the base field") {
    FieldPtr Q = Field::rationals();
    EtaleExtension E = EtaleExtension::quadratic(Q, Q->from_int(2));
    EtaleForm psi = EtaleForm::of(E, QuadraticForm(E.field(), parse_form_entries(E.field(), "<1, delta>")));
    EtaleForm s = scale_by_base(psi, Q->from_int(3));
    CHECK(is_isometric(transfer(s), transfer(psi).scaled(Q->from_int(3))));
  }

  TEST_CASE("transfer over a valued tower") {
    FieldPtr T = parse_field("R((x))((y))");
    EtaleExtension E = EtaleExtension::quadratic(T, parse_elem(T, "-1"));
    // <2, -2> is hyperbolic
    CHECK(is_hyperbolic(transfer(E, QuadraticForm(E.field(), {E.field()->one()}))));
    EtaleExtension X = EtaleExtension::quadratic(T, parse_elem(T, "x"));
    QuadraticForm t = transfer(X, QuadraticForm(X.field(), {X.field()->one()}));
    CHECK(is_isometric(t, QuadraticForm(T, parse_form_entries(T, "<1, x>"))));
    CHECK_FALSE(is_isotropic(t));
  }
}
