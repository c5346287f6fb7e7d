#include <doctest.h>

#include <random>

#include "qfb/field.hpp"
#include "qfb/integer.hpp"
#include "qfb/parse.hpp"

using namespace qfb;

TEST_SUITE("field") {
  TEST_CASE("rational arithmetic and squares") {
    FieldPtr Q = Field::rationals();
    Elem a = parse_elem(Q, "3/4"), b = parse_elem(Q, "-2");
    CHECK((a * b).str() == "-3/2");
    CHECK((a / b * b) == a);
    CHECK(is_square(parse_elem(Q, "9/49")));
    CHECK_FALSE(is_square(parse_elem(Q, "-1")));
    CHECK_FALSE(is_square(parse_elem(Q, "8")));
    CHECK(same_square_class(parse_elem(Q, "8"), parse_elem(Q, "2")));
    CHECK_THROWS_AS(is_square(Q->zero()), Error);
  }

  TEST_CASE("squarefree parts against a trial-division oracle") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(1, 200000);
    for (int i = 0; i < 300; ++i) {
      long n = d(rng);
      long core = 1, m = n;
      for (long p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
          m /= p;
          ++e;
        }
        if (e % 2) core *= p;
      }
      core *= m;
      CHECK(squarefree_part(mpz_class(n)) == core);
    }
  }

  TEST_CASE("prime field squares match Euler's criterion") {
    for (std::uint64_t p : {3u, 7u, 13u, 31u}) {
      FieldPtr F = Field::prime_field(p);
      for (std::uint64_t r = 1; r < p; ++r) {
        std::uint64_t e = 1;
        for (std::uint64_t k = 0; k < (p - 1) / 2; ++k) e = e * r % p;
        CHECK(is_square(F->make_prime(r)) == (e == 1));
      }
    }
  }

  TEST_CASE("quadratic number field") {
    FieldPtr L = parse_field("Q(sqrt 2)");
    Elem d = L->gen();
    CHECK(d * d == L->from_int(2));
    CHECK(is_square(parse_elem(L, "3 + 2*delta")));  // (1 + delta)^2
    CHECK_FALSE(is_square(parse_elem(L, "1 + delta")));
    CHECK(is_square(L->from_int(2)));
    CHECK_FALSE(is_square(L->from_int(3)));
    auto r = try_sqrt(parse_elem(L, "3 + 2*delta"));
    REQUIRE(r);
    CHECK(*r * *r == parse_elem(L, "3 + 2*delta"));
    CHECK(make_quad_ext(Field::rationals(), Field::rationals()->from_int(9)).split);
  }

  TEST_CASE("Laurent valuation, residue and squares") {
    FieldPtr T = parse_field("Q((t))");
    Elem x = parse_elem(T, "t^3*(2 + t)/(1 - t)");
    CHECK(T->valuation(x) == 3);
    CHECK(T->residue(T->unit_part(x)) == Field::rationals()->from_int(2));
    CHECK(is_square(parse_elem(T, "1 + t")));  // residue 1, Hensel
    CHECK_FALSE(is_square(parse_elem(T, "t")));
    CHECK_FALSE(is_square(parse_elem(T, "2*t^2")));
    CHECK(is_square(parse_elem(T, "4*t^2*(1 + t)")));
  }

  TEST_CASE("R-grounded iterated Laurent square classes") {
    FieldPtr T = parse_field("R((x))((y))");
    // F*/F*^2 = {+-1} x <x> x <y>: eight classes.
    auto atoms = square_class_atoms(T, {parse_elem(T, "x"), parse_elem(T, "y")});
    auto all = square_class_products(T, atoms);
    CHECK(all.size() == 8);
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j) CHECK_FALSE(same_square_class(all[i], all[j]));
    CHECK(is_square(parse_elem(T, "2 + x")));
    CHECK_FALSE(is_square(parse_elem(T, "-2 + x")));
  }

  TEST_CASE("valued quadratic extensions") {
    FieldPtr L = parse_field("Q((t))(sqrt t)");
    CHECK(L->is_valued());
    CHECK(L->ramified());
    CHECK(L->valuation(L->gen()) == 1);
    FieldPtr U = parse_field("Q((t))(sqrt 2)");
    CHECK_FALSE(U->ramified());
    CHECK(is_square(U->from_int(2)));
  }

  TEST_CASE("descriptor parse errors carry positions") {
    CHECK_THROWS_AS(parse_field("Q(sqrt 4)"), ParseError);
    CHECK_THROWS_AS(parse_field("Z"), ParseError);
    try {
      parse_elem(Field::rationals(), "1 + + ");
      FAIL("no throw");
    } catch (const ParseError& e) {
      CHECK(e.position() > 0);
    }
  }
}
