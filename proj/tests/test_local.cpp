#include <doctest.h>

#include <random>

#include "qfb/local.hpp"
#include "qfb/parse.hpp"

using namespace qfb;

namespace {

// z^2 = a x^2 + b y^2 with (x, y, z) primitive mod m. For squarefree a, b a
// primitive solution has gradient valuation <= 2 at 2 and <= 1 at odd p, so
// Hensel lifting makes m = 32 (p = 2) and m = p^3 (p odd) decisive.
int brute_hilbert(long a, long b, long p) {
  long m = p == 2 ? 32 : p * p * p;
  auto md = [m](long v) { return ((v % m) + m) % m; };
  for (long x = 0; x < m; ++x)
    for (long y = 0; y < m; ++y)
      for (long z = 0; z < m; ++z) {
        if (x % p == 0 && y % p == 0 && z % p == 0) continue;
        if (md(a * x * x + b * y * y - z * z) == 0) return 1;
      }
  return -1;
}

long squarefree(long n) {
  long s = n < 0 ? -1 : 1, m = n < 0 ? -n : n, core = 1;
  for (long p = 2; p * p <= m; ++p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e % 2) core *= p;
  }
  return s * core * m;
}

}  // namespace

TEST_SUITE("local") {
  TEST_CASE("Hilbert symbols over Q against brute force at 2, 3, 5") {
    FieldPtr Q = Field::rationals();
    const long vals[] = {-30, -15, -10, -7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 15, 30};
    for (long p : {2L, 3L, 5L}) {
      Place v = Place::prime(p);
      for (long a : vals)
        for (long b : vals) {
          if (p == 5 && (std::abs(a) > 7 || std::abs(b) > 7)) continue;  // keep p^3 brute force small
          CAPTURE(a);
          CAPTURE(b);
          CAPTURE(p);
          CHECK(hilbert_symbol_Q(a, b, v) == brute_hilbert(a, b, p));
        }
    }
  }

  TEST_CASE("Hilbert symbol examples") {
    CHECK(hilbert_symbol_Q(-1, -1, Place::prime(2)) == -1);
    CHECK(hilbert_symbol_Q(-1, -1, Place::real()) == -1);
    CHECK(hilbert_symbol_Q(-1, -1, Place::prime(3)) == 1);
    CHECK(hilbert_symbol_Q(2, 3, Place::prime(3)) == -1);
    CHECK(hilbert_symbol_Q(mpq_class(1, 3), 5, Place::prime(5)) == -1);
  }

  TEST_CASE("product formula over Q") {
    FieldPtr Q = Field::rationals();
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> d(-10000, 10000);
    for (int i = 0; i < 200; ++i) {
      long a = 0, b = 0;
      while (a == 0) a = d(rng);
      while (b == 0) b = d(rng);
      Elem x = Q->from_int(a), y = Q->from_int(b);
      int prod = 1;
      for (const auto& v : support_places(*Q, {x, y})) prod *= hilbert_symbol(*Q, x, y, v);
      CHECK(prod == 1);
    }
  }

  TEST_CASE("symbol is bimultiplicative and (a, -a) = 1") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-60, 60);
    for (int i = 0; i < 200; ++i) {
      long a = 0, b = 0, c = 0;
      while (a == 0) a = d(rng);
      while (b == 0) b = d(rng);
      while (c == 0) c = d(rng);
      for (long p : {0L, 2L, 3L, 5L, 7L}) {
        Place v = p ? Place::prime(p) : Place::real();
        CHECK(hilbert_symbol_Q(a, b * c, v) == hilbert_symbol_Q(a, b, v) * hilbert_symbol_Q(a, c, v));
        CHECK(hilbert_symbol_Q(a, -a, v) == 1);
        CHECK(hilbert_symbol_Q(a, b, v) == hilbert_symbol_Q(squarefree(a), squarefree(b), v));
      }
    }
  }

  TEST_CASE("places of quadratic fields") {
    FieldPtr L = parse_field("Q(sqrt 2)");
    CHECK(places_above(*L, 0).size() == 2);  // two real embeddings
    CHECK(places_above(*L, 7).size() == 2);  // 2 is a square mod 7
    CHECK(places_above(*L, 3).size() == 1);  // inert
    CHECK(places_above(*L, 2).size() == 1);  // ramified
    FieldPtr K = parse_field("Q(sqrt -1)");
    CHECK(places_above(*K, 0).empty());
    CHECK(places_above(*K, 5).size() == 2);
  }

  TEST_CASE("product formula over quadratic fields") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> d(-20, 20);
    for (const char* name : {"Q(sqrt 2)", "Q(sqrt -1)", "Q(sqrt 5)", "Q(sqrt -7)"}) {
      FieldPtr L = parse_field(name);
      for (int i = 0; i < 25; ++i) {
        Elem a, b;
        do a = L->make_quad(L->base()->from_int(d(rng)), L->base()->from_int(d(rng))); while (a.is_zero());
        do b = L->make_quad(L->base()->from_int(d(rng)), L->base()->from_int(d(rng))); while (b.is_zero());
        int prod = 1;
        for (const auto& w : support_places(*L, {a, b})) prod *= hilbert_symbol(*L, a, b, w);
        CAPTURE(a.str());
        CAPTURE(b.str());
        CHECK(prod == 1);
      }
    }
  }

  TEST_CASE("local squares") {
    FieldPtr Q = Field::rationals();
    CHECK(is_local_square(*Q, Q->from_int(-7), Place::prime(2)));  // -7 = 1 mod 8
    CHECK_FALSE(is_local_square(*Q, Q->from_int(3), Place::prime(2)));
    CHECK(is_local_square(*Q, Q->from_int(2), Place::prime(7)));
    CHECK_FALSE(is_local_square(*Q, Q->from_int(-1), Place::real()));
  }
}
