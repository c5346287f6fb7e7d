#pragma once

// Places of Q and of Q(sqrt m), Hilbert symbols, local squares and local
// invariant vectors of quaternion-symbol sums.

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qfb/field.hpp"

namespace qfb {

enum class PlaceKind { Real, Prime, RealEmbedding, Split, Inert, Ramified };

struct Place {
  PlaceKind kind = PlaceKind::Real;
  mpz_class p = 0;  // 0 for archimedean places
  int index = 0;    // 1 or 2 for real embeddings and split primes

  static Place real() { return {}; }
  static Place prime(const mpz_class& p) { return {PlaceKind::Prime, p, 0}; }

  bool archimedean() const { return kind == PlaceKind::Real || kind == PlaceKind::RealEmbedding; }
  std::string str() const;
  friend bool operator<(const Place& x, const Place& y);
  friend bool operator==(const Place& x, const Place& y) {
    return x.kind == y.kind && x.p == y.p && x.index == y.index;
  }
};

/// Places of F (Q or Q(sqrt m)) above the rational prime p (p = 0: archimedean).
std::vector<Place> places_above(const Field& F, const mpz_class& p);

/// Archimedean places plus every place above 2, above primes dividing m, and
/// above primes in the numerators/denominators (or norms) of `elems`.
std::vector<Place> support_places(const Field& F, const std::vector<Elem>& elems);

/// Hilbert symbol over Q_v (v Real or Prime).
int hilbert_symbol_Q(const mpq_class& a, const mpq_class& b, const Place& v);

/// Hilbert symbol over the completion of F at w; F is Q or Q(sqrt m).
int hilbert_symbol(const Field& F, const Elem& a, const Elem& b, const Place& w);

/// Is x a square in the completion F_w.
bool is_local_square(const Field& F, const Elem& x, const Place& w);

/// Place -> invariant in {0, 1/2}, stored as 0/1; only nonzero entries are kept.
struct LocalInvariantVector {
  std::map<Place, int> inv;
  bool trivial() const { return inv.empty(); }
  std::string str() const;
};

/// Local invariants of the sum of the quaternion classes (a_i, b_i).
/// Throws ReciprocityViolation if the invariants do not sum to zero.
LocalInvariantVector local_invariants(const Field& F, const std::vector<std::pair<Elem, Elem>>& symbols,
                                      const std::vector<Elem>& extra_support = {});

/// Residue class of an integral element modulo pi^n at a non-split place above 2,
/// exposed for brute-force cross-checks.
struct DyadicPlaceData {
  long e = 1, f = 1;
  long s = 0, t = 0;  // theta^2 = s + t*theta (s modulo 2^20), integral basis {1, theta}
};
DyadicPlaceData dyadic_place_data(const mpz_class& m);

}  // namespace qfb
