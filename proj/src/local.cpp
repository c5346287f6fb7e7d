#include "qfb/local.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "qfb/integer.hpp"

namespace qfb {

namespace {

// a + b*sqrt(m) with m squarefree
struct QQ {
  mpq_class a, b;
};

QQ mul(const QQ& x, const QQ& y, const mpz_class& m) {
  return {x.a * y.a + mpq_class(m) * x.b * y.b, x.a * y.b + x.b * y.a};
}
mpq_class norm(const QQ& x, const mpz_class& m) { return x.a * x.a - mpq_class(m) * x.b * x.b; }
QQ inv(const QQ& x, const mpz_class& m) {
  mpq_class n = norm(x, m);
  return {x.a / n, -x.b / n};
}
QQ qpow(QQ x, long e, const mpz_class& m) {
  if (e < 0) {
    x = inv(x, m);
    e = -e;
  }
  QQ r{1, 0};
  while (e) {
    if (e & 1) r = mul(r, x, m);
    e >>= 1;
    if (e) x = mul(x, x, m);
  }
  return r;
}
bool is_zero(const QQ& x) { return sgn(x.a) == 0 && sgn(x.b) == 0; }

bool is_number_field(const Field& F) {
  return F.kind() == FieldKind::QuadExt && F.flavor() == QuadFlavor::NumberField;
}

void check_field(const Field& F) {
  if (F.kind() != FieldKind::Rationals && !is_number_field(F))
    throw Error(Errc::UnsupportedPlace, "local arithmetic needs Q or Q(sqrt m), got " + F.str());
}

mpz_class field_m(const Field& F) { return F.kind() == FieldKind::Rationals ? mpz_class(1) : F.nf_m(); }

QQ to_qq(const Field& F, const Elem& x_in) {
  Elem x = F.embed(x_in);
  if (F.kind() == FieldKind::Rationals) return {x.rational(), 0};
  return {x.re().rational(), x.im().rational() * F.nf_c()};
}

long mod_ui(const mpz_class& m, unsigned long k) { return static_cast<long>(mpz_fdiv_ui(m.get_mpz_t(), k)); }

mpz_class ipow(const mpz_class& p, unsigned long k) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), k);
  return r;
}

// ---- Q_p ---------------------------------------------------------------------

// An element of Q_p as p^v * u with u a unit known modulo p^3.
struct PAdic {
  long v;
  mpz_class u;
};

PAdic padic_of(const mpq_class& a, const mpz_class& p) {
  long v = valuation(a, p);
  mpq_class u = a;
  if (v > 0) u /= mpq_class(ipow(p, static_cast<unsigned long>(v)));
  if (v < 0) u *= mpq_class(ipow(p, static_cast<unsigned long>(-v)));
  return {v, reduce_mod(u, ipow(p, 3))};
}

int hilbert_qp(const mpz_class& p, const PAdic& x, const PAdic& y) {
  if (p == 2) {
    auto eps = [](const mpz_class& u) { return mod_ui(u, 4) == 3 ? 1 : 0; };
    auto omega = [](const mpz_class& u) {
      long r = mod_ui(u, 8);
      return (r == 3 || r == 5) ? 1 : 0;
    };
    long e = eps(x.u) * eps(y.u) + (x.v & 1) * omega(y.u) + (y.v & 1) * omega(x.u);
    return (e & 1) ? -1 : 1;
  }
  int s = 1;
  if ((x.v & 1) && (y.v & 1) && mod_ui(p, 4) == 3) s = -s;
  if (y.v & 1) s *= legendre(x.u, p);
  if (x.v & 1) s *= legendre(y.u, p);
  return s;
}

bool padic_square(const mpz_class& p, const PAdic& x) {
  if (x.v & 1) return false;
  if (p == 2) return mod_ui(x.u, 8) == 1;
  return legendre(x.u, p) == 1;
}

// ---- Q(sqrt m) at split primes: embed into Q_p -------------------------------------

mpz_class split_root(const mpz_class& m, const mpz_class& p, unsigned k, int index) {
  mpz_class pk = ipow(p, k);
  mpz_class r = sqrt_mod_prime_power(((m % pk) + pk) % pk, p, k);
  bool canonical;
  if (p == 2)
    canonical = mod_ui(r, 4) == 1;
  else {
    mpz_class r0 = r % p;
    canonical = 2 * r0 < p;
  }
  if (canonical != (index == 1)) r = (pk - r) % pk;
  return r;
}

PAdic split_image(const QQ& x, const mpz_class& m, const mpz_class& p, int index) {
  if (sgn(x.b) == 0) return padic_of(x.a, p);
  long s = valuation(x.b, p);
  if (sgn(x.a) != 0) s = std::min(s, valuation(x.a, p));
  mpq_class scale = s >= 0 ? mpq_class(1, ipow(p, static_cast<unsigned long>(s)))
                           : mpq_class(ipow(p, static_cast<unsigned long>(-s)));
  scale.canonicalize();
  QQ y{x.a * scale, x.b * scale};
  long nv = valuation(norm(y, m), p);
  // The image of y is integral with valuation <= nv; keep 8 digits beyond that.
  unsigned k = static_cast<unsigned>(nv + 10);
  mpz_class r = split_root(m, p, k + 1, index);
  mpz_class pk = ipow(p, k);
  mpz_class z = (reduce_mod(y.a, pk) + reduce_mod(y.b, pk) * r) % pk;
  if (z == 0) throw Error(Errc::AssertionFailed, "split embedding lost precision");
  long vz = valuation(z, p);
  mpz_class u = z / ipow(p, static_cast<unsigned long>(vz));
  return {s + vz, u % ipow(p, 3)};
}

// ---- Q(sqrt m) at odd non-split primes: tame symbol ----------------------------------

long odd_valuation(const QQ& x, const mpz_class& m, const mpz_class& p, bool ramified) {
  long nv = valuation(norm(x, m), p);
  return ramified ? nv : nv / 2;
}

QQ odd_uniformizer(const mpz_class& p, bool ramified) { return ramified ? QQ{0, 1} : QQ{mpq_class(p), 0}; }

int odd_unit_character(const QQ& u, const mpz_class& m, const mpz_class& p, bool ramified) {
  if (ramified) return legendre(reduce_mod(u.a, p), p);
  return legendre(reduce_mod(norm(u, m), p), p);
}

int odd_nonsplit_symbol(const QQ& a, const QQ& b, const mpz_class& m, const mpz_class& p, bool ramified) {
  long va = odd_valuation(a, m, p, ramified), vb = odd_valuation(b, m, p, ramified);
  QQ pi = odd_uniformizer(p, ramified);
  QQ ua = mul(a, qpow(pi, -va, m), m), ub = mul(b, qpow(pi, -vb, m), m);
  int minus_one = ramified ? legendre(p - 1, p) : 1;
  int s = 1;
  if ((va & 1) && (vb & 1)) s *= minus_one;
  if (vb & 1) s *= odd_unit_character(ua, m, p, ramified);
  if (va & 1) s *= odd_unit_character(ub, m, p, ramified);
  return s;
}

bool odd_nonsplit_square(const QQ& x, const mpz_class& m, const mpz_class& p, bool ramified) {
  long v = odd_valuation(x, m, p, ramified);
  if (v & 1) return false;
  QQ u = mul(x, qpow(odd_uniformizer(p, ramified), -v, m), m);
  return odd_unit_character(u, m, p, ramified) == 1;
}

// ---- Q(sqrt m) at the non-split place above 2 ----------------------------------------
//
// O_w has integral basis {1, theta}. Arithmetic is done on coordinates modulo
// 2^kBits, which is a ring quotient of O_w. Membership in pi^n O_w reads off the
// coordinates: 2^ceil(n/2) | A and 2^floor(n/2) | B when ramified, 2^n | A, B when inert.
//
// Hensel: for z^2 - a x^2 - b y^2 with v(a), v(b) in {0, 1} and a primitive
// vector, the gradient has valuation <= e + 1, so a primitive solution modulo
// pi^(2e+3) lifts to an exact solution. Likewise a unit is a square once it is
// a square modulo pi^(2e+1), and then y only matters modulo pi^(e+1).
// Note that the class of x^2 modulo pi^n depends only on x modulo pi^(n-e).

constexpr unsigned kBits = 20;
constexpr std::uint64_t kMask = (std::uint64_t(1) << kBits) - 1;

struct Dy {
  DyadicPlaceData d;
  mpz_class m;
  std::uint64_t A = 0, B = 0;
};

struct Coord {
  std::uint64_t A, B;
};

Coord cmul(const DyadicPlaceData& d, Coord x, Coord y) {
  std::uint64_t bb = x.B * y.B;
  std::uint64_t A = x.A * y.A + bb * static_cast<std::uint64_t>(d.s);
  std::uint64_t B = x.A * y.B + x.B * y.A + bb * static_cast<std::uint64_t>(d.t);
  return {A & kMask, B & kMask};
}
Coord csub(Coord x, Coord y) { return {(x.A - y.A) & kMask, (x.B - y.B) & kMask}; }

bool in_ideal(const DyadicPlaceData& d, Coord x, long n) {
  long ka = d.e == 2 ? (n + 1) / 2 : n, kb = d.e == 2 ? n / 2 : n;
  std::uint64_t ma = (std::uint64_t(1) << ka) - 1, mb = (std::uint64_t(1) << kb) - 1;
  return (x.A & ma) == 0 && (x.B & mb) == 0;
}

std::vector<Coord> residues(const DyadicPlaceData& d, long n) {
  long ka = d.e == 2 ? (n + 1) / 2 : n, kb = d.e == 2 ? n / 2 : n;
  std::vector<Coord> out;
  for (std::uint64_t A = 0; A < (std::uint64_t(1) << ka); ++A)
    for (std::uint64_t B = 0; B < (std::uint64_t(1) << kb); ++B) out.push_back({A, B});
  return out;
}

QQ dyadic_uniformizer(const mpz_class& m) {
  long r = mod_ui(m, 8);
  if (r == 5) return {2, 0};
  if (r % 4 == 2) return {0, 1};
  return {1, 1};
}

long dyadic_valuation(const DyadicPlaceData& d, const QQ& x, const mpz_class& m) {
  return valuation(norm(x, m), mpz_class(2)) / d.f;
}

// Scale by a square so that the valuation lands in {0, 1}.
QQ dyadic_reduce(const DyadicPlaceData& d, const QQ& x, const mpz_class& m, long& v) {
  v = dyadic_valuation(d, x, m);
  long k = v >= 0 ? v / 2 : -((-v + 1) / 2);
  v -= 2 * k;
  return mul(x, qpow(dyadic_uniformizer(m), -2 * k, m), m);
}

Coord dyadic_coords(const DyadicPlaceData& d, const QQ& x, const mpz_class& m) {
  mpq_class A, B;
  long r = mod_ui(m, 8);
  if (r == 5) {
    A = x.a - x.b;
    B = 2 * x.b;
  } else if (r % 4 == 2) {
    A = x.a;
    B = x.b;
  } else {
    A = x.a - x.b;
    B = x.b;
  }
  mpz_class mod = ipow(2, kBits);
  (void)d;
  return {reduce_mod(A, mod).get_ui(), reduce_mod(B, mod).get_ui()};
}

int dyadic_symbol(const QQ& a_in, const QQ& b_in, const mpz_class& m) {
  DyadicPlaceData d = dyadic_place_data(m);
  long va, vb;
  QQ a = dyadic_reduce(d, a_in, m, va), b = dyadic_reduce(d, b_in, m, vb);
  Coord ca = dyadic_coords(d, a, m), cb = dyadic_coords(d, b, m);
  const long n = 2 * d.e + 3;
  // Squares modulo pi^n only see their root modulo pi^(n-e).
  const std::vector<Coord> R = residues(d, n - d.e);
  const Coord one{1, 0};
  auto q = [&](Coord z, Coord x, Coord y) {
    Coord r = cmul(d, z, z);
    r = csub(r, cmul(d, ca, cmul(d, x, x)));
    r = csub(r, cmul(d, cb, cmul(d, y, y)));
    return in_ideal(d, r, n);
  };
  for (const auto& x : R)
    for (const auto& y : R)
      if (q(one, x, y) || q(x, one, y) || q(x, y, one)) return 1;
  return -1;
}

bool dyadic_square(const QQ& x_in, const mpz_class& m) {
  DyadicPlaceData d = dyadic_place_data(m);
  long v;
  QQ x = dyadic_reduce(d, x_in, m, v);
  if (v != 0) return false;
  Coord u = dyadic_coords(d, x, m);
  for (const auto& y : residues(d, d.e + 1))
    if (in_ideal(d, csub(cmul(d, y, y), u), 2 * d.e + 1)) return true;
  return false;
}

int real_sign(const QQ& x, const mpz_class& m, int index) {
  int sa = sgn(x.a), sb = sgn(x.b) * (index == 2 ? -1 : 1);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  return x.a * x.a > mpq_class(m) * x.b * x.b ? sa : sb;
}

void collect_primes(const mpq_class& q, std::set<mpz_class>& out) {
  for (const mpz_class* part : {&q.get_num(), &q.get_den()}) {
    if (abs(*part) <= 1) continue;
    for (const auto& p : prime_divisors(*part)) out.insert(p);
  }
}

}  // namespace

DyadicPlaceData dyadic_place_data(const mpz_class& m) {
  long r = mod_ui(m, 8);
  DyadicPlaceData d;
  if (r == 1) throw Error(Errc::UnsupportedPlace, "2 splits in Q(sqrt " + m.get_str() + ")");
  if (r == 5) {
    d.e = 1;
    d.f = 2;
    d.s = mod_ui((m - 1) / 4, 1ul << kBits);
    d.t = 1;
  } else if (r % 4 == 2) {
    d.e = 2;
    d.s = mod_ui(m, 1ul << kBits);
    d.t = 0;
  } else {
    d.e = 2;
    d.s = mod_ui(m - 1, 1ul << kBits);
    d.t = 2;
  }
  return d;
}

std::string Place::str() const {
  switch (kind) {
    case PlaceKind::Real: return "inf";
    case PlaceKind::Prime: return p.get_str();
    case PlaceKind::RealEmbedding: return "inf" + std::to_string(index);
    case PlaceKind::Split: return p.get_str() + ":split" + std::to_string(index);
    case PlaceKind::Inert: return p.get_str() + ":inert";
    case PlaceKind::Ramified: return p.get_str() + ":ramified";
  }
  return "?";
}

bool operator<(const Place& x, const Place& y) {
  if (x.p != y.p) return x.p < y.p;
  return std::tie(x.kind, x.index) < std::tie(y.kind, y.index);
}

std::vector<Place> places_above(const Field& F, const mpz_class& p) {
  check_field(F);
  if (F.kind() == FieldKind::Rationals) return {p == 0 ? Place::real() : Place::prime(p)};
  const mpz_class& m = F.nf_m();
  if (p == 0) {
    if (m < 0) return {};
    return {{PlaceKind::RealEmbedding, 0, 1}, {PlaceKind::RealEmbedding, 0, 2}};
  }
  PlaceKind k;
  if (p == 2) {
    long r = mod_ui(m, 8);
    k = r == 1 ? PlaceKind::Split : r == 5 ? PlaceKind::Inert : PlaceKind::Ramified;
  } else if (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
    k = PlaceKind::Ramified;
  } else {
    k = legendre(m, p) == 1 ? PlaceKind::Split : PlaceKind::Inert;
  }
  if (k == PlaceKind::Split) return {{k, p, 1}, {k, p, 2}};
  return {{k, p, 0}};
}

std::vector<Place> support_places(const Field& F, const std::vector<Elem>& elems) {
  check_field(F);
  std::set<mpz_class> primes{2};
  const mpz_class m = field_m(F);
  collect_primes(mpq_class(m), primes);
  for (const auto& e : elems) {
    QQ x = to_qq(F, e);
    if (is_zero(x)) continue;
    collect_primes(norm(x, m), primes);
    collect_primes(mpq_class(x.a.get_den()), primes);
    collect_primes(mpq_class(x.b.get_den()), primes);
  }
  std::vector<Place> out = places_above(F, 0);
  for (const auto& p : primes)
    for (const auto& w : places_above(F, p)) out.push_back(w);
  return out;
}

int hilbert_symbol_Q(const mpq_class& a, const mpq_class& b, const Place& v) {
  if (sgn(a) == 0 || sgn(b) == 0) throw Error(Errc::ZeroInput, "Hilbert symbol with a zero slot");
  if (v.kind == PlaceKind::Real) return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;
  if (v.kind != PlaceKind::Prime) throw Error(Errc::UnsupportedPlace, "not a place of Q: " + v.str());
  return hilbert_qp(v.p, padic_of(a, v.p), padic_of(b, v.p));
}

int hilbert_symbol(const Field& F, const Elem& a_in, const Elem& b_in, const Place& w) {
  check_field(F);
  QQ a = to_qq(F, a_in), b = to_qq(F, b_in);
  if (is_zero(a) || is_zero(b)) throw Error(Errc::ZeroInput, "Hilbert symbol with a zero slot");
  if (F.kind() == FieldKind::Rationals) return hilbert_symbol_Q(a.a, b.a, w);
  const mpz_class& m = F.nf_m();
  switch (w.kind) {
    case PlaceKind::RealEmbedding:
      return (real_sign(a, m, w.index) < 0 && real_sign(b, m, w.index) < 0) ? -1 : 1;
    case PlaceKind::Split:
      return hilbert_qp(w.p, split_image(a, m, w.p, w.index), split_image(b, m, w.p, w.index));
    case PlaceKind::Inert:
    case PlaceKind::Ramified:
      if (w.p == 2) return dyadic_symbol(a, b, m);
      return odd_nonsplit_symbol(a, b, m, w.p, w.kind == PlaceKind::Ramified);
    default: throw Error(Errc::UnsupportedPlace, w.str() + " is not a place of " + F.str());
  }
}

bool is_local_square(const Field& F, const Elem& x_in, const Place& w) {
  check_field(F);
  QQ x = to_qq(F, x_in);
  if (is_zero(x)) throw Error(Errc::ZeroInput, "local square test of 0");
  if (F.kind() == FieldKind::Rationals) {
    if (w.kind == PlaceKind::Real) return sgn(x.a) > 0;
    return padic_square(w.p, padic_of(x.a, w.p));
  }
  const mpz_class& m = F.nf_m();
  switch (w.kind) {
    case PlaceKind::RealEmbedding: return real_sign(x, m, w.index) > 0;
    case PlaceKind::Split: return padic_square(w.p, split_image(x, m, w.p, w.index));
    case PlaceKind::Inert:
    case PlaceKind::Ramified:
      if (w.p == 2) return dyadic_square(x, m);
      return odd_nonsplit_square(x, m, w.p, w.kind == PlaceKind::Ramified);
    default: throw Error(Errc::UnsupportedPlace, w.str() + " is not a place of " + F.str());
  }
}

std::string LocalInvariantVector::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [w, v] : inv) {
    if (!first) out += ", ";
    first = false;
    out += w.str() + ": 1/2";
  }
  return out + "}";
}

LocalInvariantVector local_invariants(const Field& F, const std::vector<std::pair<Elem, Elem>>& symbols,
                                      const std::vector<Elem>& extra_support) {
  std::vector<Elem> slots = extra_support;
  for (const auto& [a, b] : symbols) {
    slots.push_back(a);
    slots.push_back(b);
  }
  LocalInvariantVector out;
  int parity = 0;
  for (const auto& w : support_places(F, slots)) {
    int s = 1;
    for (const auto& [a, b] : symbols) s *= hilbert_symbol(F, a, b, w);
    if (s < 0) {
      out.inv[w] = 1;
      parity ^= 1;
    }
  }
  if (parity) throw Error(Errc::ReciprocityViolation, "local invariants " + out.str() + " do not sum to 0");
  return out;
}

}  // namespace qfb
