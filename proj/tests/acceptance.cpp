// Acceptance run: one PASS/FAIL line per criterion. All comparisons are exact
// (zero tolerance); the only pinned limits are the wall-clock budgets below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>

#include "qfb/brauer.hpp"
#include "qfb/cli.hpp"
#include "qfb/clifford.hpp"
#include "qfb/etale.hpp"
#include "qfb/local.hpp"
#include "qfb/parse.hpp"
#include "qfb/pipeline.hpp"

using namespace qfb;

namespace {

using Clock = std::chrono::steady_clock;
using Rng = std::mt19937_64;

struct Outcome {
  bool ok = true;
  std::string detail;
  std::string first_failure;
  void fail(const std::string& what) {
    if (ok) first_failure = what;
    ok = false;
  }
};

int failures = 0;

void report(int n, double budget_s, const std::function<Outcome()>& body) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.first_failure = std::string("exception: ") + e.what();
  }
  double s = std::chrono::duration<double>(Clock::now() - t0).count();
  bool in_time = s <= budget_s;
  bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(2);
  line << "criterion " << n << ": " << (pass ? "PASS" : "FAIL") << "  " << o.detail << " [" << s << " s, budget "
       << budget_s << " s]";
  if (!in_time) line << " over budget";
  if (!o.first_failure.empty()) line << " first failure: " << o.first_failure;
  std::cout << line.str() << std::endl;
}

long nonzero(Rng& rng, long h) {
  std::uniform_int_distribution<long> d(-h, h);
  long v = 0;
  while (v == 0) v = d(rng);
  return v;
}

mpq_class rand_rational(Rng& rng, long h) {
  std::uniform_int_distribution<long> den(1, h);
  mpq_class q(nonzero(rng, h), den(rng));
  q.canonicalize();
  return q;
}

std::vector<long> primes_of(mpz_class n) {
  n = abs(n);
  std::vector<long> ps;
  for (long p = 2; n > 1 && p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n.get_si());
  return ps;
}

// ---- 1 ----------------------------------------------------------------------

Outcome hilbert_product() {
  Outcome o;
  Rng rng(1001);
  int n = 500;
  for (int i = 0; i < n; ++i) {
    mpq_class a = rand_rational(rng, 10000), b = rand_rational(rng, 10000);
    std::set<long> ps = {2};
    for (const mpz_class& z : {a.get_num(), a.get_den(), b.get_num(), b.get_den()})
      for (long p : primes_of(z)) ps.insert(p);
    int prod = hilbert_symbol_Q(a, b, Place::real());
    for (long p : ps) prod *= hilbert_symbol_Q(a, b, Place::prime(p));
    if (prod != 1) o.fail("(" + a.get_str() + ", " + b.get_str() + ")");
  }
  o.detail = "Hilbert product formula on " + std::to_string(n) + " random pairs";
  return o;
}

// ---- 2 ----------------------------------------------------------------------

// Nonzero integer vector with |x_i| <= h and sum a_i x_i^2 = 0, by meeting in
// the middle over the two halves of the coordinates.
bool brute_isotropic(const std::vector<long>& a, long h) {
  const std::size_t n = a.size();
  if (n == 1) return false;
  std::size_t k = n / 2;
  // value -> reached by a nonzero half-vector?
  std::unordered_map<long, bool> left;
  left.reserve(n == 4 ? 300000 : 1024);
  std::function<void(std::size_t, long, bool)> gen_left = [&](std::size_t i, long s, bool nz) {
    if (i == k) {
      auto [it, fresh] = left.emplace(s, nz);
      if (!fresh) it->second = it->second || nz;
      return;
    }
    for (long x = 0; x <= h; ++x) gen_left(i + 1, s + a[i] * x * x, nz || x);
  };
  gen_left(0, 0, false);
  bool hit = false;
  std::function<void(std::size_t, long, bool)> gen_right = [&](std::size_t i, long s, bool nz) {
    if (hit) return;
    if (i == n) {
      auto it = left.find(-s);
      if (it != left.end() && (nz || it->second)) hit = true;
      return;
    }
    for (long x = 0; x <= h && !hit; ++x) gen_right(i + 1, s + a[i] * x * x, nz || x);
  };
  gen_right(k, 0, false);
  return hit;
}

Outcome isotropy_vs_brute() {
  Outcome o;
  Rng rng(2002);
  FieldPtr Q = Field::rationals();
  std::uniform_int_distribution<int> dim(1, 4);
  int n = 300, witnessed = 0, declared = 0;
  for (int i = 0; i < n; ++i) {
    int m = dim(rng);
    std::vector<Elem> e;
    std::vector<mpq_class> qs;
    mpz_class den = 1;
    for (int k = 0; k < m; ++k) {
      qs.push_back(rand_rational(rng, 30));
      e.push_back(Q->from_rational(qs.back()));
      den *= qs.back().get_den();
    }
    // Integer coefficients with the same isotropy: multiply by the square of the common denominator.
    std::vector<long> a;
    for (const auto& q : qs) {
      mpq_class v = q * den * den;
      a.push_back(v.get_num().get_si());
    }
    QuadraticForm f(Q, e);
    bool lib = is_isotropic(f);
    bool brute = brute_isotropic(a, 500);
    declared += lib;
    witnessed += brute;
    if (brute && !lib) o.fail(f.str() + " has a witness but was declared anisotropic");
  }
  o.detail = std::to_string(n) + " forms, " + std::to_string(declared) + " declared isotropic, " +
             std::to_string(witnessed) + " with a brute-force witness, no witness for any anisotropic form";
  return o;
}

// ---- 3 ----------------------------------------------------------------------

Outcome clifford_table() {
  Outcome o;
  FieldPtr Q = Field::rationals();
  const long pool[] = {-5, -3, -2, -1, 1, 2, 3, 5};
  std::vector<std::vector<long>> forms;
  std::function<void(std::vector<long>&, std::size_t, std::size_t)> multisets = [&](std::vector<long>& cur,
                                                                                     std::size_t from, std::size_t n) {
    if (forms.size() >= 500) return;
    if (cur.size() == n) {
      long prod = 1;
      for (long x : cur) prod *= x;
      // signed discriminant (-1)^(n(n-1)/2) prod must be a square
      if ((n * (n - 1) / 2) % 2) prod = -prod;
      long r = 0;
      while (r * r < prod) ++r;
      if (prod > 0 && r * r == prod) forms.push_back(cur);
      return;
    }
    for (std::size_t i = from; i < 8; ++i) {
      cur.push_back(pool[i]);
      multisets(cur, i, n);
      cur.pop_back();
    }
  };
  std::size_t per_dim[3] = {0, 0, 0};
  for (std::size_t n : {2u, 4u, 6u}) {
    std::size_t before = forms.size();
    std::vector<long> cur;
    multisets(cur, 0, n);
    per_dim[n / 2 - 1] = forms.size() - before;
  }
  for (const auto& f : forms) {
    std::vector<Elem> e;
    for (long x : f) e.push_back(Q->from_int(x));
    QuadraticForm q(Q, e);
    if (!same_class(clifford_invariant(q), explicit_clifford_class(q))) o.fail(q.str());
  }
  o.detail = "Clifford invariant vs explicit C+ on " + std::to_string(forms.size()) + " forms (dims 2/4/6: " +
             std::to_string(per_dim[0]) + "/" + std::to_string(per_dim[1]) + "/" + std::to_string(per_dim[2]) + ")";
  return o;
}

// ---- 4 ----------------------------------------------------------------------

QuadraticForm trivial_disc4(Rng& rng, const FieldPtr& F, long h) {
  long a = nonzero(rng, h), b = nonzero(rng, h), c = nonzero(rng, h);
  return QuadraticForm(F, {F->from_int(a), F->from_int(b), F->from_int(c), F->from_int(a * b * c)});
}

Outcome lemma_etale() {
  Outcome o;
  Rng rng(4004);
  FieldPtr Q = Field::rationals();
  std::uniform_int_distribution<long> coord(-3, 3);
  int n = 20;
  std::size_t checks = 0;
  for (int i = 0; i < n; ++i) {
    QuadraticForm p = trivial_disc4(rng, Q, 9), p2 = trivial_disc4(rng, Q, 9);
    auto vec = [&](const QuadraticForm& q) {
      for (;;) {
        std::vector<Elem> v;
        for (int k = 0; k < 4; ++k) v.push_back(Q->from_int(coord(rng)));
        if (!q.evaluate(v).is_zero()) return v;
      }
    };
    auto v = vec(p), v2 = vec(p2);
    VerificationReport r = verify_lemma_etale(p, p2, v, v2);
    checks += r.checks.size();
    if (!r.passed()) o.fail(r.subject);
  }
  o.detail = std::to_string(n) + " instances of dims 4+4, " + std::to_string(checks) + " checks";
  return o;
}

// ---- 5 ----------------------------------------------------------------------

Outcome switch_fixed_points() {
  Outcome o;
  const char* psis[] = {"<1,1>",   "<1,delta>",    "(1+delta)*<1,delta>", "<delta,-delta>",
                        "<1>",     "<1,1,1>",      "<1,1,1,1>"};
  int n = 0, with_eps = 0;
  for (const char* ext : {"Q(sqrt 2)", "Q(sqrt -1)"}) {
    FieldPtr L = parse_field(ext);
    for (const char* f : psis) {
      QuadraticForm psi(L, parse_form_entries(L, f));
      VerificationReport r = verify_switch_fixed_points(psi);
      ++n;
      bool dim_ok = false, rel_ok = false, eps = false, dy = false;
      for (const auto& c : r.checks) {
        dim_ok = dim_ok || (c.name.rfind("fixed algebra has F-dimension", 0) == 0 && c.ok);
        rel_ok = rel_ok || (c.name.rfind("fixed vectors satisfy the Clifford relations", 0) == 0 && c.ok);
        eps = eps || (c.name == "s(eps) = eps" && c.ok);
        dy = dy || (c.name == "s(delta y) = delta y" && c.ok);
      }
      // eps exists only for even dim psi with trivial signed discriminant over L
      bool eps_defined = psi.dim() % 2 == 0 && has_trivial_discriminant(psi);
      if (eps_defined) ++with_eps;
      if (!r.passed() || !dim_ok || !rel_ok || (eps_defined && !(eps && dy)))
        o.fail(std::string(ext) + " " + f);
    }
  }
  o.detail = std::to_string(n) + " (L, psi) pairs; fixed dim, Clifford relations on all; s(eps), s(delta y) on the " +
             std::to_string(with_eps) + " with trivial discriminant";
  return o;
}

// ---- 6 ----------------------------------------------------------------------

int local_product(const BrauerClass2& c, const mpz_class& p) {
  int s = 1;
  for (const auto& w : places_above(*c.field, p))
    for (const auto& [x, y] : c.symbols) s *= hilbert_symbol(*c.field, x, y, w);
  return s;
}

// cor: Br(L) -> Br(Q) adds local invariants over the places above each p.
bool corestriction_matches(const BrauerClass2& down, const BrauerClass2& up) {
  std::vector<Elem> eu, ed;
  for (const auto& [x, y] : up.symbols) eu.insert(eu.end(), {x, y});
  for (const auto& [x, y] : down.symbols) ed.insert(ed.end(), {x, y});
  std::set<mpz_class> ps = {0};
  for (const auto& w : support_places(*up.field, eu)) ps.insert(w.p);
  for (const auto& w : support_places(*down.field, ed)) ps.insert(w.p);
  for (const auto& p : ps)
    if (local_product(down, p) != local_product(up, p)) return false;
  return true;
}

Outcome arason() {
  Outcome o;
  Rng rng(6006);
  FieldPtr Q = Field::rationals();
  const long ms[] = {2, -2, -1, 5};
  std::uniform_int_distribution<long> d(-6, 6);
  int n = 100, nontrivial = 0;
  for (int i = 0; i < n; ++i) {
    EtaleExtension E = EtaleExtension::quadratic(Q, Q->from_int(ms[i % 4]));
    const FieldPtr& L = E.field();
    auto r = [&] {
      Elem x;
      do x = L->make_quad(Q->from_int(d(rng)), Q->from_int(d(rng))); while (x.is_zero());
      return x;
    };
    Elem a = r(), b = r(), c = r();
    QuadraticForm psi(L, {a, b, c, a * b * c});
    BrauerClass2 lhs = clifford_invariant(transfer(E, psi));
    BrauerClass2 up = clifford_invariant(psi);
    nontrivial += !is_trivial(lhs);
    if (!corestriction_matches(lhs, up)) o.fail(E.str() + " " + psi.str());
  }
  o.detail = std::to_string(n) + " dim-4 psi with trivial discriminant, " + std::to_string(nontrivial) +
             " with nontrivial invariant downstairs";
  return o;
}

// ---- 7 / 8 ------------------------------------------------------------------

struct Instance {
  std::string kind;
  EtaleForm psi;
  bool tower = false;
};

Elem rand_q(Rng& rng, const FieldPtr& K, long h) {
  if (K->kind() == FieldKind::QuadExt && K->flavor() == QuadFlavor::NumberField) {
    std::uniform_int_distribution<long> d(-h, h);
    Elem x;
    do x = K->make_quad(K->base()->from_int(d(rng)), K->base()->from_int(d(rng))); while (x.is_zero());
    return x;
  }
  return K->from_int(nonzero(rng, h));
}

// Square-class representatives of R((x))((y)) and small units, as text.
Elem rand_tower(Rng& rng, const FieldPtr& K) {
  static const char* pool[] = {"1",   "-1",  "x",     "-x",  "y",     "-y",      "x*y",    "-x*y",
                               "2+x", "1-y", "x+x*y", "-3*y", "delta", "1+delta", "x*delta", "y-delta"};
  std::uniform_int_distribution<int> pick(0, K->kind() == FieldKind::QuadExt ? 15 : 11);
  return parse_elem(K, pool[pick(rng)]);
}

std::vector<Instance> forward_instances() {
  Rng rng(7007);
  FieldPtr Q = Field::rationals();
  FieldPtr T = parse_field("R((x))((y))");
  std::vector<Instance> out;
  auto gp2 = [&](const FieldPtr& K, bool tower) {
    auto r = [&] { return tower ? rand_tower(rng, K) : rand_q(rng, K, 5); };
    return pfister(K, {r(), r()}).scaled(r());
  };
  // Split over Q.
  EtaleExtension SQ = EtaleExtension::split(Q);
  for (int i = 0; i < 20; ++i) out.push_back({"Q x Q", EtaleForm::of(SQ, gp2(Q, false), gp2(Q, false)), false});
  // Q(sqrt m).
  const long ms[] = {2, -1, 5, -3, 3, -7};
  for (int i = 0; i < 30; ++i) {
    EtaleExtension E = EtaleExtension::quadratic(Q, Q->from_int(ms[i % 6]));
    out.push_back({E.str(), EtaleForm::of(E, gp2(E.field(), false)), false});
  }
  // Quadratic field extensions of R((x))((y)).
  const char* ds[] = {"-1", "x", "-x", "y", "-y", "x*y", "-x*y"};
  for (int i = 0; i < 35; ++i) {
    EtaleExtension E = EtaleExtension::quadratic(T, parse_elem(T, ds[i % 7]));
    out.push_back({E.str(), EtaleForm::of(E, gp2(E.field(), true)), true});
  }
  // The split extension of R((x))((y)): here the index-4 classes live.
  EtaleExtension ST = EtaleExtension::split(T);
  QuadraticForm n11 = pfister(T, {parse_elem(T, "-1"), parse_elem(T, "-1")});
  QuadraticForm nxy = pfister(T, {parse_elem(T, "x"), parse_elem(T, "y")});
  out.push_back({ST.str(), EtaleForm::of(ST, n11, nxy), true});
  out.push_back({ST.str(), EtaleForm::of(ST, n11.scaled(parse_elem(T, "x")), nxy), true});
  out.push_back({ST.str(), EtaleForm::of(ST, n11, nxy.scaled(parse_elem(T, "-y"))), true});
  out.push_back({ST.str(), EtaleForm::of(ST, pfister(T, {parse_elem(T, "-1"), parse_elem(T, "x")}),
                                         pfister(T, {parse_elem(T, "-x"), parse_elem(T, "y")})), true});
  out.push_back({ST.str(), EtaleForm::of(ST, pfister(T, {parse_elem(T, "-1"), parse_elem(T, "-y")}),
                                         pfister(T, {parse_elem(T, "x"), parse_elem(T, "-1")}).scaled(parse_elem(T, "x*y"))),
                 true});
  while (out.size() < 100) out.push_back({ST.str(), EtaleForm::of(ST, gp2(T, true), gp2(T, true)), true});
  return out;
}

bool signed_disc_trivial(const QuadraticForm& q) {
  Elem d = q.field()->one();
  for (const auto& x : q.entries()) d *= x;
  if ((q.dim() * (q.dim() - 1) / 2) % 2) d = -d;
  return is_square(d);
}

Outcome forward(const std::vector<Instance>& xs) {
  Outcome o;
  int idx[5] = {0, 0, 0, 0, 0};
  for (const auto& x : xs) {
    QuadraticForm phi = transfer(x.psi);
    if (!signed_disc_trivial(phi)) {
      o.fail(x.kind + " " + x.psi.str() + ": discriminant");
      continue;
    }
    long i = index(clifford_invariant(phi));
    if (i != 1 && i != 2 && i != 4) o.fail(x.kind + " " + x.psi.str() + ": index " + std::to_string(i));
    if (i <= 4) ++idx[i];
  }
  o.detail = std::to_string(xs.size()) + " GP2 psi; transfer index 1/2/4: " + std::to_string(idx[1]) + "/" +
             std::to_string(idx[2]) + "/" + std::to_string(idx[4]);
  return o;
}

Outcome round_trip(const std::vector<Instance>& xs) {
  Outcome o;
  int tower_four = 0, ok = 0;
  for (const auto& x : xs) {
    QuadraticForm phi = transfer(x.psi);
    std::string tag = x.kind + " " + x.psi.str();
    try {
      TransferPresentation T = construct_presentation(phi);
      bool good = verify_presentation(phi, T).ok && is_GP2(T.psi) && is_isometric(transfer(T.psi), phi);
      if (!good) {
        o.fail(tag + ": presentation does not verify");
        continue;
      }
      ++ok;
      if (x.tower && index(clifford_invariant(phi)) == 4) ++tower_four;
    } catch (const Error& e) {
      o.fail(tag + ": " + e.what());
    }
  }
  if (tower_four < 5) o.fail("only " + std::to_string(tower_four) + " index-4 instances over R((x))((y))");
  o.detail = std::to_string(ok) + "/" + std::to_string(xs.size()) + " constructed and verified, " +
             std::to_string(tower_four) + " of index 4 over R((x))((y))";
  return o;
}

// ---- 9 ----------------------------------------------------------------------

Outcome index_four_and_rational() {
  Outcome o;
  FieldPtr T = parse_field("R((x))((y))");
  BrauerClass2 c(T, parse_symbols(T, "(-1,-1) + (x,y)"));
  long rec = index(c), alb = index_via_albert(c);
  if (rec != 4 || alb != 4) o.fail("index " + std::to_string(rec) + ", Albert " + std::to_string(alb));
  Rng rng(9009);
  FieldPtr Q = Field::rationals();
  int n = 200, tally[4] = {0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    std::vector<Elem> e;
    mpq_class prod = 1;
    for (int k = 0; k < 7; ++k) {
      mpq_class v = rand_rational(rng, 30);
      prod *= v;
      e.push_back(Q->from_rational(v));
    }
    e.push_back(Q->from_rational(prod));  // 8 entries, product a square
    QuadraticForm q(Q, e);
    Branch b = classify(q).branch;
    ++tally[static_cast<int>(b)];
    if (b == Branch::TransferNeeded) o.fail(q.str());
  }
  o.detail = "index (-1,-1)+(x,y) = " + std::to_string(rec) + " (recursion), " + std::to_string(alb) +
             " (Albert); " + std::to_string(n) + " rational forms: GP3 " + std::to_string(tally[0]) +
             ", pfister-multiple " + std::to_string(tally[1]) + ", transfer-needed " + std::to_string(tally[2]);
  return o;
}

// ---- 10 ---------------------------------------------------------------------

std::string capture(const std::string& cmd, int& rc) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    rc = -1;
    return out;
  }
  char buf[4096];
  while (std::size_t k = fread(buf, 1, sizeof buf, p)) out.append(buf, k);
  int st = pclose(p);
  rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

Outcome determinism() {
  Outcome o;
  std::string cmd = std::string("\"") + QFB_CLI_PATH + "\" selftest --seed 0 2>/dev/null";
  int rc1 = 0, rc2 = 0;
  std::string a = capture(cmd, rc1), b = capture(cmd, rc2);
  if (rc1 != 0 || rc2 != 0) o.fail("exit codes " + std::to_string(rc1) + ", " + std::to_string(rc2));
  if (a.empty() || a != b) o.fail("outputs differ");
  if (a.find("\"schema\": 1") == std::string::npos) o.fail("no schema field");
  o.detail = "selftest --seed 0 twice: " + std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different");
  return o;
}

}  // namespace

int main() {
  std::cout << "tolerance: exact arithmetic, zero mismatches allowed" << std::endl;
  report(1, 10, hilbert_product);
  report(2, 60, isotropy_vs_brute);
  report(3, 300, clifford_table);
  report(4, 120, lemma_etale);
  report(5, 300, switch_fixed_points);
  report(6, 120, arason);
  std::vector<Instance> xs = forward_instances();
  report(7, 300, [&] { return forward(xs); });
  report(8, 900, [&] { return round_trip(xs); });
  report(9, 300, index_four_and_rational);
  report(10, 120, determinism);
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
