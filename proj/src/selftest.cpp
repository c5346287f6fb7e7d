#include "qfb/selftest.hpp"

#include <functional>
#include <random>
#include <set>

#include "qfb/brauer.hpp"
#include "qfb/clifford.hpp"
#include "qfb/etale.hpp"
#include "qfb/local.hpp"
#include "qfb/parse.hpp"
#include "qfb/pipeline.hpp"

namespace qfb {

namespace {

using Rng = std::mt19937_64;

long rand_nonzero(Rng& rng, long h) {
  std::uniform_int_distribution<long> d(-h, h);
  long v = 0;
  while (v == 0) v = d(rng);
  return v;
}

Elem rand_elem(Rng& rng, const FieldPtr& F, long h) {
  if (F->kind() != FieldKind::QuadExt) return F->from_int(rand_nonzero(rng, h));
  std::uniform_int_distribution<long> d(-h, h);
  Elem x;
  do {
    x = F->make_quad(F->base()->from_int(d(rng)), F->base()->from_int(d(rng)));
  } while (x.is_zero());
  return x;
}

// <a, b, c, abc>: dimension 4, trivial signed discriminant.
QuadraticForm rand_trivial_disc4(Rng& rng, const FieldPtr& F, long h) {
  Elem a = rand_elem(rng, F, h), b = rand_elem(rng, F, h), c = rand_elem(rng, F, h);
  return QuadraticForm(F, {a, b, c, a * b * c});
}

struct Suite {
  SuiteResult r;
  explicit Suite(std::string name) { r.name = std::move(name); }

  void run(const std::string& what, const std::function<bool()>& body) {
    ++r.cases;
    bool ok = false;
    std::string why;
    try {
      ok = body();
    } catch (const Error& e) {
      why = e.what();
    }
    if (!ok) {
      ++r.failures;
      if (r.first_failure.empty()) r.first_failure = what + (why.empty() ? "" : " (" + why + ")");
    }
  }
};

SuiteResult hilbert_product(Rng& rng, std::size_t n) {
  Suite s("hilbert-product");
  FieldPtr Q = Field::rationals();
  for (std::size_t i = 0; i < n; ++i) {
    Elem a = rand_elem(rng, Q, 10000), b = rand_elem(rng, Q, 10000);
    s.run("(" + a.str() + ", " + b.str() + ")", [&] {
      int prod = 1;
      for (const auto& v : support_places(*Q, {a, b})) prod *= hilbert_symbol(*Q, a, b, v);
      return prod == 1;
    });
  }
  for (long m : {2L, -1L, 5L}) {
    FieldPtr L = make_quad_ext(Q, Q->from_int(m)).field;
    for (std::size_t i = 0; i < n / 10 + 1; ++i) {
      Elem a = rand_elem(rng, L, 30), b = rand_elem(rng, L, 30);
      s.run(L->str() + " (" + a.str() + ", " + b.str() + ")", [&] {
        int prod = 1;
        for (const auto& v : support_places(*L, {a, b})) prod *= hilbert_symbol(*L, a, b, v);
        return prod == 1;
      });
    }
  }
  return s.r;
}

// Values of q on random integer vectors: q must represent them, and
// q + <-q(v)> must be isotropic.
SuiteResult representation(Rng& rng, std::size_t n) {
  Suite s("represents-values");
  FieldPtr Q = Field::rationals();
  std::uniform_int_distribution<long> dim(1, 4), coord(-6, 6);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Elem> e;
    for (long k = dim(rng); k > 0; --k) e.push_back(Q->from_int(rand_nonzero(rng, 30)));
    QuadraticForm q(Q, e);
    std::vector<Elem> v;
    for (std::size_t k = 0; k < q.dim(); ++k) v.push_back(Q->from_int(coord(rng)));
    Elem c = q.evaluate(v);
    if (c.is_zero()) {
      bool trivial = true;
      for (const auto& x : v) trivial = trivial && x.is_zero();
      if (trivial) continue;
      s.run(q.str() + " isotropic", [&] { return is_isotropic(q); });
      continue;
    }
    s.run(q.str() + " represents " + c.str(), [&] {
      return represents(q, c) && is_isotropic(q + QuadraticForm(Q, {-c}));
    });
  }
  return s.r;
}

SuiteResult clifford_engine(Rng& rng, std::size_t n) {
  Suite s("clifford-engine");
  FieldPtr Q = Field::rationals();
  const long pool[] = {1, -1, 2, -2, 3, -3, 5, -5};
  std::uniform_int_distribution<int> pick(0, 7);
  std::size_t done = 0;
  while (done < n) {
    std::size_t dim = 2 * (1 + done % 3);
    std::vector<Elem> e;
    for (std::size_t k = 0; k < dim; ++k) e.push_back(Q->from_int(pool[pick(rng)]));
    QuadraticForm q(Q, e);
    if (!has_trivial_discriminant(q)) continue;
    ++done;
    s.run(q.str(), [&] { return same_class(explicit_clifford_class(q), clifford_invariant(q)); });
  }
  return s.r;
}

SuiteResult lemma_etale(Rng& rng, std::size_t n) {
  Suite s("lemma-etale");
  FieldPtr Q = Field::rationals();
  std::uniform_int_distribution<long> coord(-3, 3);
  auto rand_vec = [&](const QuadraticForm& q) {
    for (;;) {
      std::vector<Elem> v;
      for (std::size_t k = 0; k < q.dim(); ++k) v.push_back(Q->from_int(coord(rng)));
      if (!q.evaluate(v).is_zero()) return v;
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    QuadraticForm p = rand_trivial_disc4(rng, Q, 7), p2 = rand_trivial_disc4(rng, Q, 7);
    auto v = rand_vec(p), v2 = rand_vec(p2);
    s.run(p.str() + " + " + p2.str(), [&] { return verify_lemma_etale(p, p2, v, v2).passed(); });
  }
  return s.r;
}

SuiteResult switch_fixed(std::uint64_t seed) {
  Suite s("switch-fixed-points");
  for (const char* ext : {"Q(sqrt 2)", "Q(sqrt -1)"}) {
    FieldPtr L = parse_field(ext);
    for (const char* f : {"<1,1>", "<1,delta>"}) {
      QuadraticForm psi(L, parse_form_entries(L, f));
      s.run(std::string(ext) + " " + f, [&] { return verify_switch_fixed_points(psi, seed).passed(); });
    }
  }
  return s.r;
}

// Product of the local symbols of c at all places of its field above p.
int local_class(const BrauerClass2& c, const mpz_class& p) {
  int s = 1;
  for (const auto& w : places_above(*c.field, p))
    for (const auto& [x, y] : c.symbols) s *= hilbert_symbol(*c.field, x, y, w);
  return s;
}

// Local invariants of a corestriction add up over the places above each p.
SuiteResult arason(Rng& rng, std::size_t n) {
  Suite s("arason-corestriction");
  FieldPtr Q = Field::rationals();
  const long ms[] = {2, -2, -1, 5};
  for (std::size_t i = 0; i < n; ++i) {
    EtaleExtension E = EtaleExtension::quadratic(Q, Q->from_int(ms[i % 4]));
    QuadraticForm psi = rand_trivial_disc4(rng, E.field(), 5);
    s.run(E.str() + " " + psi.str(), [&] {
      BrauerClass2 down = clifford_invariant(transfer(E, psi));
      BrauerClass2 up = clifford_invariant(psi);
      std::vector<Elem> el_up, el_down;
      for (const auto& [x, y] : up.symbols) el_up.insert(el_up.end(), {x, y});
      for (const auto& [x, y] : down.symbols) el_down.insert(el_down.end(), {x, y});
      std::set<mpz_class> primes = {0};
      for (const auto& w : support_places(*up.field, el_up)) primes.insert(w.p);
      for (const auto& w : support_places(*Q, el_down)) primes.insert(w.p);
      for (const auto& p : primes)
        if (local_class(down, p) != local_class(up, p)) return false;
      return true;
    });
  }
  return s.r;
}

EtaleForm rand_gp2(Rng& rng, const EtaleExtension& E, long h) {
  auto one = [&](const FieldPtr& K) {
    Elem c = rand_elem(rng, K, h), a = rand_elem(rng, K, h), b = rand_elem(rng, K, h);
    return pfister(K, {a, b}).scaled(c);
  };
  if (E.is_split()) return EtaleForm::of(E, one(E.base()), one(E.base()));
  return EtaleForm::of(E, one(E.field()));
}

SuiteResult round_trip(Rng& rng, std::size_t n) {
  Suite s("transfer-round-trip");
  FieldPtr Q = Field::rationals();
  FieldPtr T = parse_field("R((x))((y))");
  std::vector<EtaleExtension> exts = {EtaleExtension::split(Q), EtaleExtension::quadratic(Q, Q->from_int(2)),
                                      EtaleExtension::quadratic(Q, Q->from_int(-3)),
                                      EtaleExtension::quadratic(T, parse_elem(T, "-1")),
                                      EtaleExtension::quadratic(T, parse_elem(T, "x")),
                                      EtaleExtension::quadratic(T, parse_elem(T, "-x*y"))};
  for (std::size_t i = 0; i < n; ++i) {
    const EtaleExtension& E = exts[i % exts.size()];
    EtaleForm psi = rand_gp2(rng, E, E.base()->kind() == FieldKind::Rationals ? 4 : 2);
    s.run(E.str() + " " + psi.str(), [&] {
      QuadraticForm phi = transfer(psi);
      ClassificationReport c = classify(phi);
      if (!c.discriminant_trivial || c.branch == Branch::NotApplicable) return false;
      return verify_presentation(phi, construct_presentation(phi)).ok;
    });
  }
  return s.r;
}

SuiteResult rational_never_transfer(Rng& rng, std::size_t n) {
  Suite s("rational-no-transfer-branch");
  FieldPtr Q = Field::rationals();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Elem> e;
    Elem d = Q->one();
    for (int k = 0; k < 7; ++k) {
      e.push_back(rand_elem(rng, Q, 30));
      d *= e.back();
    }
    e.push_back(d);  // 8 entries, product a square: signed discriminant trivial
    QuadraticForm q(Q, e);
    s.run(q.str(), [&] { return classify(q).branch != Branch::TransferNeeded; });
  }
  return s.r;
}

SuiteResult index_four() {
  Suite s("index-four");
  FieldPtr T = parse_field("R((x))((y))");
  BrauerClass2 c(T, parse_symbols(T, "(-1,-1) + (x,y)"));
  s.run("index " + c.str(), [&] { return index(c) == 4; });
  s.run("albert index " + c.str(), [&] { return index_via_albert(c) == 4; });
  return s.r;
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt) {
  const std::size_t k = opt.scale == 0 ? 1 : opt.scale;
  // One generator per suite, so changing one count leaves the others alone.
  auto rng = [&](std::uint64_t salt) { return Rng(opt.seed * 0x9e3779b97f4a7c15ULL + salt); };
  std::vector<SuiteResult> out;
  Rng r1 = rng(1), r2 = rng(2), r3 = rng(3), r4 = rng(4), r5 = rng(5), r6 = rng(6), r7 = rng(7);
  out.push_back(hilbert_product(r1, 100 * k));
  out.push_back(representation(r2, 60 * k));
  out.push_back(clifford_engine(r3, 30 * k));
  out.push_back(lemma_etale(r4, 2 * k));
  out.push_back(switch_fixed(opt.seed));
  out.push_back(arason(r5, 20 * k));
  out.push_back(round_trip(r6, 12 * k));
  out.push_back(rational_never_transfer(r7, 40 * k));
  out.push_back(index_four());
  return out;
}

}  // namespace qfb
