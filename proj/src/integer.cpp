#include "qfb/integer.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "qfb/errors.hpp"

namespace qfb {

namespace {

std::mutex g_limit_mutex;
mpz_class g_limit = mpz_class(1) << 64;

mpz_class pollard_rho(const mpz_class& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; c < 64; ++c) {
    mpz_class x = 2, y = 2, d = 1, q = 1, ys;
    std::size_t r = 1;
    auto f = [&](const mpz_class& v) {
      mpz_class out = v * v + c;
      mpz_mod(out.get_mpz_t(), out.get_mpz_t(), n.get_mpz_t());
      return out;
    };
    // Brent's cycle detection with batched gcds.
    const std::size_t batch = 64;
    std::size_t iterations = 0;
    do {
      x = y;
      for (std::size_t i = 0; i < r; ++i) y = f(y);
      std::size_t k = 0;
      do {
        ys = y;
        for (std::size_t i = 0; i < std::min(batch, r - k); ++i) {
          y = f(y);
          mpz_class diff = x - y;
          q = q * abs(diff) % n;
        }
        mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += batch;
      } while (k < r && d == 1);
      r *= 2;
      iterations += r;
    } while (d == 1 && iterations < (1u << 22));
    if (d == n) {
      do {
        ys = f(ys);
        mpz_class diff = x - ys;
        mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        d = abs(d);
      } while (d == 1);
    }
    if (d != 1 && d != n) return d;
  }
  return 0;
}

void factor_into(const mpz_class& n, Factorization& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out.emplace_back(n, 1);
    return;
  }
  mpz_class d = pollard_rho(n);
  if (d == 0) throw Error(Errc::FactorizationLimit, "could not split " + n.get_str());
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

void set_factorization_limit(const mpz_class& bound) {
  std::lock_guard<std::mutex> lock(g_limit_mutex);
  g_limit = bound;
}

mpz_class factorization_limit() {
  std::lock_guard<std::mutex> lock(g_limit_mutex);
  return g_limit;
}

bool is_probable_prime(const mpz_class& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0; }

namespace {

Factorization factor_uncached(const mpz_class& n_in) {
  if (n_in == 0) throw Error(Errc::ZeroInput, "factor(0)");
  mpz_class n = abs(n_in);
  Factorization raw;
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      raw.emplace_back(p, 1);
      n /= p;
    }
  }
  for (unsigned long p = 17; p < 10000 && n > 1; p += 2) {
    if (mpz_cmp_ui(n.get_mpz_t(), p * p) < 0) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      raw.emplace_back(p, 1);
      n /= p;
    }
  }
  if (n > 1) {
    if (!is_probable_prime(n) && n > factorization_limit()) {
      // Rho is still attempted; failure is reported instead of returning a partial result.
      Factorization big;
      try {
        factor_into(n, big);
      } catch (const Error&) {
        throw Error(Errc::FactorizationLimit, "composite cofactor " + n.get_str() + " exceeds limit");
      }
      raw.insert(raw.end(), big.begin(), big.end());
    } else {
      factor_into(n, raw);
    }
  }
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Factorization merged;
  for (const auto& [p, e] : raw) {
    if (!merged.empty() && merged.back().first == p)
      merged.back().second += e;
    else
      merged.emplace_back(p, e);
  }
  return merged;
}

}  // namespace

// Isotropy tests refactor the same entries many times over.
Factorization factor(const mpz_class& n) {
  thread_local std::map<mpz_class, Factorization> cache;
  mpz_class key = abs(n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  Factorization f = factor_uncached(key);
  if (cache.size() > (1u << 16)) cache.clear();
  cache.emplace(std::move(key), f);
  return f;
}

std::vector<mpz_class> prime_divisors(const mpz_class& n) {
  std::vector<mpz_class> out;
  for (const auto& [p, e] : factor(n)) out.push_back(p);
  return out;
}

mpz_class squarefree_part(const mpz_class& n) {
  if (n == 0) throw Error(Errc::ZeroInput, "squarefree_part(0)");
  mpz_class s = sgn(n) < 0 ? -1 : 1;
  for (const auto& [p, e] : factor(n))
    if (e % 2) s *= p;
  return s;
}

bool is_perfect_square(const mpz_class& n) {
  return sgn(n) >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool is_rational_square(const mpq_class& q) {
  return sgn(q) > 0 && is_perfect_square(q.get_num()) && is_perfect_square(q.get_den());
}

long valuation(const mpz_class& n, const mpz_class& p) {
  if (n == 0) throw Error(Errc::ZeroInput, "valuation(0)");
  mpz_class r;
  return static_cast<long>(mpz_remove(r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const mpq_class& q, const mpz_class& p) {
  if (q == 0) throw Error(Errc::ZeroInput, "valuation(0)");
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

int legendre(const mpz_class& a, const mpz_class& p) { return mpz_legendre(a.get_mpz_t(), p.get_mpz_t()); }

mpz_class reduce_mod(const mpq_class& a, const mpz_class& m) {
  mpz_class inv;
  if (!mpz_invert(inv.get_mpz_t(), a.get_den().get_mpz_t(), m.get_mpz_t()))
    throw Error(Errc::PreconditionViolated, "denominator not invertible modulo " + m.get_str());
  mpz_class r = a.get_num() * inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class sqrt_mod_prime(const mpz_class& a_in, const mpz_class& p) {
  mpz_class a = a_in % p;
  if (a < 0) a += p;
  if (legendre(a, p) != 1) throw Error(Errc::PreconditionViolated, "not a nonzero square mod p");
  // Tonelli-Shanks.
  mpz_class q = p - 1;
  unsigned long s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q /= 2;
    ++s;
  }
  mpz_class z = 2;
  while (legendre(z, p) != -1) ++z;
  mpz_class m = s, c, t, r, exp;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  exp = (q + 1) / 2;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), exp.get_mpz_t(), p.get_mpz_t());
  unsigned long mm = s;
  while (t != 1) {
    unsigned long i = 0;
    mpz_class tt = t;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
    }
    mpz_class b = c;
    for (unsigned long j = 0; j + i + 1 < mm; ++j) b = b * b % p;
    mm = i;
    c = b * b % p;
    t = t * c % p;
    r = r * b % p;
  }
  return r;
}

mpz_class sqrt_mod_prime_power(const mpz_class& a, const mpz_class& p, unsigned k) {
  if (p == 2) {
    mpz_class mod = mpz_class(1) << k;
    mpz_class aa = a % mod;
    if (aa < 0) aa += mod;
    if (k <= 3) {
      for (mpz_class r = 1; r < mod; r += 2)
        if ((r * r - aa) % mod == 0) return r;
      throw Error(Errc::PreconditionViolated, "no square root mod 2^k");
    }
    if ((aa & 7) != 1) throw Error(Errc::PreconditionViolated, "2-adic unit not 1 mod 8");
    // r^2 = a mod 2^j  =>  adjust bit j-1 to get mod 2^(j+1).
    mpz_class r = 1;
    for (unsigned j = 3; j < k; ++j) {
      mpz_class next = mpz_class(1) << (j + 1);
      if (((r * r - aa) % next) != 0) r += mpz_class(1) << (j - 1);
    }
    return r % mod;
  }
  mpz_class r = sqrt_mod_prime(a, p);
  mpz_class pk = p;
  for (unsigned j = 1; j < k; ++j) {
    mpz_class next = pk * p;
    // Newton step: r <- r - (r^2 - a) / (2r) mod p^(j+1).
    mpz_class inv;
    mpz_class two_r = 2 * r;
    mpz_invert(inv.get_mpz_t(), two_r.get_mpz_t(), next.get_mpz_t());
    r = (r - (r * r - a) * inv) % next;
    if (r < 0) r += next;
    pk = next;
  }
  return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t least_nonresidue(std::uint64_t p) {
  for (std::uint64_t a = 2; a < p; ++a)
    if (powmod(a, (p - 1) / 2, p) == p - 1) return a;
  throw Error(Errc::PreconditionViolated, "no nonresidue");
}

}  // namespace qfb
