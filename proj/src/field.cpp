#include "qfb/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <variant>

#include "qfb/integer.hpp"

namespace qfb {

struct Elem::Rep {
  struct Quad {
    Elem a, b;
  };
  struct Laur {
    long shift = 0;
    Poly num, den;
  };
  std::variant<mpq_class, std::uint64_t, Quad, Laur> v;
};

namespace {

using Rep = Elem::Rep;

void require_same(const Elem& x, const Elem& y) {
  if (!x.valid() || !y.valid()) throw Error(Errc::PreconditionViolated, "uninitialised element");
  if (x.field().get() != y.field().get() && !x.field()->same_as(*y.field()))
    throw Error(Errc::FieldMismatch, x.field()->str() + " vs " + y.field()->str());
}

// ---- polynomial helpers over a base field --------------------------------

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Poly padd(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size() && i < b.size())
      out[i] = a[i] + b[i];
    else
      out[i] = i < a.size() ? a[i] : b[i];
  }
  trim(out);
  return out;
}

Poly pmul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_zero()) continue;
      Elem t = a[i] * b[j];
      out[i + j] = out[i + j].valid() ? out[i + j] + t : t;
    }
  }
  const Elem zero = a[0].field()->zero();
  for (auto& c : out)
    if (!c.valid()) c = zero;
  trim(out);
  return out;
}

Poly pscale(const Poly& a, const Elem& c) {
  Poly out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x * c);
  trim(out);
  return out;
}

Poly pshift(const Poly& a, long k) {
  if (a.empty() || k == 0) return a;
  Poly out(static_cast<std::size_t>(k), a[0].field()->zero());
  out.insert(out.end(), a.begin(), a.end());
  return out;
}

// a = q*b + r
void pdivmod(Poly a, const Poly& b, Poly& q, Poly& r) {
  trim(a);
  q.clear();
  if (a.size() < b.size()) {
    r = a;
    return;
  }
  const Elem lead_inv = b.back().inverse();
  q.assign(a.size() - b.size() + 1, b[0].field()->zero());
  while (a.size() >= b.size() && !a.empty()) {
    std::size_t k = a.size() - b.size();
    Elem c = a.back() * lead_inv;
    q[k] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[k + j] = a[k + j] - c * b[j];
    a.pop_back();
    trim(a);
  }
  trim(q);
  r = a;
}

Poly pgcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly q, r;
    pdivmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) a = pscale(a, a.back().inverse());
  return a;
}

Poly pexact_div(const Poly& a, const Poly& b) {
  Poly q, r;
  pdivmod(a, b, q, r);
  return q;
}

bool peq(const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

std::string wrap(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == ' ' || c == '+' || c == '*' || c == '/' || (c == '-' && i > 0)) return "(" + s + ")";
  }
  return s;
}

std::string power_str(const std::string& var, long e) {
  if (e == 1) return var;
  return var + "^" + std::to_string(e);
}

std::string poly_str(const Poly& p, long shift, const std::string& var) {
  std::vector<std::string> terms;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].is_zero()) continue;
    long e = shift + static_cast<long>(i);
    std::string c = p[i].str();
    if (e == 0)
      terms.push_back(c);
    else if (c == "1")
      terms.push_back(power_str(var, e));
    else
      terms.push_back(wrap(c) + "*" + power_str(var, e));
  }
  if (terms.empty()) return "0";
  std::string out = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) out += " + " + terms[i];
  return out;
}

std::uint64_t fp_reduce(const mpq_class& q, std::uint64_t p) {
  mpz_class r = reduce_mod(q, mpz_class(std::to_string(p)));
  return r.get_ui();
}

bool fp_is_square(std::uint64_t x, std::uint64_t p) { return powmod(x, (p - 1) / 2, p) == 1; }

}  // namespace

// ---- Elem ------------------------------------------------------------------

bool Elem::is_zero() const {
  const auto& v = rep_->v;
  switch (v.index()) {
    case 0: return sgn(std::get<0>(v)) == 0;
    case 1: return std::get<1>(v) == 0;
    case 2: return std::get<2>(v).a.is_zero() && std::get<2>(v).b.is_zero();
    default: return std::get<3>(v).num.empty();
  }
}

bool Elem::is_one() const { return *this == field_->one(); }

const mpq_class& Elem::rational() const {
  if (rep_->v.index() != 0) throw Error(Errc::FieldMismatch, "not a rational element");
  return std::get<0>(rep_->v);
}
std::uint64_t Elem::residue_mod_p() const {
  if (rep_->v.index() != 1) throw Error(Errc::FieldMismatch, "not an F_p element");
  return std::get<1>(rep_->v);
}
const Elem& Elem::re() const {
  if (rep_->v.index() != 2) throw Error(Errc::FieldMismatch, "not a quadratic-extension element");
  return std::get<2>(rep_->v).a;
}
const Elem& Elem::im() const {
  if (rep_->v.index() != 2) throw Error(Errc::FieldMismatch, "not a quadratic-extension element");
  return std::get<2>(rep_->v).b;
}
long Elem::laurent_shift() const {
  if (rep_->v.index() != 3) throw Error(Errc::FieldMismatch, "not a Laurent element");
  return std::get<3>(rep_->v).shift;
}
const Poly& Elem::laurent_num() const {
  if (rep_->v.index() != 3) throw Error(Errc::FieldMismatch, "not a Laurent element");
  return std::get<3>(rep_->v).num;
}
const Poly& Elem::laurent_den() const {
  if (rep_->v.index() != 3) throw Error(Errc::FieldMismatch, "not a Laurent element");
  return std::get<3>(rep_->v).den;
}

Elem Elem::operator-() const {
  const Field& F = *field_;
  switch (F.kind()) {
    case FieldKind::Rationals:
    case FieldKind::Reals: return F.from_rational(-rational());
    case FieldKind::PrimeField: {
      auto r = residue_mod_p();
      return F.make_prime(r == 0 ? 0 : F.prime() - r);
    }
    case FieldKind::QuadExt: return F.make_quad(-re(), -im());
    case FieldKind::Laurent: {
      if (is_zero()) return *this;
      Poly n;
      for (const auto& c : laurent_num()) n.push_back(-c);
      return F.make_laurent(laurent_shift(), n, laurent_den());
    }
  }
  return {};
}

Elem operator+(const Elem& x, const Elem& y) {
  require_same(x, y);
  const Field& F = *x.field();
  switch (F.kind()) {
    case FieldKind::Rationals:
    case FieldKind::Reals: return F.from_rational(x.rational() + y.rational());
    case FieldKind::PrimeField: {
      auto s = x.residue_mod_p() + y.residue_mod_p();
      if (s >= F.prime()) s -= F.prime();
      return F.make_prime(s);
    }
    case FieldKind::QuadExt: return F.make_quad(x.re() + y.re(), x.im() + y.im());
    case FieldKind::Laurent: {
      if (x.is_zero()) return y;
      if (y.is_zero()) return x;
      long s1 = x.laurent_shift(), s2 = y.laurent_shift();
      long s = std::min(s1, s2);
      const Poly &n1 = x.laurent_num(), &d1 = x.laurent_den();
      const Poly &n2 = y.laurent_num(), &d2 = y.laurent_den();
      if (peq(d1, d2)) return F.make_laurent(s, padd(pshift(n1, s1 - s), pshift(n2, s2 - s)), d1);
      Poly n = padd(pmul(pshift(n1, s1 - s), d2), pmul(pshift(n2, s2 - s), d1));
      return F.make_laurent(s, n, pmul(d1, d2));
    }
  }
  return {};
}

Elem operator-(const Elem& x, const Elem& y) { return x + (-y); }

Elem operator*(const Elem& x, const Elem& y) {
  require_same(x, y);
  const Field& F = *x.field();
  switch (F.kind()) {
    case FieldKind::Rationals:
    case FieldKind::Reals: return F.from_rational(x.rational() * y.rational());
    case FieldKind::PrimeField: return F.make_prime(mulmod(x.residue_mod_p(), y.residue_mod_p(), F.prime()));
    case FieldKind::QuadExt: {
      const Elem &a = x.re(), &b = x.im(), &c = y.re(), &e = y.im();
      if (b.is_zero() && e.is_zero()) return F.make_quad(a * c, b);
      return F.make_quad(a * c + F.quad_d() * b * e, a * e + b * c);
    }
    case FieldKind::Laurent: {
      if (x.is_zero()) return x;
      if (y.is_zero()) return y;
      return F.make_laurent(x.laurent_shift() + y.laurent_shift(), pmul(x.laurent_num(), y.laurent_num()),
                            pmul(x.laurent_den(), y.laurent_den()));
    }
  }
  return {};
}

Elem Elem::inverse() const {
  if (is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero in " + field_->str());
  const Field& F = *field_;
  switch (F.kind()) {
    case FieldKind::Rationals:
    case FieldKind::Reals: return F.from_rational(1 / rational());
    case FieldKind::PrimeField: return F.make_prime(powmod(residue_mod_p(), F.prime() - 2, F.prime()));
    case FieldKind::QuadExt: {
      Elem n = re() * re() - F.quad_d() * im() * im();
      Elem ni = n.inverse();
      return F.make_quad(re() * ni, -(im() * ni));
    }
    case FieldKind::Laurent: return F.make_laurent(-laurent_shift(), laurent_den(), laurent_num());
  }
  return {};
}

Elem operator/(const Elem& x, const Elem& y) {
  require_same(x, y);
  return x * y.inverse();
}

Elem Elem::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Elem r = field_->one(), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

bool operator==(const Elem& x, const Elem& y) {
  require_same(x, y);
  const auto &a = x.rep_->v, &b = y.rep_->v;
  switch (a.index()) {
    case 0: return std::get<0>(a) == std::get<0>(b);
    case 1: return std::get<1>(a) == std::get<1>(b);
    case 2: return std::get<2>(a).a == std::get<2>(b).a && std::get<2>(a).b == std::get<2>(b).b;
    default: {
      const auto &l1 = std::get<3>(a), &l2 = std::get<3>(b);
      if (l1.num.empty() || l2.num.empty()) return l1.num.empty() && l2.num.empty();
      return l1.shift == l2.shift && peq(pmul(l1.num, l2.den), pmul(l2.num, l1.den));
    }
  }
}

std::string Elem::str() const {
  const Field& F = *field_;
  switch (F.kind()) {
    case FieldKind::Rationals:
    case FieldKind::Reals: return rational().get_str();
    case FieldKind::PrimeField: return std::to_string(residue_mod_p());
    case FieldKind::QuadExt: {
      std::vector<std::string> terms;
      if (!re().is_zero()) terms.push_back(re().str());
      if (!im().is_zero()) {
        std::string b = im().str();
        if (b == "1")
          terms.push_back(F.gen_name());
        else
          terms.push_back(wrap(b) + "*" + F.gen_name());
      }
      if (terms.empty()) return "0";
      return terms.size() == 1 ? terms[0] : terms[0] + " + " + terms[1];
    }
    case FieldKind::Laurent: {
      if (is_zero()) return "0";
      const Poly& d = laurent_den();
      if (d.size() == 1) return poly_str(laurent_num(), laurent_shift(), F.var());
      std::string n = poly_str(laurent_num(), laurent_shift(), F.var());
      return "(" + n + ")/(" + poly_str(d, 0, F.var()) + ")";
    }
  }
  return "?";
}

// ---- Field -----------------------------------------------------------------

Field::Field(Token, FieldKind kind) : kind_(kind) {}

FieldPtr Field::rationals() {
  static FieldPtr q = [] {
    auto f = std::make_shared<Field>(Token{}, FieldKind::Rationals);
    f->name_ = "Q";
    return f;
  }();
  return q;
}

FieldPtr Field::reals() {
  static FieldPtr r = [] {
    auto f = std::make_shared<Field>(Token{}, FieldKind::Reals);
    f->name_ = "R";
    return f;
  }();
  return r;
}

FieldPtr Field::prime_field(std::uint64_t p) {
  static std::mutex mu;
  static std::map<std::uint64_t, FieldPtr> cache;
  if (p < 3 || p % 2 == 0 || !is_probable_prime(mpz_class(std::to_string(p))))
    throw Error(Errc::PreconditionViolated, "F_p requires an odd prime, got " + std::to_string(p));
  if (p >= (std::uint64_t(1) << 62)) throw Error(Errc::PreconditionViolated, "prime too large");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<Field>(Token{}, FieldKind::PrimeField);
  f->p_ = p;
  f->name_ = "F" + std::to_string(p);
  f->nonsquare_a_ = least_nonresidue(p);
  cache[p] = f;
  return f;
}

namespace {

bool tower_uses_name(const Field& F, const std::string& name) {
  for (const Field* f = &F; f; f = f->base().get()) {
    if (f->kind() == FieldKind::Laurent && f->var() == name) return true;
    if (f->kind() == FieldKind::QuadExt && f->gen_name() == name) return true;
  }
  return false;
}

}  // namespace

FieldPtr Field::laurent(const FieldPtr& base, const std::string& var) {
  if (var.empty() || var.rfind("delta", 0) == 0)
    throw Error(Errc::PreconditionViolated, "invalid Laurent variable name '" + var + "'");
  if (tower_uses_name(*base, var))
    throw Error(Errc::PreconditionViolated, "variable '" + var + "' already used in " + base->str());
  auto f = std::make_shared<Field>(Token{}, FieldKind::Laurent);
  f->base_ = base;
  f->var_ = var;
  f->gen_name_ = var;
  f->p_ = base->characteristic();
  f->quad_depth_ = base->quad_depth_;
  f->name_ = base->str() + "((" + var + "))";
  return f;
}

FieldPtr Field::quad(const FieldPtr& base, const Elem& d_in) {
  Elem d = base->embed(d_in);
  if (d.is_zero()) throw Error(Errc::ZeroInput, "quadratic extension by 0");
  if (is_square(d)) throw Error(Errc::PreconditionViolated, d.str() + " is a square in " + base->str());
  auto f = std::make_shared<Field>(Token{}, FieldKind::QuadExt);
  f->base_ = base;
  f->d_ = d;
  f->quad_depth_ = base->quad_depth_ + 1;
  f->gen_name_ = f->quad_depth_ == 1 ? "delta" : "delta" + std::to_string(f->quad_depth_);
  f->name_ = base->str() + "(sqrt " + d.str() + ")";
  switch (base->kind()) {
    case FieldKind::Rationals: {
      f->flavor_ = QuadFlavor::NumberField;
      const mpq_class& q = d.rational();
      f->nf_m_ = squarefree_part(q.get_num() * q.get_den());
      mpq_class c2 = q / mpq_class(f->nf_m_);
      mpz_class cn, cd;
      mpz_sqrt(cn.get_mpz_t(), c2.get_num().get_mpz_t());
      mpz_sqrt(cd.get_mpz_t(), c2.get_den().get_mpz_t());
      f->nf_c_ = mpq_class(cn, cd);
      f->nf_c_.canonicalize();
      break;
    }
    case FieldKind::Reals: f->flavor_ = QuadFlavor::Complex; break;
    case FieldKind::PrimeField: {
      f->flavor_ = QuadFlavor::FiniteQuad;
      f->p_ = base->prime();
      const std::uint64_t p = base->prime();
      std::uint64_t dd = d.residue_mod_p();
      for (std::uint64_t a = 0; a < p; ++a) {
        // norm(a + delta) = a^2 - d
        std::uint64_t n = (mulmod(a, a, p) + p - dd) % p;
        if (n != 0 && !fp_is_square(n, p)) {
          f->nonsquare_a_ = a;
          break;
        }
      }
      break;
    }
    case FieldKind::Laurent:
    case FieldKind::QuadExt: {
      if (!base->is_valued())
        throw Error(Errc::UnsupportedTower, "quadratic extension of " + base->str() + " is outside the supported class");
      f->flavor_ = QuadFlavor::Valued;
      f->p_ = base->characteristic();
      f->vd_ = base->valuation(d);
      f->ud_ = base->unit_part(d);
      f->ramified_ = (f->vd_ % 2) != 0;
      f->half_ = f->ramified_ ? (f->vd_ - 1) / 2 : f->vd_ / 2;
      f->pi_inv_half_ = base->uniformizer().pow(-f->half_);
      if (f->ramified_) {
        f->residue_ = base->residue_field();
      } else {
        try {
          f->residue_ = Field::quad(base->residue_field(), base->residue(f->ud_));
        } catch (const Error& e) {
          f->residue_error_ = e.what();
        }
      }
      break;
    }
  }
  return f;
}

std::uint64_t Field::characteristic() const {
  if (kind_ == FieldKind::PrimeField) return p_;
  if (base_) return base_->characteristic();
  return 0;
}

Elem Field::zero() const { return from_int(0); }
Elem Field::one() const { return from_int(1); }
Elem Field::from_int(long v) const { return from_rational(mpq_class(v)); }

Elem Field::from_rational(const mpq_class& q) const {
  switch (kind_) {
    case FieldKind::Rationals:
    case FieldKind::Reals: {
      auto r = std::make_shared<Rep>();
      r->v = q;
      return Elem(shared_from_this(), r);
    }
    case FieldKind::PrimeField: return make_prime(fp_reduce(q, p_));
    case FieldKind::QuadExt: return make_quad(base_->from_rational(q), base_->zero());
    case FieldKind::Laurent: {
      Elem c = base_->from_rational(q);
      if (c.is_zero()) return make_laurent(0, {}, {base_->one()});
      return make_laurent(0, {c}, {base_->one()});
    }
  }
  return {};
}

Elem Field::make_prime(std::uint64_t r) const {
  auto rep = std::make_shared<Rep>();
  rep->v = r % p_;
  return Elem(shared_from_this(), rep);
}

Elem Field::make_quad(const Elem& a, const Elem& b) const {
  auto rep = std::make_shared<Rep>();
  rep->v = Rep::Quad{base_->embed(a), base_->embed(b)};
  return Elem(shared_from_this(), rep);
}

Elem Field::make_laurent(long shift, Poly num, Poly den) const {
  for (auto& c : num) c = base_->embed(c);
  for (auto& c : den) c = base_->embed(c);
  trim(num);
  trim(den);
  if (den.empty()) throw Error(Errc::DivisionByZero, "zero denominator in " + name_);
  auto rep = std::make_shared<Rep>();
  Rep::Laur l;
  if (num.empty()) {
    l.den = {base_->one()};
    rep->v = std::move(l);
    return Elem(shared_from_this(), rep);
  }
  std::size_t k = 0;
  while (num[k].is_zero()) ++k;
  if (k) num.erase(num.begin(), num.begin() + static_cast<long>(k));
  shift += static_cast<long>(k);
  k = 0;
  while (den[k].is_zero()) ++k;
  if (k) den.erase(den.begin(), den.begin() + static_cast<long>(k));
  shift -= static_cast<long>(k);
  if (den.size() > 1 && num.size() > 1) {
    Poly g = pgcd(num, den);
    if (g.size() > 1) {
      num = pexact_div(num, g);
      den = pexact_div(den, g);
    }
  }
  if (!den[0].is_one()) {
    Elem c = den[0].inverse();
    num = pscale(num, c);
    den = pscale(den, c);
  }
  l.shift = shift;
  l.num = std::move(num);
  l.den = std::move(den);
  rep->v = std::move(l);
  return Elem(shared_from_this(), rep);
}

Elem Field::gen() const {
  if (kind_ == FieldKind::QuadExt) return make_quad(base_->zero(), base_->one());
  if (kind_ == FieldKind::Laurent) return make_laurent(1, {base_->one()}, {base_->one()});
  throw Error(Errc::PreconditionViolated, name_ + " has no generator");
}

bool Field::contains_subfield(const Field& sub) const {
  for (const Field* f = this; f; f = f->base_.get())
    if (f->same_as(sub)) return true;
  return false;
}

Elem Field::embed(const Elem& x) const {
  if (!x.valid()) throw Error(Errc::PreconditionViolated, "uninitialised element");
  if (x.field().get() == this || x.field()->same_as(*this)) {
    if (x.field().get() == this) return x;
    // Structurally equal but distinct descriptor objects: rebuild on this one.
    switch (kind_) {
      case FieldKind::Rationals:
      case FieldKind::Reals: return from_rational(x.rational());
      case FieldKind::PrimeField: return make_prime(x.residue_mod_p());
      case FieldKind::QuadExt: return make_quad(x.re(), x.im());
      case FieldKind::Laurent:
        return make_laurent(x.laurent_shift(), x.laurent_num(), x.laurent_den());
    }
  }
  if (!base_ || !contains_subfield(*x.field()))
    throw Error(Errc::FieldMismatch, x.field()->str() + " is not a subfield of " + name_);
  Elem b = base_->embed(x);
  if (kind_ == FieldKind::QuadExt) return make_quad(b, base_->zero());
  if (b.is_zero()) return zero();
  return make_laurent(0, {b}, {base_->one()});
}

bool Field::is_valued() const {
  return kind_ == FieldKind::Laurent || (kind_ == FieldKind::QuadExt && flavor_ == QuadFlavor::Valued);
}

long Field::valuation(const Elem& x_in) const {
  if (!is_valued()) throw Error(Errc::PreconditionViolated, name_ + " is not a valued field");
  Elem x = embed(x_in);
  if (x.is_zero()) throw Error(Errc::ZeroInput, "valuation of 0");
  if (kind_ == FieldKind::Laurent) return x.laurent_shift();
  const long e = ramified_ ? 2 : 1;
  const long vdelta = ramified_ ? vd_ : half_;
  long v = LONG_MAX;
  if (!x.re().is_zero()) v = e * base_->valuation(x.re());
  if (!x.im().is_zero()) v = std::min(v, e * base_->valuation(x.im()) + vdelta);
  return v;
}

Elem Field::uniformizer() const {
  if (kind_ == FieldKind::Laurent) return gen();
  if (!is_valued()) throw Error(Errc::PreconditionViolated, name_ + " is not a valued field");
  if (ramified_) return make_quad(base_->zero(), pi_inv_half_);
  return make_quad(base_->uniformizer(), base_->zero());
}

Elem Field::unit_part(const Elem& x_in) const {
  Elem x = embed(x_in);
  long v = valuation(x);
  if (kind_ == FieldKind::Laurent) return make_laurent(0, x.laurent_num(), x.laurent_den());
  if (v == 0) return x;
  return x * uniformizer().pow(-v);
}

Elem Field::residue(const Elem& u_in) const {
  Elem u = embed(u_in);
  if (valuation(u) != 0) throw Error(Errc::PreconditionViolated, "residue of a non-unit " + u.str());
  if (kind_ == FieldKind::Laurent) return u.laurent_num()[0];
  FieldPtr k = residue_field();
  if (ramified_) return k->embed(base_->residue(base_->unit_part(u.re())));
  const FieldPtr& kb = base_->residue_field();
  Elem ra = kb->zero(), rb = kb->zero();
  if (!u.re().is_zero() && base_->valuation(u.re()) == 0) ra = base_->residue(u.re());
  if (!u.im().is_zero()) {
    Elem c = u.im() * base_->uniformizer().pow(half_);
    if (base_->valuation(c) == 0) rb = base_->residue(c);
  }
  return k->make_quad(ra, rb);
}

Elem Field::lift(const Elem& r_in) const {
  if (kind_ == FieldKind::Laurent) {
    Elem r = base_->embed(r_in);
    return make_laurent(0, {r}, {base_->one()});
  }
  FieldPtr k = residue_field();
  Elem r = k->embed(r_in);
  if (ramified_) return make_quad(base_->lift(r), base_->zero());
  Elem a = r.re().is_zero() ? base_->zero() : base_->lift(r.re());
  Elem b = r.im().is_zero() ? base_->zero() : base_->lift(r.im()) * pi_inv_half_;
  return make_quad(a, b);
}

FieldPtr Field::residue_field() const {
  if (kind_ == FieldKind::Laurent) return base_;
  if (!is_valued()) throw Error(Errc::PreconditionViolated, name_ + " is not a valued field");
  if (!residue_) throw Error(Errc::UnsupportedTower, "residue field of " + name_ + ": " + residue_error_);
  return residue_;
}

Elem Field::finite_nonsquare() const {
  if (kind_ == FieldKind::PrimeField) return make_prime(nonsquare_a_);
  if (flavor_ == QuadFlavor::FiniteQuad) return make_quad(base_->make_prime(nonsquare_a_), base_->one());
  throw Error(Errc::PreconditionViolated, name_ + " is not a finite field");
}

bool is_finite_ground(const Field& F) {
  return F.kind() == FieldKind::PrimeField || F.flavor() == QuadFlavor::FiniteQuad;
}

// ---- squares -----------------------------------------------------------------

namespace {

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (!is_rational_square(q)) return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num().get_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den().get_mpz_t());
  mpq_class r(n, d);
  r.canonicalize();
  return r;
}

std::optional<Elem> number_field_sqrt(const Elem& x) {
  const Field& L = *x.field();
  const mpq_class& a = x.re().rational();
  const mpq_class& b = x.im().rational();
  const mpq_class& d = L.quad_d().rational();
  const FieldPtr& Q = L.base();
  if (b == 0) {
    if (auto r = rational_sqrt(a)) return L.make_quad(Q->from_rational(*r), Q->zero());
    if (auto r = rational_sqrt(a / d)) return L.make_quad(Q->zero(), Q->from_rational(*r));
    return std::nullopt;
  }
  auto n = rational_sqrt(a * a - d * b * b);
  if (!n) return std::nullopt;
  for (int s : {1, -1}) {
    mpq_class u2 = (a + s * *n) / 2;
    auto u = rational_sqrt(u2);
    if (!u || *u == 0) continue;
    mpq_class v = b / (2 * *u);
    Elem y = L.make_quad(Q->from_rational(*u), Q->from_rational(v));
    if (y * y == x) return y;
  }
  return std::nullopt;
}

// Polynomial square root read off from the low-degree end; exact or nothing.
std::optional<Poly> poly_sqrt(const Poly& p) {
  if (p.empty() || (p.size() - 1) % 2) return std::nullopt;
  auto r0 = try_sqrt(p[0]);
  if (!r0) return std::nullopt;
  std::size_t n = (p.size() - 1) / 2;
  Poly r{*r0};
  Elem two_r0 = *r0 + *r0;
  for (std::size_t k = 1; k <= n; ++k) {
    Elem c = p[k];
    for (std::size_t i = 1; i < k; ++i) c = c - r[i] * r[k - i];
    r.push_back(c / two_r0);
  }
  if (!peq(pmul(r, r), p)) return std::nullopt;
  return r;
}

std::optional<Elem> laurent_sqrt(const Elem& x) {
  const Field& F = *x.field();
  if (x.laurent_shift() % 2) return std::nullopt;
  auto n = poly_sqrt(x.laurent_num());
  if (!n) return std::nullopt;
  auto d = poly_sqrt(x.laurent_den());
  if (!d) return std::nullopt;
  return F.make_laurent(x.laurent_shift() / 2, *n, *d);
}

// Tonelli-Shanks in F_{p^2}.
std::optional<Elem> finite_quad_sqrt(const Elem& x) {
  if (!is_square(x)) return std::nullopt;
  const Field& F = *x.field();
  long q = static_cast<long>(F.prime() * F.prime());
  long t = q - 1, s = 0;
  while (t % 2 == 0) {
    t /= 2;
    ++s;
  }
  Elem z = F.finite_nonsquare().pow(t);
  Elem r = x.pow((t + 1) / 2), b = x.pow(t);
  long m = s;
  while (!b.is_one()) {
    long i = 0;
    for (Elem c = b; !c.is_one(); c = c * c) ++i;
    Elem g = z;
    for (long k = 0; k < m - i - 1; ++k) g = g * g;
    r = r * g;
    z = g * g;
    b = b * z;
    m = i;
  }
  return r;
}

}  // namespace

bool is_square(const Elem& x) {
  if (x.is_zero()) throw Error(Errc::ZeroInput, "is_square(0)");
  const Field& F = *x.field();
  switch (F.kind()) {
    case FieldKind::Rationals: return is_rational_square(x.rational());
    case FieldKind::Reals: return sgn(x.rational()) > 0;
    case FieldKind::PrimeField: return fp_is_square(x.residue_mod_p(), F.prime());
    case FieldKind::Laurent: break;
    case FieldKind::QuadExt:
      switch (F.flavor()) {
        case QuadFlavor::Complex: return true;
        case QuadFlavor::FiniteQuad: {
          const std::uint64_t p = F.prime();
          Elem n = x.re() * x.re() - F.quad_d() * x.im() * x.im();
          return fp_is_square(n.residue_mod_p(), p);
        }
        case QuadFlavor::NumberField: return number_field_sqrt(x).has_value();
        default: break;
      }
  }
  long v = F.valuation(x);
  if (v % 2 != 0) return false;
  return is_square(F.residue(F.unit_part(x)));
}

std::optional<Elem> try_sqrt(const Elem& x) {
  if (x.is_zero()) return x;
  const Field& F = *x.field();
  switch (F.kind()) {
    case FieldKind::Rationals:
    case FieldKind::Reals:
      if (auto r = rational_sqrt(x.rational())) return F.from_rational(*r);
      return std::nullopt;
    case FieldKind::PrimeField: {
      if (!is_square(x)) return std::nullopt;
      mpz_class r = sqrt_mod_prime(mpz_class(std::to_string(x.residue_mod_p())),
                                   mpz_class(std::to_string(F.prime())));
      return F.make_prime(std::stoull(r.get_str()));
    }
    case FieldKind::QuadExt:
      if (F.flavor() == QuadFlavor::NumberField) return number_field_sqrt(x);
      if (F.flavor() == QuadFlavor::FiniteQuad) return finite_quad_sqrt(x);
      return std::nullopt;
    case FieldKind::Laurent: return laurent_sqrt(x);
    default: return std::nullopt;
  }
}

bool same_square_class(const Elem& x, const Elem& y) { return is_square(x / y); }

bool SquareClass::same_class(const Elem& other) const { return same_square_class(rep, other); }

SquareClass square_class(const Elem& x) {
  if (x.is_zero()) throw Error(Errc::ZeroInput, "square_class(0)");
  const Field& F = *x.field();
  switch (F.kind()) {
    case FieldKind::Rationals: {
      const mpq_class& q = x.rational();
      return {F.from_rational(mpq_class(squarefree_part(q.get_num() * q.get_den())))};
    }
    case FieldKind::Reals: return {F.from_int(sgn(x.rational()))};
    case FieldKind::PrimeField: return {is_square(x) ? F.one() : F.finite_nonsquare()};
    case FieldKind::QuadExt:
      switch (F.flavor()) {
        case QuadFlavor::Complex: return {F.one()};
        case QuadFlavor::FiniteQuad: return {is_square(x) ? F.one() : F.finite_nonsquare()};
        case QuadFlavor::NumberField: {
          if (x.im().is_zero()) {
            const mpq_class& q = x.re().rational();
            return {F.from_rational(mpq_class(squarefree_part(q.get_num() * q.get_den())))};
          }
          // Divide out the largest rational square dividing the content.
          const mpq_class &a = x.re().rational(), &b = x.im().rational();
          mpz_class gn, ld;
          mpz_gcd(gn.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
          mpz_lcm(ld.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
          mpz_class sq = 1;
          for (const auto& [p, e] : factor(gn))
            for (int i = 0; i < e / 2; ++i) sq *= p;
          mpz_class sq_den = 1;
          for (const auto& [p, e] : factor(ld)) {
            for (int i = 0; i < (e + 1) / 2; ++i) sq_den *= p;
          }
          mpq_class s(sq, sq_den);
          s.canonicalize();
          return {x * F.from_rational(1 / (s * s))};
        }
        default: break;
      }
      break;
    case FieldKind::Laurent: break;
  }
  long v = F.valuation(x);
  Elem r = F.residue(F.unit_part(x));
  Elem rep = F.lift(square_class(r).rep);
  if (v % 2 != 0) rep = rep * F.uniformizer();
  return {rep};
}

QuadExtResult make_quad_ext(const FieldPtr& F, const Elem& d_in) {
  Elem d = F->embed(d_in);
  if (d.is_zero()) throw Error(Errc::ZeroInput, "make_quad_ext with d = 0");
  if (is_square(d)) return {true, nullptr};
  if (F->kind() == FieldKind::QuadExt && F->flavor() != QuadFlavor::Valued)
    throw Error(Errc::UnsupportedTower,
                "quadratic extension of " + F->str() + " would leave the supported tower class");
  return {false, Field::quad(F, d)};
}

namespace {

std::string uniformizer_name(const Field& F) {
  if (F.kind() == FieldKind::Laurent) return F.var();
  if (F.ramified()) return "s_" + uniformizer_name(*F.base());
  return uniformizer_name(*F.base());
}

}  // namespace

FieldPtr normalize_tower(const FieldPtr& F) {
  switch (F->kind()) {
    case FieldKind::Rationals:
    case FieldKind::Reals:
    case FieldKind::PrimeField: return F;
    case FieldKind::Laurent: return Field::laurent(normalize_tower(F->base()), F->var());
    case FieldKind::QuadExt: break;
  }
  switch (F->flavor()) {
    case QuadFlavor::Complex: return Field::quad(Field::reals(), Field::reals()->from_int(-1));
    case QuadFlavor::FiniteQuad: return F;
    case QuadFlavor::NumberField:
      return Field::quad(Field::rationals(), Field::rationals()->from_rational(mpq_class(F->nf_m())));
    default: break;
  }
  return Field::laurent(normalize_tower(F->residue_field()), uniformizer_name(*F));
}

// ---- square-class enumeration ---------------------------------------------------

std::vector<Elem> square_class_atoms(const FieldPtr& F, const std::vector<Elem>& seeds_in) {
  std::vector<Elem> seeds;
  for (const auto& s : seeds_in) {
    Elem e = F->embed(s);
    if (!e.is_zero()) seeds.push_back(e);
  }
  std::vector<Elem> atoms;
  auto add_rational_primes = [&](const mpq_class& q, std::vector<mpz_class>& primes) {
    for (const mpz_class* part : {&q.get_num(), &q.get_den()}) {
      if (abs(*part) <= 1) continue;
      for (const auto& p : prime_divisors(*part)) primes.push_back(p);
    }
  };
  switch (F->kind()) {
    case FieldKind::Rationals: {
      std::vector<mpz_class> primes{2};
      for (const auto& s : seeds) add_rational_primes(s.rational(), primes);
      std::sort(primes.begin(), primes.end());
      primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
      atoms.push_back(F->from_int(-1));
      for (const auto& p : primes) atoms.push_back(F->from_rational(mpq_class(p)));
      break;
    }
    case FieldKind::Reals: atoms.push_back(F->from_int(-1)); break;
    case FieldKind::PrimeField: atoms.push_back(F->finite_nonsquare()); break;
    case FieldKind::QuadExt:
      if (F->flavor() == QuadFlavor::Complex) break;
      if (F->flavor() == QuadFlavor::FiniteQuad) {
        atoms.push_back(F->finite_nonsquare());
        break;
      }
      if (F->flavor() == QuadFlavor::NumberField) {
        std::vector<mpz_class> primes{2};
        for (const auto& p : prime_divisors(F->nf_m())) primes.push_back(p);
        for (const auto& s : seeds) {
          Elem n = s.re() * s.re() - F->quad_d() * s.im() * s.im();
          add_rational_primes(n.rational(), primes);
        }
        std::sort(primes.begin(), primes.end());
        primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
        atoms.push_back(F->from_int(-1));
        atoms.push_back(F->gen());
        for (const auto& p : primes) atoms.push_back(F->from_rational(mpq_class(p)));
        for (const auto& s : seeds) atoms.push_back(square_class(s).rep);
        break;
      }
      [[fallthrough]];
    case FieldKind::Laurent: {
      atoms.push_back(F->uniformizer());
      FieldPtr k = F->residue_field();
      std::vector<Elem> residues;
      for (const auto& s : seeds) residues.push_back(F->residue(F->unit_part(s)));
      for (const auto& a : square_class_atoms(k, residues)) atoms.push_back(F->lift(a));
      break;
    }
  }
  std::vector<Elem> out;
  for (const auto& a : atoms)
    if (!is_square(a)) out.push_back(a);
  return out;
}

std::vector<Elem> square_class_products(const FieldPtr& F, const std::vector<Elem>& atoms,
                                        std::size_t limit) {
  // Greedy independent subset, then the full span tagged with subset masks.
  std::vector<std::pair<unsigned, Elem>> span{{0u, F->one()}};
  unsigned bit = 0;
  for (const auto& a_in : atoms) {
    if (span.size() * 2 > limit) break;
    Elem a = F->embed(a_in);
    bool dependent = false;
    for (const auto& [m, s] : span) {
      if (is_square(a * s)) {
        dependent = true;
        break;
      }
    }
    if (dependent) continue;
    std::size_t n = span.size();
    for (std::size_t i = 0; i < n; ++i) span.emplace_back(span[i].first | (1u << bit), span[i].second * a);
    ++bit;
  }
  std::stable_sort(span.begin(), span.end(), [](const auto& x, const auto& y) {
    int px = __builtin_popcount(x.first), py = __builtin_popcount(y.first);
    return px != py ? px < py : x.first < y.first;
  });
  std::vector<Elem> out;
  for (auto& [m, e] : span) out.push_back(e);
  return out;
}

std::vector<Elem> small_elements(const FieldPtr& F, std::size_t count) {
  std::vector<Elem> out;
  switch (F->kind()) {
    case FieldKind::Rationals:
    case FieldKind::Reals: {
      for (long h = 1; out.size() < count; ++h) {
        for (long q = 1; q <= h && out.size() < count; ++q) {
          for (long p : {h, q}) {
            long den = (p == h) ? q : h;
            if (p == h && q == h && h != 1) continue;
            mpz_class g;
            mpz_gcd_ui(g.get_mpz_t(), mpz_class(p).get_mpz_t(), static_cast<unsigned long>(den));
            if (g != 1) continue;
            out.push_back(F->from_rational(mpq_class(p, den)));
            out.push_back(F->from_rational(mpq_class(-p, den)));
            if (p == h && q == h) break;
          }
        }
      }
      break;
    }
    case FieldKind::PrimeField:
      for (std::uint64_t r = 1; r < F->prime() && out.size() < count; ++r) out.push_back(F->make_prime(r));
      break;
    case FieldKind::QuadExt:
    case FieldKind::Laurent: {
      std::size_t base_count = 4;
      while (base_count * base_count < count) base_count *= 2;
      std::vector<Elem> b{F->base()->zero()};
      for (auto& e : small_elements(F->base(), base_count)) b.push_back(e);
      Elem g = F->gen();
      for (std::size_t s = 0; out.size() < count && s < 2 * b.size(); ++s) {
        for (std::size_t i = 0; i <= s && out.size() < count; ++i) {
          std::size_t j = s - i;
          if (i >= b.size() || j >= b.size()) continue;
          Elem e = F->embed(b[i]) + F->embed(b[j]) * g;
          if (!e.is_zero()) out.push_back(e);
        }
      }
      break;
    }
  }
  if (out.size() > count) out.resize(count);
  return out;
}

}  // namespace qfb
