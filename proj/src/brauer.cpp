#include "qfb/brauer.hpp"

#include "qfb/local.hpp"

namespace qfb {

namespace {

bool is_global(const Field& F) {
  return F.kind() == FieldKind::Rationals ||
         (F.kind() == FieldKind::QuadExt && F.flavor() == QuadFlavor::NumberField);
}

bool symbol_split_cheap(const Elem& a, const Elem& b) {
  return is_square(a) || is_square(b) || is_square(-(a * b));
}

// Valued field: class = C0 + (w, pi) with C0 unramified; returns (residue of C0, residue of w).
std::pair<BrauerClass2, Elem> residue_split(const BrauerClass2& c) {
  const Field& F = *c.field;
  FieldPtr k = F.residue_field();
  BrauerClass2 c0(k, {});
  Elem w = k->one();
  const Elem m1 = k->from_int(-1);
  for (const auto& [x, y] : c.symbols) {
    long vx = F.valuation(x), vy = F.valuation(y);
    Elem ux = F.residue(F.unit_part(x)), uy = F.residue(F.unit_part(y));
    // (pi^vx ux, pi^vy uy) = (ux, uy) + (ux^vy uy^vx (-1)^(vx vy), pi)
    c0.symbols.emplace_back(ux, uy);
    if (vy & 1) w *= ux;
    if (vx & 1) w *= uy;
    if ((vx & 1) && (vy & 1)) w *= m1;
  }
  return {c0, w};
}

}  // namespace

BrauerClass2::BrauerClass2(FieldPtr F, std::vector<std::pair<Elem, Elem>> s) : field(std::move(F)) {
  for (auto& [a, b] : s) {
    Elem x = field->embed(a), y = field->embed(b);
    if (x.is_zero() || y.is_zero()) throw Error(Errc::ZeroInput, "zero quaternion slot");
    symbols.emplace_back(x, y);
  }
}

BrauerClass2 BrauerClass2::operator+(const BrauerClass2& o) const {
  BrauerClass2 r = *this;
  for (const auto& [a, b] : o.symbols) r.symbols.emplace_back(field->embed(a), field->embed(b));
  return r;
}

BrauerClass2 BrauerClass2::restrict_to(const FieldPtr& L) const {
  BrauerClass2 r;
  r.field = L;
  for (const auto& [a, b] : symbols) r.symbols.emplace_back(L->embed(a), L->embed(b));
  return r;
}

std::string BrauerClass2::str() const {
  if (symbols.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) s += " + ";
    s += "(" + symbols[i].first.str() + ", " + symbols[i].second.str() + ")";
  }
  return s;
}

bool is_trivial(const BrauerClass2& c) { return index(c) == 1; }

long index(const BrauerClass2& c) {
  const Field& F = *c.field;
  if (c.symbols.empty()) return 1;
  if (is_global(F)) return local_invariants(F, c.symbols).trivial() ? 1 : 2;
  if (F.kind() == FieldKind::Reals) {
    int s = 1;
    for (const auto& [a, b] : c.symbols)
      if (sgn(a.rational()) < 0 && sgn(b.rational()) < 0) s = -s;
    return s < 0 ? 2 : 1;
  }
  if (is_finite_ground(F) || F.flavor() == QuadFlavor::Complex) return 1;
  auto [c0, w] = residue_split(c);
  if (is_square(w)) return index(c0);
  QuadExtResult k2 = make_quad_ext(c0.field, w);
  return 2 * index(c0.restrict_to(k2.field));
}

bool same_class(const BrauerClass2& x, const BrauerClass2& y) { return is_trivial(x + y); }

BrauerClass2 simplified(const BrauerClass2& c) {
  std::vector<std::pair<Elem, Elem>> s;
  for (const auto& [x, y] : c.symbols)
    if (!symbol_split_cheap(x, y)) s.emplace_back(square_class(x).rep, square_class(y).rep);
  for (bool again = true; again;) {
    again = false;
    for (std::size_t i = 0; i < s.size() && !again; ++i) {
      for (std::size_t j = i + 1; j < s.size() && !again; ++j) {
        // Orient both symbols so that a shared slot comes first.
        for (int k = 0; k < 4 && !again; ++k) {
          auto a = s[i], b = s[j];
          if (k & 1) std::swap(a.first, a.second);
          if (k & 2) std::swap(b.first, b.second);
          if (!same_square_class(a.first, b.first)) continue;
          s[i] = {a.first, square_class(a.second * b.second).rep};
          s.erase(s.begin() + static_cast<long>(j));
          again = true;
        }
      }
      if (again && symbol_split_cheap(s[i].first, s[i].second)) s.erase(s.begin() + static_cast<long>(i));
    }
  }
  BrauerClass2 r(c.field, s);
  try {
    if (!r.symbols.empty() && is_trivial(r)) r.symbols.clear();
  } catch (const Error& e) {
    if (e.code() != Errc::UnsupportedTower) throw;
  }
  return r;
}

QuadraticForm albert_form(const BrauerClass2& c) {
  const FieldPtr& F = c.field;
  std::vector<std::pair<Elem, Elem>> s;
  if (c.symbols.size() > 2) {
    for (const auto& p : c.symbols)
      if (!symbol_split_cheap(p.first, p.second)) s.push_back(p);
  } else {
    s = c.symbols;
  }
  if (s.size() > 2) throw Error(Errc::WrongShape, "Albert form needs at most two symbols, got " + c.str());
  while (s.size() < 2) s.emplace_back(F->one(), F->one());
  const auto& [a, b] = s[0];
  const auto& [x, y] = s[1];
  return QuadraticForm(F, {a, b, -(a * b), -x, -y, x * y});
}

long index_via_albert(const BrauerClass2& c) {
  QuadraticForm q = albert_form(c);
  if (is_hyperbolic(q)) return 1;
  return is_isotropic(q) ? 2 : 4;
}

BrauerClass2 clifford_invariant(const QuadraticForm& phi) {
  const std::size_t n = phi.dim();
  if (n == 0 || n % 2) throw Error(Errc::PreconditionViolated, "Clifford invariant needs even dimension");
  if (!has_trivial_discriminant(phi))
    throw Error(Errc::PreconditionViolated, "Clifford invariant needs trivial signed discriminant");
  const FieldPtr& F = phi.field();
  BrauerClass2 c(F, {});
  const auto& a = phi.entries();
  // Hasse symbol, then the correction by n mod 8 (d = det):
  // 0: none, 2: (-1, -d), 4: (-1, -1), 6: (-1, d).
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!is_square(a[i]) && !is_square(a[j])) c.symbols.emplace_back(a[i], a[j]);
  Elem d = F->one();
  for (const auto& x : a) d *= x;
  const Elem m1 = F->from_int(-1);
  switch (n % 8) {
    case 2: c.symbols.emplace_back(m1, -d); break;
    case 4: c.symbols.emplace_back(m1, m1); break;
    case 6: c.symbols.emplace_back(m1, d); break;
    default: break;
  }
  return c;
}

bool is_GP3(const QuadraticForm& phi) {
  return phi.dim() == 8 && has_trivial_discriminant(phi) && is_trivial(clifford_invariant(phi));
}

BrauerClass2 corestriction(const EtaleBrauerClass& c) {
  const EtaleExtension& E = c.ext;
  if (E.is_split()) return c.first.restrict_to(E.base()) + c.second.restrict_to(E.base());
  const FieldPtr& L = E.field();
  if (!c.first.field->same_as(*L)) throw Error(Errc::FieldMismatch, c.first.field->str() + " vs " + L->str());
  if (c.first.symbols.empty()) return BrauerClass2(E.base(), {});
  // psi = sum of <<a_i, b_i>> has Clifford invariant sum (a_i, b_i).
  QuadraticForm psi = QuadraticForm::empty(L);
  for (const auto& [a, b] : c.first.symbols) psi = psi + pfister(L, {a, b});
  return clifford_invariant(transfer(E, psi));
}

namespace {

bool in_base(const Elem& x) { return x.im().is_zero(); }

// Rewrite (alpha, beta) over F(sqrt d) as (alpha', b) with b in F.
std::optional<std::pair<Elem, Elem>> rewrite_symbol(const Elem& alpha, const Elem& beta) {
  const FieldPtr& L = alpha.field();
  if (in_base(beta)) return std::make_pair(alpha, beta);
  if (in_base(alpha)) return std::make_pair(beta, alpha);
  Elem nab = -(alpha * beta);
  if (in_base(nab)) return std::make_pair(alpha, nab);  // (alpha, beta) = (alpha, -alpha beta)
  // (alpha, beta) = (alpha, beta (r - alpha)) whenever r is a square: pick r with Im = 0.
  for (int swap = 0; swap < 2; ++swap) {
    const Elem& x = swap ? beta : alpha;
    const Elem& y = swap ? alpha : beta;
    Elem r = (x * y).im() / y.im();
    if (r.is_zero() || !is_square(r)) continue;
    Elem rl = L->embed(r);
    if (rl == x) continue;
    Elem b = y * (rl - x);
    if (in_base(b)) return std::make_pair(x, b);
  }
  return std::nullopt;
}

}  // namespace

BrauerClass2 corestriction_projection(const EtaleBrauerClass& c) {
  const EtaleExtension& E = c.ext;
  if (E.is_split()) return corestriction(c);
  const FieldPtr& F = E.base();
  BrauerClass2 out(F, {});
  for (const auto& [a, b] : c.first.symbols) {
    auto r = rewrite_symbol(a, b);
    if (!r) throw Error(Errc::RewriteFailed, "no slot in the base field for (" + a.str() + ", " + b.str() + ")");
    Elem n = norm(E, {r->first, Elem()});
    out.symbols.emplace_back(n, r->second.re());
  }
  return out;
}

}  // namespace qfb
