#include "qfb/qform.hpp"

#include <algorithm>

#include "qfb/local.hpp"

namespace qfb {

namespace {

bool is_global(const Field& F) {
  return F.kind() == FieldKind::Rationals ||
         (F.kind() == FieldKind::QuadExt && F.flavor() == QuadFlavor::NumberField);
}

std::vector<Elem> without(const std::vector<Elem>& v, std::size_t i) {
  std::vector<Elem> out;
  out.reserve(v.size() - 1);
  for (std::size_t j = 0; j < v.size(); ++j)
    if (j != i) out.push_back(v[j]);
  return out;
}

Elem product(const FieldPtr& F, const std::vector<Elem>& v) {
  Elem p = F->one();
  for (const auto& x : v) p *= x;
  return p;
}

int hasse_of(const Field& F, const std::vector<Elem>& a, const Place& w) {
  int s = 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) s *= hilbert_symbol(F, a[i], a[j], w);
  return s;
}

std::vector<Place> finite_support(const FieldPtr& F, const std::vector<Elem>& a) {
  std::vector<Elem> seeds = a;
  seeds.push_back(F->from_int(-1));
  std::vector<Place> out;
  for (const auto& w : support_places(*F, seeds))
    if (!w.archimedean()) out.push_back(w);
  return out;
}

int positive_count(const Field& F, const std::vector<Elem>& a, const Place& w) {
  int n = 0;
  for (const auto& x : a) n += is_local_square(F, x, w) ? 1 : 0;
  return n;
}

// Serre's local criteria with eps = prod_{i<j} (a_i, a_j).
bool local_isotropic(const FieldPtr& F, const std::vector<Elem>& a, const Place& w) {
  const std::size_t n = a.size();
  if (n < 2) return false;
  if (w.archimedean()) {
    int pos = positive_count(*F, a, w);
    return pos > 0 && pos < static_cast<int>(n);
  }
  Elem d = product(F, a);
  if (n == 2) return is_local_square(*F, -d, w);
  if (n >= 5) return true;
  int eps = hasse_of(*F, a, w);
  const Elem m1 = F->from_int(-1);
  if (n == 3) return hilbert_symbol(*F, m1, -d, w) == eps;
  return !is_local_square(*F, d, w) || eps == hilbert_symbol(*F, m1, m1, w);
}

bool global_isotropic(const FieldPtr& F, const std::vector<Elem>& a) {
  const std::size_t n = a.size();
  if (n < 2) return false;
  if (n == 2) return is_square(-(a[0] * a[1]));
  for (const auto& w : places_above(*F, 0))
    if (!local_isotropic(F, a, w)) return false;
  if (n >= 5) return true;
  for (const auto& w : finite_support(F, a))
    if (!local_isotropic(F, a, w)) return false;
  return true;
}

// Hasse-Minkowski classification against k hyperbolic planes.
bool global_hyperbolic(const FieldPtr& F, const std::vector<Elem>& a) {
  const std::size_t n = a.size();
  if (n % 2) return false;
  if (n == 0) return true;
  const long k = static_cast<long>(n / 2);
  Elem disc = product(F, a);
  if (k % 2) disc = -disc;
  if (!is_square(disc)) return false;
  for (const auto& w : places_above(*F, 0))
    if (positive_count(*F, a, w) != k) return false;
  const Elem m1 = F->from_int(-1);
  const bool hyp_sign_odd = ((k * (k - 1) / 2) % 2) != 0;
  for (const auto& w : finite_support(F, a)) {
    int want = hyp_sign_odd ? hilbert_symbol(*F, m1, m1, w) : 1;
    if (hasse_of(*F, a, w) != want) return false;
  }
  return true;
}

int real_signature(const std::vector<Elem>& a) {
  int s = 0;
  for (const auto& x : a) s += sgn(x.rational()) > 0 ? 1 : -1;
  return s;
}

}  // namespace

// ---- QuadraticForm --------------------------------------------------------------

QuadraticForm::QuadraticForm(FieldPtr F, std::vector<Elem> entries) : F_(std::move(F)) {
  e_.reserve(entries.size());
  for (auto& x : entries) {
    Elem y = F_->embed(x);
    if (y.is_zero()) throw Error(Errc::ZeroInput, "zero diagonal entry");
    e_.push_back(std::move(y));
  }
}

QuadraticForm QuadraticForm::empty(const FieldPtr& F) {
  QuadraticForm q;
  q.F_ = F;
  return q;
}

QuadraticForm QuadraticForm::from_gram(const FieldPtr& F, std::vector<std::vector<Elem>> g) {
  const std::size_t n = g.size();
  for (auto& row : g) {
    if (row.size() != n) throw Error(Errc::WrongShape, "Gram matrix is not square");
    for (auto& x : row) x = F->embed(x);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (g[i][j] != g[j][i]) throw Error(Errc::PreconditionViolated, "Gram matrix is not symmetric");
  std::vector<Elem> diag;
  for (std::size_t i = 0; i < n; ++i) {
    if (g[i][i].is_zero()) {
      std::size_t j = i + 1;
      while (j < n && g[j][j].is_zero()) ++j;
      if (j < n) {
        std::swap(g[i], g[j]);
        for (auto& row : g) std::swap(row[i], row[j]);
      } else {
        j = i + 1;
        while (j < n && g[i][j].is_zero()) ++j;
        if (j == n) throw Error(Errc::PreconditionViolated, "singular Gram matrix");
        // e_i <- e_i + e_j gives diagonal entry 2 g_ij.
        for (std::size_t k = 0; k < n; ++k) g[i][k] += g[j][k];
        for (std::size_t k = 0; k < n; ++k) g[k][i] += g[k][j];
      }
    }
    const Elem piv = g[i][i];
    const Elem inv = piv.inverse();
    for (std::size_t r = i + 1; r < n; ++r) {
      if (g[r][i].is_zero()) continue;
      Elem f = g[r][i] * inv;
      for (std::size_t c = i; c < n; ++c) g[r][c] -= f * g[i][c];
      for (std::size_t c = i; c < n; ++c) g[c][r] = g[r][c];
    }
    diag.push_back(piv);
  }
  return QuadraticForm(F, diag);
}

QuadraticForm QuadraticForm::operator+(const QuadraticForm& o) const {
  if (!F_->same_as(*o.F_)) throw Error(Errc::FieldMismatch, F_->str() + " vs " + o.F_->str());
  QuadraticForm q = *this;
  for (const auto& x : o.e_) q.e_.push_back(F_->embed(x));
  return q;
}

QuadraticForm QuadraticForm::scaled(const Elem& c_in) const {
  Elem c = F_->embed(c_in);
  if (c.is_zero()) throw Error(Errc::ZeroInput, "scaling a form by 0");
  QuadraticForm q = *this;
  for (auto& x : q.e_) x = x * c;
  return q;
}

QuadraticForm QuadraticForm::tensor(const QuadraticForm& o) const {
  QuadraticForm q = empty(F_);
  for (const auto& x : e_)
    for (const auto& y : o.e_) q.e_.push_back(x * F_->embed(y));
  return q;
}

QuadraticForm QuadraticForm::base_change(const FieldPtr& L) const {
  QuadraticForm q = empty(L);
  for (const auto& x : e_) q.e_.push_back(L->embed(x));
  return q;
}

Elem QuadraticForm::evaluate(const std::vector<Elem>& v) const {
  if (v.size() != e_.size()) throw Error(Errc::WrongShape, "vector length does not match dimension");
  Elem s = F_->zero();
  for (std::size_t i = 0; i < v.size(); ++i) {
    Elem x = F_->embed(v[i]);
    s += e_[i] * x * x;
  }
  return s;
}

std::string QuadraticForm::str() const {
  std::string s = "<";
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) s += ", ";
    s += e_[i].str();
  }
  return s + ">";
}

// ---- invariants and decisions ---------------------------------------------------

Elem signed_discriminant_elem(const QuadraticForm& q) {
  Elem d = product(q.field(), q.entries());
  std::size_t n = q.dim();
  if ((n * (n - 1) / 2) % 2) d = -d;
  return d;
}

SquareClass signed_discriminant(const QuadraticForm& q) { return square_class(signed_discriminant_elem(q)); }

bool has_trivial_discriminant(const QuadraticForm& q) { return is_square(signed_discriminant_elem(q)); }

std::pair<QuadraticForm, QuadraticForm> springer_residues(const QuadraticForm& q) {
  const Field& F = *q.field();
  FieldPtr k = F.residue_field();
  std::vector<Elem> even, odd;
  for (const auto& x : q.entries()) {
    long v = F.valuation(x);
    Elem r = F.residue(F.unit_part(x));
    (v % 2 == 0 ? even : odd).push_back(r);
  }
  QuadraticForm a = QuadraticForm::empty(k), b = QuadraticForm::empty(k);
  if (!even.empty()) a = QuadraticForm(k, even);
  if (!odd.empty()) b = QuadraticForm(k, odd);
  return {a, b};
}

int hasse_invariant(const QuadraticForm& q, const Place& w) { return hasse_of(*q.field(), q.entries(), w); }

bool is_isotropic(const QuadraticForm& q) {
  const FieldPtr& F = q.field();
  const auto& a = q.entries();
  const std::size_t n = a.size();
  if (n < 2) return false;
  if (is_global(*F)) return global_isotropic(F, a);
  switch (F->kind()) {
    case FieldKind::Reals: return static_cast<std::size_t>(std::abs(real_signature(a))) != n;
    case FieldKind::PrimeField: return n >= 3 || is_square(-(a[0] * a[1]));
    default: break;
  }
  if (F->flavor() == QuadFlavor::Complex) return true;
  if (F->flavor() == QuadFlavor::FiniteQuad) return n >= 3 || is_square(-(a[0] * a[1]));
  auto [r1, r2] = springer_residues(q);
  return is_isotropic(r1) || is_isotropic(r2);
}

bool represents(const QuadraticForm& q, const Elem& c_in) {
  Elem c = q.field()->embed(c_in);
  if (c.is_zero()) throw Error(Errc::ZeroInput, "represents(q, 0)");
  if (q.dim() == 0) return false;
  if (q.dim() == 1) return is_square(c / q[0]);
  return is_isotropic(q + QuadraticForm(q.field(), {-c}));
}

bool is_hyperbolic(const QuadraticForm& q) {
  const FieldPtr& F = q.field();
  const auto& a = q.entries();
  const std::size_t n = a.size();
  if (n % 2) return false;
  if (n == 0) return true;
  if (is_global(*F)) return global_hyperbolic(F, a);
  Elem disc = product(F, a);
  if ((n / 2) % 2) disc = -disc;
  switch (F->kind()) {
    case FieldKind::Reals: return real_signature(a) == 0;
    case FieldKind::PrimeField: return is_square(disc);
    default: break;
  }
  if (F->flavor() == QuadFlavor::Complex) return true;
  if (F->flavor() == QuadFlavor::FiniteQuad) return is_square(disc);
  auto [r1, r2] = springer_residues(q);
  return is_hyperbolic(r1) && is_hyperbolic(r2);
}

bool is_isometric(const QuadraticForm& q, const QuadraticForm& r) {
  if (!q.field()->same_as(*r.field())) throw Error(Errc::FieldMismatch, q.field()->str() + " vs " + r.field()->str());
  if (q.dim() != r.dim()) return false;
  return is_hyperbolic(q + (-r));
}

// ---- constructive splitting --------------------------------------------------------

namespace {

std::vector<Elem> witness_candidates(const FieldPtr& F, const WitnessBounds& b) {
  std::vector<Elem> xs = small_elements(F, b.small_elements);
  if (F->is_valued()) {
    Elem pi = F->uniformizer();
    std::vector<Elem> base = xs;
    for (int k = 1; k <= b.uniformizer_shift; ++k) {
      Elem up = pi.pow(k), down = pi.pow(-k);
      for (const auto& x : base) {
        xs.push_back(x * up);
        xs.push_back(x * down);
      }
    }
  }
  return xs;
}

}  // namespace

QuadraticForm pull_value(const QuadraticForm& q, const Elem& c_in, const WitnessBounds& b) {
  const FieldPtr& F = q.field();
  Elem c = F->embed(c_in);
  if (!represents(q, c)) throw Error(Errc::PreconditionViolated, q.str() + " does not represent " + c.str());
  const auto& a = q.entries();
  const std::size_t n = a.size();
  if (n == 1) return QuadraticForm::empty(F);
  // A binary form representing c is <c, c * det>.
  if (n == 2) return QuadraticForm(F, {square_class(a[0] * a[1] * c).rep});
  for (std::size_t i = 0; i < n; ++i)
    if (is_square(c / a[i])) return QuadraticForm(F, without(a, i));
  for (std::size_t i = 0; i < n; ++i) {
    QuadraticForm rest(F, without(a, i));
    if (represents(rest, c)) return QuadraticForm(F, {a[i]}) + pull_value(rest, c, b);
  }
  // Find y in D(rest) with c in D(<a_i, y>); then <a_i, y> ~= <c, a_i y c>.
  // y = c - a_i x^2 puts c in D(<a_i, y>) for free.
  std::vector<QuadraticForm> rests;
  for (std::size_t i = 0; i < n; ++i) rests.emplace_back(F, without(a, i));
  for (const auto& x : witness_candidates(F, b)) {
    for (std::size_t i = 0; i < n; ++i) {
      Elem y = c - a[i] * x * x;
      if (y.is_zero() || !represents(rests[i], y)) continue;
      return QuadraticForm(F, {square_class(a[i] * y * c).rep}) + pull_value(rests[i], y, b);
    }
  }
  // x = k / a_i makes y = (a_i c - k^2) / a_i, which reaches classes the small x miss.
  for (long k = 1; k <= 256; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      Elem x = F->from_int(k) / a[i];
      Elem y = c - a[i] * x * x;
      if (y.is_zero() || !represents(rests[i], y)) continue;
      return QuadraticForm(F, {square_class(a[i] * y * c).rep}) + pull_value(rests[i], y, b);
    }
  }
  std::vector<Elem> seeds = a;
  seeds.push_back(c);
  for (const auto& y : square_class_products(F, square_class_atoms(F, seeds), 64)) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!represents(QuadraticForm(F, {a[i], y}), c) || !represents(rests[i], y)) continue;
      return QuadraticForm(F, {square_class(a[i] * y * c).rep}) + pull_value(rests[i], y, b);
    }
  }
  throw Error(Errc::WitnessSearchExhausted, "no splitting of " + c.str() + " off " + q.str());
}

WittDecomposition witt_decompose(const QuadraticForm& q, const WitnessBounds& b) {
  const FieldPtr& F = q.field();
  std::vector<Elem> cur = q.entries();
  std::size_t index = 0;
  // Cancel visible pairs <x, -x y^2> first.
  for (bool again = true; again;) {
    again = false;
    for (std::size_t i = 0; i < cur.size() && !again; ++i)
      for (std::size_t j = i + 1; j < cur.size() && !again; ++j)
        if (is_square(-(cur[i] / cur[j]))) {
          cur.erase(cur.begin() + static_cast<long>(j));
          cur.erase(cur.begin() + static_cast<long>(i));
          ++index;
          again = true;
        }
  }
  while (cur.size() >= 2 && is_isotropic(QuadraticForm(F, cur))) {
    // <a> + rest isotropic forces rest to represent -a.
    Elem a = cur[0];
    QuadraticForm rest(F, without(cur, 0));
    QuadraticForm r = pull_value(rest, -a, b);
    cur = r.entries();
    ++index;
  }
  WittDecomposition w;
  w.witt_index = index;
  for (auto& x : cur) x = square_class(x).rep;
  w.kernel = cur.empty() ? QuadraticForm::empty(F) : QuadraticForm(F, cur);
  return w;
}

Similarity is_similar(const QuadraticForm& q, const QuadraticForm& r, const std::vector<Elem>& extra) {
  Similarity s;
  if (q.dim() != r.dim()) return s;
  const FieldPtr& F = q.field();
  std::vector<Elem> seeds = q.entries();
  for (const auto& x : r.entries()) seeds.push_back(x);
  for (const auto& x : extra) seeds.push_back(x);
  // A similarity factor can be moved by squares into the group generated by
  // -1 and the prime (or uniformizer/residue) data of the entries.
  for (const auto& c : square_class_products(F, square_class_atoms(F, seeds))) {
    if (is_isometric(q, r.scaled(c))) {
      s.similar = true;
      s.factor = c;
      return s;
    }
  }
  return s;
}

QuadraticForm pfister(const FieldPtr& F, const std::vector<Elem>& slots) {
  std::vector<Elem> out{F->one()};
  for (const auto& a_in : slots) {
    Elem a = F->embed(a_in);
    if (a.is_zero()) throw Error(Errc::ZeroInput, "zero Pfister slot");
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(-(out[i] * a));
  }
  return QuadraticForm(F, out);
}

std::optional<GP2Presentation> is_GP2(const QuadraticForm& psi) {
  if (psi.dim() != 4 || !has_trivial_discriminant(psi)) return std::nullopt;
  // ell^-1 psi = <1, b2, b3, b4> with b2 b3 b4 a square, so b4 ~ b2 b3.
  GP2Presentation p{psi[0], -(psi[1] / psi[0]), -(psi[2] / psi[0])};
  return p;
}

QuadraticForm pfister_factor_extract(const QuadraticForm& phi, const Elem& a_in, const WitnessBounds& b) {
  const FieldPtr& F = phi.field();
  Elem a = F->embed(a_in);
  if (a.is_zero()) throw Error(Errc::ZeroInput, "pfister_factor_extract with a = 0");
  QuadExtResult L = make_quad_ext(F, a);
  bool divisible = L.split ? is_hyperbolic(phi) : is_hyperbolic(phi.base_change(L.field));
  if (!divisible) throw Error(Errc::NotDivisible, phi.str() + " is not hyperbolic over F(sqrt " + a.str() + ")");
  if (L.split) {
    if (phi.dim() % 4) throw Error(Errc::NotDivisible, "hyperbolic form of dimension 2 mod 4");
    std::vector<Elem> q;
    for (std::size_t i = 0; i < phi.dim() / 4; ++i) {
      q.push_back(F->one());
      q.push_back(F->from_int(-1));
    }
    return QuadraticForm(F, q);
  }
  WittDecomposition w = witt_decompose(phi, b);
  std::vector<Elem> q;
  std::vector<Elem> cur = w.kernel.entries();
  std::vector<Elem> seeds = cur;
  seeds.push_back(a);
  std::vector<Elem> lambdas = cur;
  for (const auto& c : square_class_products(F, square_class_atoms(F, seeds), 256)) lambdas.push_back(c);
  for (const auto& c : small_elements(F, b.small_elements)) lambdas.push_back(c);
  while (!cur.empty()) {
    QuadraticForm k(F, cur);
    bool found = false;
    // Peel off lambda <<a>> for some represented lambda.
    std::vector<Elem> tries = cur;
    tries.insert(tries.end(), lambdas.begin(), lambdas.end());
    for (const auto& lam : tries) {
      if (!represents(k, lam)) continue;
      QuadraticForm r1 = pull_value(k, lam, b);
      if (r1.dim() == 0) continue;
      Elem target = -(a * lam);
      if (!represents(r1, target)) continue;
      QuadraticForm r2 = pull_value(r1, target, b);
      q.push_back(lam);
      cur = r2.entries();
      found = true;
      break;
    }
    if (!found) throw Error(Errc::WitnessSearchExhausted, "no <<a>>-multiple found in " + k.str());
  }
  // H + H ~= <<a>> <1, -1>; an odd number of planes would leave discriminant a.
  std::size_t h = w.witt_index;
  if (h % 2) throw Error(Errc::NotDivisible, "odd Witt index next to a <<a>>-divisible kernel");
  for (std::size_t i = 0; i < h / 2; ++i) {
    q.push_back(F->one());
    q.push_back(F->from_int(-1));
  }
  QuadraticForm out(F, q);
  if (!is_isometric(pfister(F, {a}).tensor(out), phi))
    throw Error(Errc::AssertionFailed, "<<a>> q is not isometric to the input");
  return out;
}

}  // namespace qfb
