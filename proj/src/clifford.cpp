#include "qfb/clifford.hpp"

#include <bit>
#include <functional>
#include <random>
#include <sstream>

namespace qfb {

namespace {

int popcount(std::uint32_t x) { return std::popcount(x); }

void accumulate(AlgebraElement& out, std::uint32_t key, const Elem& c) {
  if (c.is_zero()) return;
  auto it = out.find(key);
  if (it == out.end()) {
    out.emplace(key, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) out.erase(it);
  }
}

[[noreturn]] void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace

CliffordAlgebraExplicit::CliffordAlgebraExplicit(const QuadraticForm& q)
    : F_(q.field()), q_(q), n_(q.dim()) {
  if (n_ > kMaxGenerators) fail(Errc::PreconditionViolated, "Clifford algebra of dimension > 12 form");
  qprod_.assign(std::size_t{1} << n_, F_->one());
  for (std::uint32_t m = 1; m < qprod_.size(); ++m) {
    const int low = std::countr_zero(m);
    qprod_[m] = qprod_[m & (m - 1)] * q[low];
  }
}

int CliffordAlgebraExplicit::monomial_sign(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  for (std::uint32_t rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    swaps += popcount(j >= 31 ? 0u : (a >> (j + 1)));
  }
  return (swaps & 1) ? -1 : 1;
}

AlgebraElement CliffordAlgebraExplicit::scalar(const Elem& c) const {
  AlgebraElement out;
  Elem e = F_->embed(c);
  if (!e.is_zero()) out.emplace(0u, e);
  return out;
}

AlgebraElement CliffordAlgebraExplicit::gen(std::size_t i) const {
  if (i >= n_) fail(Errc::PreconditionViolated, "generator index out of range");
  return AlgebraElement{{std::uint32_t{1} << i, F_->one()}};
}

AlgebraElement CliffordAlgebraExplicit::monomial(std::uint32_t mask) const {
  if (mask >> n_) fail(Errc::PreconditionViolated, "monomial outside the algebra");
  return AlgebraElement{{mask, F_->one()}};
}

AlgebraElement CliffordAlgebraExplicit::vector(const std::vector<Elem>& v) const {
  if (v.size() != n_) fail(Errc::PreconditionViolated, "vector length differs from form dimension");
  AlgebraElement out;
  for (std::size_t i = 0; i < n_; ++i) accumulate(out, std::uint32_t{1} << i, F_->embed(v[i]));
  return out;
}

AlgebraElement CliffordAlgebraExplicit::mul(const AlgebraElement& x, const AlgebraElement& y) const {
  AlgebraElement out;
  for (const auto& [a, ca] : x) {
    for (const auto& [b, cb] : y) {
      Elem c = ca * cb;
      const std::uint32_t common = a & b;
      if (common) c *= qprod_[common];
      if (monomial_sign(a, b) < 0) c = -c;
      accumulate(out, a ^ b, c);
    }
  }
  return out;
}

AlgebraElement CliffordAlgebraExplicit::add(const AlgebraElement& x, const AlgebraElement& y) const {
  AlgebraElement out = x;
  for (const auto& [k, c] : y) accumulate(out, k, c);
  return out;
}

AlgebraElement CliffordAlgebraExplicit::sub(const AlgebraElement& x, const AlgebraElement& y) const {
  AlgebraElement out = x;
  for (const auto& [k, c] : y) accumulate(out, k, -c);
  return out;
}

AlgebraElement CliffordAlgebraExplicit::scale(const AlgebraElement& x, const Elem& c) const {
  AlgebraElement out;
  Elem e = F_->embed(c);
  if (e.is_zero()) return out;
  for (const auto& [k, v] : x) out.emplace(k, v * e);
  return out;
}

AlgebraElement CliffordAlgebraExplicit::gamma(const AlgebraElement& x) const {
  AlgebraElement out;
  for (const auto& [k, v] : x) {
    const int deg = popcount(k);
    out.emplace(k, ((deg * (deg - 1) / 2) & 1) ? -v : v);
  }
  return out;
}

bool CliffordAlgebraExplicit::is_even(const AlgebraElement& x) const {
  for (const auto& [k, v] : x) {
    (void)v;
    if (popcount(k) & 1) return false;
  }
  return true;
}

bool CliffordAlgebraExplicit::is_scalar(const AlgebraElement& x, Elem* c) const {
  if (x.empty()) {
    if (c) *c = F_->zero();
    return true;
  }
  if (x.size() != 1 || x.begin()->first != 0) return false;
  if (c) *c = x.begin()->second;
  return true;
}

std::string CliffordAlgebraExplicit::str(const AlgebraElement& x) const {
  if (x.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : x) {
    if (!first) os << " + ";
    first = false;
    os << "(" << v.str() << ")";
    for (std::size_t i = 0; i < n_; ++i)
      if (k >> i & 1) os << "*e" << (i + 1);
  }
  return os.str();
}

bool equal(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.size() != y.size()) return false;
  for (auto a = x.begin(), b = y.begin(); a != x.end(); ++a, ++b)
    if (a->first != b->first || a->second != b->second) return false;
  return true;
}

SparseVec coordinates(const AlgebraElement& x) { return x; }

AlgebraElement normalized_volume(const CliffordAlgebraExplicit& C) {
  const std::size_t n = C.generators();
  if (n == 0 || n % 2) fail(Errc::PreconditionViolated, "volume element needs even dimension");
  Elem d = signed_discriminant_elem(C.form());
  if (!is_square(d)) fail(Errc::PreconditionViolated, "signed discriminant " + d.str() + " is not a square");
  auto s = try_sqrt(d);
  if (!s) fail(Errc::NormalizationImpossible, "z^2 = " + d.str() + " has no explicit square root");
  return C.scale(C.monomial(static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1)), s->inverse());
}

AlgebraElement center_element(const CliffordAlgebraExplicit& C) {
  if (C.generators() % 4) fail(Errc::PreconditionViolated, "center element needs dimension 0 mod 4");
  AlgebraElement z = normalized_volume(C);
  Elem sq;
  if (!C.is_scalar(C.mul(z, z), &sq) || !sq.is_one()) fail(Errc::AssertionFailed, "z^2 != 1");
  for (std::size_t i = 0; i < C.generators(); ++i) {
    AlgebraElement v = C.gen(i);
    if (!equal(C.mul(v, z), C.scale(C.mul(z, v), C.field()->from_int(-1))))
      fail(Errc::AssertionFailed, "e" + std::to_string(i + 1) + " does not anticommute with z");
  }
  if (!equal(C.gamma(z), z)) fail(Errc::AssertionFailed, "gamma(z) != z");
  return z;
}

// ---- structure-constant algebras ---------------------------------------------

SparseVec StructureAlgebra::basis(std::size_t i) const { return SparseVec{{static_cast<std::uint32_t>(i), field->one()}}; }

SparseVec StructureAlgebra::mul(const SparseVec& x, const SparseVec& y) const {
  SparseVec out;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y) axpy(out, a * b, mult[i][j]);
  return out;
}

bool StructureAlgebra::is_scalar(const SparseVec& x, Elem* c) const {
  if (x.empty()) {
    if (c) *c = field->zero();
    return true;
  }
  // x = c * unit: compare against the first unit coordinate.
  const auto& [k0, u0] = *unit.begin();
  auto it = x.find(k0);
  if (it == x.end()) return false;
  Elem ratio = it->second / u0;
  SparseVec diff = x;
  axpy(diff, -ratio, unit);
  if (!diff.empty()) return false;
  if (c) *c = ratio;
  return true;
}

Elem StructureAlgebra::trace(const SparseVec& x) const {
  Elem t = field->zero();
  for (const auto& [i, a] : x) {
    Elem ti = field->zero();
    for (std::size_t j = 0; j < dim; ++j) {
      auto it = mult[i][j].find(static_cast<std::uint32_t>(j));
      if (it != mult[i][j].end()) ti += it->second;
    }
    t += a * ti;
  }
  return t;
}

std::size_t StructureAlgebra::left_rank(const SparseVec& x) const {
  Echelon e;
  for (std::size_t j = 0; j < dim; ++j) e.insert(mul(x, basis(j)));
  return e.rank();
}

namespace {

using Product = std::function<SparseVec(const SparseVec&, const SparseVec&)>;

StructureAlgebra build_structure(const FieldPtr& F, const std::vector<SparseVec>& span, const Product& prod,
                                 const SparseVec& unit) {
  std::vector<SparseVec> basis;
  {
    Echelon pick;
    for (const auto& v : span)
      if (pick.insert(v)) basis.push_back(v);
  }
  Echelon e;
  for (const auto& b : basis) e.insert(b);
  auto coords = [&](const SparseVec& v) {
    auto c = e.express(v);
    if (!c) fail(Errc::WrongShape, "span is not closed under multiplication");
    return *c;
  };
  StructureAlgebra A;
  A.field = F;
  A.dim = basis.size();
  A.mult.assign(A.dim, std::vector<SparseVec>(A.dim));
  for (std::size_t i = 0; i < A.dim; ++i)
    for (std::size_t j = 0; j < A.dim; ++j) A.mult[i][j] = coords(prod(basis[i], basis[j]));
  A.unit = coords(unit);
  return A;
}

// Kernel vectors (in A coordinates) of x -> (x g - g x) over all g in gens.
std::vector<SparseVec> centralizer(const StructureAlgebra& A, const std::vector<SparseVec>& gens) {
  std::vector<SparseVec> images;
  for (std::size_t i = 0; i < A.dim; ++i) {
    SparseVec b = A.basis(i), img;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      SparseVec c = A.mul(b, gens[g]);
      axpy(c, A.field->from_int(-1), A.mul(gens[g], b));
      for (auto& [k, v] : c) img.emplace(static_cast<std::uint32_t>(k + g * A.dim), v);
    }
    images.push_back(img);
  }
  return kernel_of(A.field, images);
}

SparseVec combine(const StructureAlgebra& A, const std::vector<SparseVec>& vs, const std::vector<int>& coeffs) {
  SparseVec out;
  for (std::size_t i = 0; i < vs.size(); ++i) axpy(out, A.field->from_int(coeffs[i]), vs[i]);
  return out;
}

// Small combinations of a basis of a subspace, for element searches.
std::vector<SparseVec> small_combinations(const StructureAlgebra& A, const std::vector<SparseVec>& vs) {
  std::vector<SparseVec> out = vs;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      std::vector<int> c(vs.size(), 0);
      c[i] = 1;
      c[j] = 1;
      out.push_back(combine(A, vs, c));
      c[j] = 2;
      out.push_back(combine(A, vs, c));
    }
  if (vs.size() >= 3) out.push_back(combine(A, vs, std::vector<int>(vs.size(), 1)));
  return out;
}

bool nonzero_scalar_square(const StructureAlgebra& A, const SparseVec& x, Elem* c) {
  if (x.empty()) return false;
  return A.is_scalar(A.mul(x, x), c) && !c->is_zero();
}

}  // namespace

StructureAlgebra structure_of(const CliffordAlgebraExplicit& C, const std::vector<AlgebraElement>& span,
                              const AlgebraElement& e) {
  return build_structure(
      C.field(), span, [&](const SparseVec& x, const SparseVec& y) { return C.mul(x, y); }, e);
}

Components split_components(const CliffordAlgebraExplicit& C, const AlgebraElement& z) {
  const std::size_t n = C.generators();
  Elem sq;
  if (!C.is_scalar(C.mul(z, z), &sq) || !sq.is_one()) fail(Errc::PreconditionViolated, "z is not normalized");
  const Elem half = C.field()->from_int(2).inverse();
  AlgebraElement eps_plus = C.scale(C.add(C.one(), z), half);
  AlgebraElement eps_minus = C.scale(C.sub(C.one(), z), half);
  Components out;
  for (int side = 0; side < 2; ++side) {
    const AlgebraElement& eps = side == 0 ? eps_plus : eps_minus;
    std::vector<AlgebraElement> span, basis;
    for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m)
      if (popcount(m) % 2 == 0) span.push_back(C.mul(C.monomial(m), eps));
    Echelon pick;
    for (auto& v : span)
      if (pick.insert(v)) basis.push_back(v);
    if (basis.size() != (std::size_t{1} << (n - 2)) && n >= 2)
      fail(Errc::AssertionFailed, "component dimension " + std::to_string(basis.size()));
    StructureAlgebra A = structure_of(C, basis, eps);
    if (n % 4 == 0) {
      Echelon e;
      for (auto& b : basis) e.insert(b);
      for (auto& b : basis) {
        auto g = e.express(C.gamma(b));
        if (!g) fail(Errc::AssertionFailed, "gamma does not preserve the component");
        A.involution.push_back(*g);
      }
    }
    (side == 0 ? out.plus : out.minus) = std::move(A);
    (side == 0 ? out.plus_basis : out.minus_basis) = std::move(basis);
  }
  return out;
}

std::pair<Elem, Elem> identify_quaternion(const StructureAlgebra& A) {
  if (A.dim != 4) fail(Errc::WrongShape, "quaternion identification needs dimension 4");
  std::vector<SparseVec> traces;
  for (std::size_t i = 0; i < 4; ++i) {
    Elem t = A.trace(A.basis(i));
    traces.push_back(t.is_zero() ? SparseVec{} : SparseVec{{0u, t}});
  }
  std::vector<SparseVec> pure = kernel_of(A.field, traces);
  if (pure.size() != 3) fail(Errc::WrongShape, "trace-zero part is not 3-dimensional");
  for (const auto& i : small_combinations(A, pure)) {
    Elem a;
    if (!nonzero_scalar_square(A, i, &a)) continue;
    std::vector<SparseVec> images;
    for (const auto& p : pure) {
      SparseVec c = A.mul(i, p);
      axpy(c, A.field->one(), A.mul(p, i));
      images.push_back(c);
    }
    std::vector<SparseVec> anti;
    for (const auto& k : kernel_of(A.field, images)) {
      SparseVec w;
      for (const auto& [idx, c] : k) axpy(w, c, pure[idx]);
      anti.push_back(w);
    }
    for (const auto& j : small_combinations(A, anti)) {
      Elem b;
      if (!nonzero_scalar_square(A, j, &b)) continue;
      Echelon check;
      check.insert(A.unit);
      check.insert(i);
      check.insert(j);
      check.insert(A.mul(i, j));
      if (check.rank() != 4) fail(Errc::WrongShape, "1, i, j, ij are dependent");
      return {a, b};
    }
  }
  fail(Errc::WrongShape, "no anticommuting pair with nonzero scalar squares");
}

BrauerClass2 identify_class(const StructureAlgebra& A) {
  if (A.dim == 1) return BrauerClass2(A.field, {});
  if (A.dim == 4) {
    auto [a, b] = identify_quaternion(A);
    return BrauerClass2(A.field, {{a, b}});
  }
  for (std::size_t i = 0; i < A.dim; ++i) {
    Elem a;
    SparseVec x = A.basis(i);
    if (!nonzero_scalar_square(A, x, &a)) continue;
    for (std::size_t j = i + 1; j < A.dim; ++j) {
      Elem b;
      SparseVec y = A.basis(j);
      if (!nonzero_scalar_square(A, y, &b)) continue;
      SparseVec anti = A.mul(x, y);
      axpy(anti, A.field->one(), A.mul(y, x));
      if (!anti.empty()) continue;
      std::vector<SparseVec> cent = centralizer(A, {x, y});
      if (cent.size() * 4 != A.dim) fail(Errc::WrongShape, "centralizer has unexpected dimension");
      StructureAlgebra B = build_structure(
          A.field, cent, [&](const SparseVec& u, const SparseVec& v) { return A.mul(u, v); }, A.unit);
      return BrauerClass2(A.field, {{a, b}}) + identify_class(B);
    }
  }
  fail(Errc::SearchExhausted, "no quaternion subalgebra among basis elements");
}

std::optional<SparseVec> find_zero_divisor(const StructureAlgebra& A) {
  std::vector<SparseVec> basis;
  for (std::size_t i = 0; i < A.dim; ++i) basis.push_back(A.basis(i));
  for (const auto& x : small_combinations(A, basis))
    if (A.left_rank(x) < A.dim) return x;
  return std::nullopt;
}

BrauerClass2 explicit_clifford_class(const QuadraticForm& phi) {
  CliffordAlgebraExplicit C(phi);
  Components comp = split_components(C, normalized_volume(C));
  return identify_class(comp.plus);
}


// ---- verification ------------------------------------------------------------

bool VerificationReport::passed() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return !checks.empty();
}

std::string VerificationReport::str() const {
  std::ostringstream os;
  os << subject << "\n";
  for (const auto& c : checks) {
    os << (c.ok ? "  ok    " : "  FAIL  ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  os << (passed() ? "all checks passed" : "verification failed") << "\n";
  return os.str();
}

namespace {

std::uint32_t block_mask(std::size_t from, std::size_t count) {
  return static_cast<std::uint32_t>(((std::uint64_t{1} << count) - 1) << from);
}

bool commute(const CliffordAlgebraExplicit& C, const AlgebraElement& x, const AlgebraElement& y) {
  return equal(C.mul(x, y), C.mul(y, x));
}

bool anticommute(const CliffordAlgebraExplicit& C, const AlgebraElement& x, const AlgebraElement& y) {
  return C.add(C.mul(x, y), C.mul(y, x)).empty();
}

AlgebraElement volume_of_block(const CliffordAlgebraExplicit& C, const QuadraticForm& part, std::size_t from) {
  Elem d = signed_discriminant_elem(part);
  auto s = try_sqrt(d);
  if (!s) fail(Errc::NormalizationImpossible, "z^2 = " + d.str() + " has no explicit square root");
  return C.scale(C.monomial(block_mask(from, part.dim())), s->inverse());
}

// Basis of C_+ of the block [from, from+count) as elements m (1+z)/2.
std::vector<AlgebraElement> plus_basis(const CliffordAlgebraExplicit& C, std::size_t from, std::size_t count,
                                       const AlgebraElement& z) {
  AlgebraElement eps = C.scale(C.add(C.one(), z), C.field()->from_int(2).inverse());
  std::vector<AlgebraElement> out;
  Echelon pick;
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << count); ++m) {
    if (popcount(m) % 2) continue;
    AlgebraElement b = C.mul(C.monomial(m << from), eps);
    if (pick.insert(b)) out.push_back(b);
  }
  return out;
}

}  // namespace

VerificationReport verify_lemma_etale(const QuadraticForm& phi, const QuadraticForm& phi2,
                                      const std::vector<Elem>& v, const std::vector<Elem>& v2) {
  const std::size_t n = phi.dim(), m = phi2.dim();
  if (n == 0 || m == 0 || n % 4 || m % 4) fail(Errc::PreconditionViolated, "dimensions must be positive and 0 mod 4");
  if (!phi.field()->same_as(*phi2.field())) fail(Errc::FieldMismatch, "forms over different fields");
  if (n + m > CliffordAlgebraExplicit::kMaxGenerators) fail(Errc::PreconditionViolated, "total dimension above 12");
  if (!has_trivial_discriminant(phi) || !has_trivial_discriminant(phi2))
    fail(Errc::PreconditionViolated, "signed discriminants must be trivial");
  if (v.size() != n || v2.size() != m) fail(Errc::PreconditionViolated, "vector lengths differ from dimensions");
  const Elem lambda = phi.evaluate(v), lambda2 = phi2.evaluate(v2);
  if (lambda.is_zero() || lambda2.is_zero()) fail(Errc::PreconditionViolated, "phi(v) = 0");

  const FieldPtr F = phi.field();
  CliffordAlgebraExplicit C(phi + phi2);
  VerificationReport rep;
  rep.subject = "C_0(" + phi.str() + " + " + phi2.str() + "), lambda = " + lambda.str() + ", lambda' = " + lambda2.str();
  auto check = [&](std::string name, bool ok, std::string detail = {}) {
    rep.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  // Generators e_1 e_k of the two even parts.
  std::vector<AlgebraElement> g1, g2, gall;
  for (std::size_t k = 1; k < n; ++k) g1.push_back(C.monomial(1u | (1u << k)));
  for (std::size_t k = 1; k < m; ++k) g2.push_back(C.monomial((1u << n) | (1u << (n + k))));
  for (std::size_t k = 1; k < n + m; ++k) gall.push_back(C.monomial(1u | (1u << k)));
  bool centralize = true;
  for (auto& a : g1)
    for (auto& b : g2) centralize = centralize && commute(C, a, b);
  check("C_0(phi) and C_0(phi') centralize each other", centralize);

  const AlgebraElement z = volume_of_block(C, phi, 0), z2 = volume_of_block(C, phi2, n);
  const Elem half = F->from_int(2).inverse();
  const AlgebraElement eps = C.scale(C.add(C.one(), C.mul(z, z2)), half);
  check("eps^2 = eps", equal(C.mul(eps, eps), eps));
  bool central = true;
  for (auto& g : gall) central = central && commute(C, g, eps);
  check("eps central in C_0(phi + phi')", central);

  const AlgebraElement vv = C.vector([&] {
    std::vector<Elem> w(v);
    w.insert(w.end(), m, F->zero());
    return w;
  }());
  const AlgebraElement vv2 = C.vector([&] {
    std::vector<Elem> w(n, F->zero());
    w.insert(w.end(), v2.begin(), v2.end());
    return w;
  }());
  const AlgebraElement xh = C.mul(C.scale(C.add(z, z2), half), eps);
  const AlgebraElement yh = C.mul(C.mul(vv, vv2), eps);
  check("x y = -y x", anticommute(C, xh, yh));
  check("x^2 = eps", equal(C.mul(xh, xh), eps));
  check("y^2 = -lambda lambda' eps", equal(C.mul(yh, yh), C.scale(eps, -(lambda * lambda2))),
        "-lambda lambda' = " + (-(lambda * lambda2)).str());
  check("gamma(x) = x", equal(C.gamma(xh), xh));
  check("gamma(y) = -y", equal(C.gamma(yh), C.scale(yh, F->from_int(-1))));

  // x (x) x' -> (x + v x v^-1)(x' + v' x' v'^-1) eps, with v^-1 = v / phi(v).
  const AlgebraElement vinv = C.scale(vv, lambda.inverse()), vinv2 = C.scale(vv2, lambda2.inverse());
  const auto B1 = plus_basis(C, 0, n, z), B2 = plus_basis(C, n, m, z2);
  auto lift1 = [&](const AlgebraElement& x) { return C.add(x, C.mul(C.mul(vv, x), vinv)); };
  auto lift2 = [&](const AlgebraElement& x) { return C.add(x, C.mul(C.mul(vv2, x), vinv2)); };
  std::vector<AlgebraElement> L1, L2;
  for (auto& b : B1) L1.push_back(lift1(b));
  for (auto& b : B2) L2.push_back(lift2(b));
  auto image = [&](std::size_t i, std::size_t j) { return C.mul(C.mul(L1[i], L2[j]), eps); };

  const std::size_t tensor_dim = B1.size() * B2.size();
  std::vector<AlgebraElement> images;
  for (std::size_t i = 0; i < B1.size(); ++i)
    for (std::size_t j = 0; j < B2.size(); ++j) images.push_back(image(i, j));
  check("map is injective", rank_of(images) == tensor_dim,
        "rank " + std::to_string(rank_of(images)) + " of " + std::to_string(tensor_dim));

  // Products of basis tensors, on all pairs when there are at most 4096 of them.
  const std::size_t pairs = tensor_dim * tensor_dim;
  const std::size_t stride = pairs <= 4096 ? 1 : pairs / 4096 + 1;
  std::size_t tested = 0;
  bool mult = true;
  for (std::size_t p = 0; p < pairs && mult; p += stride, ++tested) {
    const std::size_t s = p / tensor_dim, t = p % tensor_dim;
    const std::size_t i1 = s / B2.size(), j1 = s % B2.size(), i2 = t / B2.size(), j2 = t % B2.size();
    AlgebraElement lhs = C.mul(C.mul(lift1(C.mul(B1[i1], B1[i2])), lift2(C.mul(B2[j1], B2[j2]))), eps);
    AlgebraElement rhs = C.mul(images[s], images[t]);
    mult = equal(lhs, rhs);
  }
  check("map is multiplicative", mult, std::to_string(tested) + " basis pairs");
  return rep;
}

namespace {

Elem conjugate(const Elem& x) {
  const FieldPtr& L = x.field();
  return L->make_quad(x.re(), -x.im());
}

// The switch e_i <-> e_{i+k} with conjugated coefficients.
struct Switch {
  std::size_t k;
  AlgebraElement operator()(const AlgebraElement& x) const {
    AlgebraElement out;
    for (const auto& [mask, c] : x) {
      std::uint32_t acc = 0;
      int sign = 1;
      for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
        const std::size_t i = std::countr_zero(rest);
        const std::size_t j = i < k ? i + k : i - k;
        sign *= CliffordAlgebraExplicit::monomial_sign(acc, 1u << j);
        acc |= 1u << j;
      }
      Elem cc = conjugate(c);
      accumulate(out, acc, sign < 0 ? -cc : cc);
    }
    return out;
  }
};

// F-coordinates of an element over L = F(delta): key 2*mask (+1 for the delta part).
SparseVec over_base(const AlgebraElement& x) {
  SparseVec out;
  for (const auto& [mask, c] : x) {
    if (!c.re().is_zero()) out.emplace(2 * mask, c.re());
    if (!c.im().is_zero()) out.emplace(2 * mask + 1, c.im());
  }
  return out;
}

AlgebraElement random_element(const CliffordAlgebraExplicit& C, std::mt19937_64& rng) {
  const FieldPtr& L = C.field();
  std::uniform_int_distribution<std::uint32_t> mask(0, static_cast<std::uint32_t>(C.dimension() - 1));
  std::uniform_int_distribution<long> coef(-5, 5);
  AlgebraElement out;
  for (int t = 0; t < 6; ++t) {
    Elem c = L->make_quad(L->base()->from_int(coef(rng)), L->base()->from_int(coef(rng)));
    accumulate(out, mask(rng), c);
  }
  return out;
}

}  // namespace

VerificationReport verify_switch_fixed_points(const QuadraticForm& psi, std::uint64_t seed) {
  const FieldPtr L = psi.field();
  if (L->kind() != FieldKind::QuadExt ||
      (L->flavor() != QuadFlavor::NumberField && L->flavor() != QuadFlavor::FiniteQuad))
    fail(Errc::PreconditionViolated, "switch verification needs L = Q(sqrt m) or F_p(sqrt d)");
  const std::size_t k = psi.dim();
  if (k == 0 || k > 4) fail(Errc::PreconditionViolated, "dim psi must be 1..4");
  const FieldPtr F = L->base();
  const Elem delta = L->gen();
  const EtaleExtension E = EtaleExtension::of_field(L);

  std::vector<Elem> entries = psi.entries();
  for (const auto& a : psi.entries()) entries.push_back(conjugate(a));
  CliffordAlgebraExplicit C(QuadraticForm(L, entries));
  const Switch s{k};

  VerificationReport rep;
  rep.subject = "C(psi + ^psi) over " + L->str() + ", psi = " + psi.str();
  auto check = [&](std::string name, bool ok, std::string detail = {}) {
    rep.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  bool on_gens = true;
  for (std::size_t i = 0; i < k; ++i)
    on_gens = on_gens && equal(s(C.gen(i)), C.gen(i + k)) && equal(s(C.gen(i + k)), C.gen(i));
  check("s swaps e_i and ^e_i", on_gens);

  std::mt19937_64 rng(seed);
  bool order2 = true, commutes = true, multiplicative = true;
  for (int t = 0; t < 50; ++t) {
    AlgebraElement x = random_element(C, rng), y = random_element(C, rng);
    order2 = order2 && equal(s(s(x)), x);
    commutes = commutes && equal(C.gamma(s(x)), s(C.gamma(x)));
    multiplicative = multiplicative && equal(s(C.mul(x, y)), C.mul(s(x), s(y)));
  }
  for (std::size_t i = 0; i < 2 * k; ++i)
    for (std::size_t j = 0; j < 2 * k; ++j)
      multiplicative = multiplicative && equal(s(C.mul(C.gen(i), C.gen(j))), C.mul(s(C.gen(i)), s(C.gen(j))));
  check("s o s = id", order2, "50 random elements");
  check("gamma o s = s o gamma", commutes, "50 random elements");
  check("s is multiplicative", multiplicative, "50 random pairs and all generator pairs");

  // Fixed points of s as an F-linear map on the doubled space; s - id is
  // block diagonal over the orbits {M, s(M)}.
  Echelon fixed;
  std::size_t fixed_dim = 0;
  const std::uint32_t all = static_cast<std::uint32_t>(C.dimension());
  for (std::uint32_t M = 0; M < all; ++M) {
    const std::uint32_t sM = s(C.monomial(M)).begin()->first;
    if (sM < M) continue;
    std::vector<SparseVec> cols;
    std::vector<std::uint32_t> keys{2 * M, 2 * M + 1};
    if (sM != M) {
      keys.push_back(2 * sM);
      keys.push_back(2 * sM + 1);
    }
    for (std::uint32_t key : keys) {
      AlgebraElement b{{key / 2, (key & 1) ? delta : L->one()}};
      SparseVec img = over_base(s(b));
      axpy(img, F->from_int(-1), over_base(b));
      cols.push_back(img);
    }
    for (const auto& kv : kernel_of(F, cols)) {
      SparseVec w;
      for (const auto& [idx, c] : kv) w.emplace(keys[idx], c);
      fixed.insert(w);
      ++fixed_dim;
    }
  }
  const std::size_t expect = std::size_t{1} << (2 * k);
  check("fixed algebra has F-dimension 2^(2 dim psi)", fixed_dim == expect,
        std::to_string(fixed_dim) + " (expected " + std::to_string(expect) + ")");

  // Fixed vectors f_i = e_i + ^e_i, g_i = delta e_i - delta ^e_i.
  std::vector<AlgebraElement> u;
  for (std::size_t i = 0; i < k; ++i) {
    u.push_back(C.add(C.gen(i), C.gen(i + k)));
    u.push_back(C.scale(C.sub(C.gen(i), C.gen(i + k)), delta));
  }
  bool fixed_vectors = true;
  for (auto& x : u) fixed_vectors = fixed_vectors && equal(s(x), x);
  check("f_i, g_i are fixed by s", fixed_vectors);

  bool relations = true;
  std::vector<std::vector<Elem>> gram(2 * k, std::vector<Elem>(2 * k));
  const Elem half = L->from_int(2).inverse();
  for (std::size_t a = 0; a < 2 * k && relations; ++a)
    for (std::size_t b = 0; b < 2 * k && relations; ++b) {
      Elem c;
      AlgebraElement sym = C.scale(C.add(C.mul(u[a], u[b]), C.mul(u[b], u[a])), half);
      relations = C.is_scalar(sym, &c) && c.im().is_zero();
      if (relations) gram[a][b] = c.re();
    }
  std::string rel_detail;
  if (relations) {
    QuadraticForm from_algebra = QuadraticForm::from_gram(F, gram);
    QuadraticForm tr = transfer(E, psi);
    rel_detail = "u^2 form " + from_algebra.str() + ", tr*(psi) = " + tr.str();
    relations = is_isometric(from_algebra, tr);
  }
  check("fixed vectors satisfy the Clifford relations of tr*(psi)", relations, rel_detail);

  // Ordered products of the fixed vectors span the fixed algebra.
  std::vector<AlgebraElement> prod(expect);
  prod[0] = C.one();
  Echelon gen_span;
  bool inside = true;
  for (std::uint32_t S = 0; S < expect; ++S) {
    if (S) {
      const int top = 31 - std::countl_zero(S);
      prod[S] = C.mul(prod[S & ~(1u << top)], u[top]);
    }
    SparseVec w = over_base(prod[S]);
    inside = inside && fixed.contains(w);
    gen_span.insert(w);
  }
  check("fixed vectors generate the fixed algebra", inside && gen_span.rank() == expect,
        "rank " + std::to_string(gen_span.rank()));

  // eps = (1 + z z')/2 with z normalized; needs even dim psi and trivial d(psi).
  if (k % 2 == 0 && has_trivial_discriminant(psi)) {
    auto root = try_sqrt(signed_discriminant_elem(psi));
    if (!root) fail(Errc::NormalizationImpossible, "no explicit square root of d(psi)");
    AlgebraElement z = C.scale(C.monomial(block_mask(0, k)), root->inverse());
    AlgebraElement z2 = s(z);
    AlgebraElement eps = C.scale(C.add(C.one(), C.mul(z, z2)), half);
    AlgebraElement y = C.mul(C.mul(C.gen(k - 1), C.gen(2 * k - 1)), eps);
    AlgebraElement dy = C.scale(y, delta);
    check("eps^2 = eps", equal(C.mul(eps, eps), eps));
    check("s(eps) = eps", equal(s(eps), eps));
    check("s(y) = -y", equal(s(y), C.scale(y, L->from_int(-1))));
    check("s(delta y) = delta y", equal(s(dy), dy));
  } else {
    rep.subject += " (eps checks need even dim and trivial discriminant)";
  }
  return rep;
}

}  // namespace qfb
