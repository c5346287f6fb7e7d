#include "qfb/etale.hpp"

namespace qfb {

EtaleExtension EtaleExtension::split(const FieldPtr& F) {
  EtaleExtension E;
  E.F_ = F;
  return E;
}

EtaleExtension EtaleExtension::quadratic(const FieldPtr& F, const Elem& d) {
  QuadExtResult r = make_quad_ext(F, d);
  if (r.split) return split(F);
  EtaleExtension E;
  E.F_ = F;
  E.L_ = r.field;
  return E;
}

EtaleExtension EtaleExtension::of_field(const FieldPtr& L) {
  if (L->kind() != FieldKind::QuadExt) throw Error(Errc::PreconditionViolated, L->str() + " is not a quadratic extension");
  EtaleExtension E;
  E.F_ = L->base();
  E.L_ = L;
  return E;
}

Elem EtaleExtension::d() const { return is_split() ? F_->one() : L_->quad_d(); }

std::string EtaleExtension::str() const {
  if (is_split()) return F_->str() + " x " + F_->str();
  return L_->str();
}

EtaleElement etale_from_base(const EtaleExtension& E, const Elem& c_in) {
  Elem c = E.base()->embed(c_in);
  if (E.is_split()) return {c, c};
  return {E.field()->embed(c), Elem()};
}

EtaleElement conj(const EtaleExtension& E, const EtaleElement& z) {
  if (E.is_split()) return {z.y, z.x};
  return {E.field()->make_quad(z.x.re(), -z.x.im()), Elem()};
}

Elem norm(const EtaleExtension& E, const EtaleElement& z) {
  if (E.is_split()) return z.x * z.y;
  const Elem& a = z.x.re();
  const Elem& b = z.x.im();
  return a * a - E.d() * b * b;
}

Elem trace(const EtaleExtension& E, const EtaleElement& z) {
  if (E.is_split()) return z.x + z.y;
  return z.x.re() + z.x.re();
}

bool is_invertible(const EtaleExtension& E, const EtaleElement& z) {
  if (E.is_split()) return !z.x.is_zero() && !z.y.is_zero();
  return !z.x.is_zero();
}

EtaleForm EtaleForm::of(const EtaleExtension& E, const QuadraticForm& q) {
  if (E.is_split()) throw Error(Errc::PreconditionViolated, "split extension needs two component forms");
  if (!q.field()->same_as(*E.field())) throw Error(Errc::FieldMismatch, q.field()->str() + " vs " + E.str());
  EtaleForm f{E, {}};
  for (const auto& x : q.entries()) f.entries.push_back({x, Elem()});
  return f;
}

EtaleForm EtaleForm::of(const EtaleExtension& E, const QuadraticForm& a, const QuadraticForm& b) {
  if (!E.is_split()) throw Error(Errc::PreconditionViolated, "component forms need a split extension");
  if (a.dim() != b.dim()) throw Error(Errc::WrongShape, "component forms of different dimension");
  EtaleForm f{E, {}};
  for (std::size_t i = 0; i < a.dim(); ++i) f.entries.push_back({E.base()->embed(a[i]), E.base()->embed(b[i])});
  return f;
}

QuadraticForm EtaleForm::component(int i) const {
  if (!ext.is_split()) throw Error(Errc::PreconditionViolated, "components exist only for split extensions");
  std::vector<Elem> v;
  for (const auto& z : entries) v.push_back(i == 0 ? z.x : z.y);
  return QuadraticForm(ext.base(), v);
}

QuadraticForm EtaleForm::over_field() const {
  if (ext.is_split()) throw Error(Errc::PreconditionViolated, "split extension has no field form");
  std::vector<Elem> v;
  for (const auto& z : entries) v.push_back(z.x);
  return QuadraticForm(ext.field(), v);
}

std::string EtaleForm::str() const {
  if (ext.is_split()) return "(" + component(0).str() + ", " + component(1).str() + ")";
  return over_field().str();
}

QuadraticForm transfer(const EtaleForm& psi) {
  const EtaleExtension& E = psi.ext;
  const FieldPtr& F = E.base();
  if (E.is_split()) return psi.component(0) + psi.component(1);
  const Elem d = E.d();
  const Elem two = F->from_int(2);
  std::vector<Elem> out;
  for (const auto& z : psi.entries) {
    const Elem& a = z.x.re();
    const Elem& b = z.x.im();
    // Gram of (u, v) -> tr(alpha u v) on {1, delta}.
    Elem g00 = two * a, g01 = two * b * d, g11 = two * a * d;
    if ((g00 * g11 - g01 * g01).is_zero()) throw Error(Errc::DegenerateBlock, "singular transfer block for " + z.x.str());
    QuadraticForm blk = QuadraticForm::from_gram(F, {{g00, g01}, {g01, g11}});
    for (const auto& e : blk.entries()) out.push_back(e);
  }
  return QuadraticForm(F, out);
}

QuadraticForm transfer(const EtaleExtension& E, const QuadraticForm& psi) { return transfer(EtaleForm::of(E, psi)); }

EtaleForm scale_by_base(const EtaleForm& psi, const Elem& c_in) {
  Elem c = psi.ext.base()->embed(c_in);
  if (c.is_zero()) throw Error(Errc::ZeroInput, "scaling by 0");
  EtaleForm out = psi;
  for (auto& z : out.entries) {
    if (psi.ext.is_split()) {
      z.x = z.x * c;
      z.y = z.y * c;
    } else {
      z.x = z.x * psi.ext.field()->embed(c);
    }
  }
  return out;
}

bool is_GP2(const EtaleForm& psi) {
  if (psi.ext.is_split()) return is_GP2(psi.component(0)).has_value() && is_GP2(psi.component(1)).has_value();
  return is_GP2(psi.over_field()).has_value();
}

}  // namespace qfb
