#pragma once

// Quadratic etale algebras L = F(sqrt d) or F x F, and the Scharlau transfer
// along the trace form.

#include <optional>
#include <string>
#include <vector>

#include "qfb/qform.hpp"

namespace qfb {

class EtaleExtension {
 public:
  static EtaleExtension split(const FieldPtr& F);
  /// F(sqrt d), or F x F when d is a square.
  static EtaleExtension quadratic(const FieldPtr& F, const Elem& d);
  /// Wrap an existing quadratic-extension descriptor.
  static EtaleExtension of_field(const FieldPtr& L);

  bool is_split() const { return L_ == nullptr; }
  const FieldPtr& base() const { return F_; }
  /// The field L; null when split.
  const FieldPtr& field() const { return L_; }
  /// d with delta^2 = d (1 when split).
  Elem d() const;
  std::string str() const;

 private:
  FieldPtr F_, L_;
};

/// Split: (x, y); field: x in L, y unused.
struct EtaleElement {
  Elem x, y;
};

EtaleElement etale_from_base(const EtaleExtension& E, const Elem& c);
EtaleElement conj(const EtaleExtension& E, const EtaleElement& z);
Elem norm(const EtaleExtension& E, const EtaleElement& z);
Elem trace(const EtaleExtension& E, const EtaleElement& z);
bool is_invertible(const EtaleExtension& E, const EtaleElement& z);

/// A diagonal form over L. Split: one form per component.
struct EtaleForm {
  EtaleExtension ext;
  std::vector<EtaleElement> entries;

  static EtaleForm of(const EtaleExtension& E, const QuadraticForm& q);  // field case
  static EtaleForm of(const EtaleExtension& E, const QuadraticForm& first, const QuadraticForm& second);
  std::size_t dim() const { return entries.size(); }
  QuadraticForm component(int i) const;  // split: 0 or 1
  QuadraticForm over_field() const;      // field case
  std::string str() const;
};

/// tr_*(psi): restriction of psi + psi^iota to the fixed points, Gram in basis {1, delta}.
QuadraticForm transfer(const EtaleForm& psi);
QuadraticForm transfer(const EtaleExtension& E, const QuadraticForm& psi);

EtaleForm scale_by_base(const EtaleForm& psi, const Elem& c);

/// Componentwise GP2 test; presentations over L (or one per component).
bool is_GP2(const EtaleForm& psi);

}  // namespace qfb
