#pragma once

// 2-torsion Brauer classes as sums of quaternion symbols.

#include <string>
#include <utility>
#include <vector>

#include "qfb/etale.hpp"
#include "qfb/qform.hpp"

namespace qfb {

struct BrauerClass2 {
  FieldPtr field;
  std::vector<std::pair<Elem, Elem>> symbols;

  BrauerClass2() = default;
  BrauerClass2(FieldPtr F, std::vector<std::pair<Elem, Elem>> s);

  BrauerClass2 operator+(const BrauerClass2& o) const;
  BrauerClass2 restrict_to(const FieldPtr& L) const;
  std::string str() const;
};

bool is_trivial(const BrauerClass2& c);
/// 1, 2, 4, 8, ...
long index(const BrauerClass2& c);
bool same_class(const BrauerClass2& x, const BrauerClass2& y);

/// The same class with fewer symbols: square-class representatives, split
/// symbols dropped, symbols sharing a slot merged ((a,b) + (a,c) = (a,bc));
/// a trivial class comes back empty.
BrauerClass2 simplified(const BrauerClass2& c);

/// <a, b, -ab, -c, -d, cd> for (a,b) + (c,d); split symbols are dropped and
/// missing slots padded with (1, 1). Throws WrongShape beyond two symbols.
QuadraticForm albert_form(const BrauerClass2& c);
/// 1, 2 or 4 read from the Albert form (hyperbolic / isotropic / anisotropic).
long index_via_albert(const BrauerClass2& c);

/// Brauer class of C_+(phi) for even-dimensional phi with trivial signed discriminant.
BrauerClass2 clifford_invariant(const QuadraticForm& phi);

bool is_GP3(const QuadraticForm& phi);

/// A class over L (for split L: one class per component).
struct EtaleBrauerClass {
  EtaleExtension ext;
  BrauerClass2 first, second;  // second only for split extensions
};

/// Corestriction through the transfer of a sum of 2-fold Pfister forms.
BrauerClass2 corestriction(const EtaleBrauerClass& c);
/// Projection formula cor(alpha, b) = (N alpha, b) after slot rewriting; throws RewriteFailed.
BrauerClass2 corestriction_projection(const EtaleBrauerClass& c);

}  // namespace qfb
