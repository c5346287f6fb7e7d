#pragma once

// Diagonal quadratic forms over tower fields: invariants, isotropy and
// isometry decisions, and constructive Witt decomposition.

#include <optional>
#include <string>
#include <vector>

#include "qfb/field.hpp"
#include "qfb/local.hpp"

namespace qfb {

class QuadraticForm {
 public:
  QuadraticForm() = default;
  QuadraticForm(FieldPtr F, std::vector<Elem> entries);
  /// Symmetric Gaussian elimination; throws PreconditionViolated on a singular matrix.
  static QuadraticForm from_gram(const FieldPtr& F, std::vector<std::vector<Elem>> gram);
  /// The zero-dimensional form (only produced internally, e.g. as an empty kernel).
  static QuadraticForm empty(const FieldPtr& F);

  const FieldPtr& field() const { return F_; }
  const std::vector<Elem>& entries() const { return e_; }
  const Elem& operator[](std::size_t i) const { return e_[i]; }
  std::size_t dim() const { return e_.size(); }

  QuadraticForm operator+(const QuadraticForm& other) const;  // orthogonal sum
  QuadraticForm scaled(const Elem& c) const;
  QuadraticForm operator-() const { return scaled(F_->from_int(-1)); }
  QuadraticForm tensor(const QuadraticForm& other) const;
  QuadraticForm base_change(const FieldPtr& L) const;
  Elem evaluate(const std::vector<Elem>& v) const;

  std::string str() const;

 private:
  FieldPtr F_;
  std::vector<Elem> e_;
};

/// (-1)^(n(n-1)/2) * product of entries.
Elem signed_discriminant_elem(const QuadraticForm& q);
SquareClass signed_discriminant(const QuadraticForm& q);
bool has_trivial_discriminant(const QuadraticForm& q);

bool is_isotropic(const QuadraticForm& q);
bool represents(const QuadraticForm& q, const Elem& c);
bool is_hyperbolic(const QuadraticForm& q);
bool is_isometric(const QuadraticForm& q, const QuadraticForm& r);

/// Bounds for constructive witness searches.
struct WitnessBounds {
  std::size_t small_elements = 48;  // candidates x per split attempt
  int uniformizer_shift = 3;        // also try pi^k * x for |k| <= shift on valued fields
};

/// q = <c> + rest; throws WitnessSearchExhausted if the bounded search fails
/// and PreconditionViolated if q does not represent c.
QuadraticForm pull_value(const QuadraticForm& q, const Elem& c, const WitnessBounds& b = {});

struct WittDecomposition {
  std::size_t witt_index = 0;
  QuadraticForm kernel;  // anisotropic, possibly zero-dimensional
};

WittDecomposition witt_decompose(const QuadraticForm& q, const WitnessBounds& b = {});

struct Similarity {
  bool similar = false;
  std::optional<Elem> factor;  // q ~= factor * r
};

/// Searches similarity factors among square classes generated by -1, the
/// entries' prime/uniformizer data and `extra_seeds`.
Similarity is_similar(const QuadraticForm& q, const QuadraticForm& r, const std::vector<Elem>& extra_seeds = {});

/// <<a_1,...,a_n>> = tensor of <1, -a_i>.
QuadraticForm pfister(const FieldPtr& F, const std::vector<Elem>& slots);

struct GP2Presentation {
  Elem ell, alpha, beta;  // psi ~= ell * <<alpha, beta>>
};

std::optional<GP2Presentation> is_GP2(const QuadraticForm& psi);

/// q with <<a>> q ~= phi; throws NotDivisible when phi is not hyperbolic over F(sqrt a).
QuadraticForm pfister_factor_extract(const QuadraticForm& phi, const Elem& a, const WitnessBounds& b = {});

/// Residue forms (even part, odd part) of a form over a complete valued field.
std::pair<QuadraticForm, QuadraticForm> springer_residues(const QuadraticForm& q);

/// Hasse invariant prod_{i<j} (a_i, a_j)_w over Q or Q(sqrt m).
int hasse_invariant(const QuadraticForm& q, const Place& w);

}  // namespace qfb
