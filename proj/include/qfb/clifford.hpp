#pragma once

// Clifford algebras of diagonal forms by structure constants on the monomial
// basis, their even parts and components, and machine checks of the
// constructions relating C_0 of sums and transfers.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qfb/brauer.hpp"
#include "qfb/etale.hpp"
#include "qfb/linalg.hpp"
#include "qfb/qform.hpp"

namespace qfb {

/// Sparse coefficients over the monomial basis; bit i of a key is generator e_{i+1}.
using AlgebraElement = std::map<std::uint32_t, Elem>;

class CliffordAlgebraExplicit {
 public:
  static constexpr std::size_t kMaxGenerators = 12;

  /// C(q) for diagonal q; throws PreconditionViolated above kMaxGenerators.
  explicit CliffordAlgebraExplicit(const QuadraticForm& q);

  const FieldPtr& field() const { return F_; }
  const QuadraticForm& form() const { return q_; }
  std::size_t generators() const { return n_; }
  std::size_t dimension() const { return std::size_t{1} << n_; }

  AlgebraElement scalar(const Elem& c) const;
  AlgebraElement one() const { return scalar(F_->one()); }
  AlgebraElement gen(std::size_t i) const;
  AlgebraElement monomial(std::uint32_t mask) const;
  /// sum v_i e_i
  AlgebraElement vector(const std::vector<Elem>& v) const;

  AlgebraElement mul(const AlgebraElement& x, const AlgebraElement& y) const;
  AlgebraElement add(const AlgebraElement& x, const AlgebraElement& y) const;
  AlgebraElement sub(const AlgebraElement& x, const AlgebraElement& y) const;
  AlgebraElement scale(const AlgebraElement& x, const Elem& c) const;
  /// Reverses products; identity on the generators.
  AlgebraElement gamma(const AlgebraElement& x) const;

  bool is_even(const AlgebraElement& x) const;
  /// If x = c * 1, stores c.
  bool is_scalar(const AlgebraElement& x, Elem* c = nullptr) const;
  std::string str(const AlgebraElement& x) const;

  /// e_A e_B = monomial_sign(A,B) * prod_{i in A&B} q_i * e_{A^B}.
  static int monomial_sign(std::uint32_t a, std::uint32_t b);

 private:
  FieldPtr F_;
  QuadraticForm q_;
  std::size_t n_;
  std::vector<Elem> qprod_;  // product of q_i over each mask
};

bool equal(const AlgebraElement& x, const AlgebraElement& y);
SparseVec coordinates(const AlgebraElement& x);

/// z = e_1...e_n scaled so z^2 = 1. Requires dim = 0 mod 4 and trivial signed
/// discriminant (PreconditionViolated); NormalizationImpossible when no
/// explicit square root of z^2 is available.
AlgebraElement center_element(const CliffordAlgebraExplicit& C);

/// Same normalization for any even dimension with z^2 a square.
AlgebraElement normalized_volume(const CliffordAlgebraExplicit& C);

/// An algebra given by structure constants on a basis b_0..b_{k-1}.
struct StructureAlgebra {
  FieldPtr field;
  std::size_t dim = 0;
  std::vector<std::vector<SparseVec>> mult;  // b_i b_j in the basis
  SparseVec unit;
  std::vector<SparseVec> involution;  // images of b_i; empty when not defined

  SparseVec mul(const SparseVec& x, const SparseVec& y) const;
  SparseVec basis(std::size_t i) const;
  bool is_scalar(const SparseVec& x, Elem* c = nullptr) const;
  /// Trace of left multiplication.
  Elem trace(const SparseVec& x) const;
  /// Rank of left multiplication.
  std::size_t left_rank(const SparseVec& x) const;
};

/// Subalgebra spanned by `span` (elements of the ambient Clifford algebra, with
/// unit e), as a structure-constant algebra.
StructureAlgebra structure_of(const CliffordAlgebraExplicit& C, const std::vector<AlgebraElement>& span,
                              const AlgebraElement& e);

struct Components {
  StructureAlgebra plus, minus;
  std::vector<AlgebraElement> plus_basis, minus_basis;  // in C_0
};

/// C_0 (1 +- z)/2 for normalized z; gamma is restricted when dim = 0 mod 4.
Components split_components(const CliffordAlgebraExplicit& C, const AlgebraElement& z);

/// (i^2, j^2) for anticommuting trace-zero i, j of a 4-dimensional algebra.
/// Throws WrongShape if the algebra is not quaternion.
std::pair<Elem, Elem> identify_quaternion(const StructureAlgebra& A);

/// Brauer class of a central simple algebra of dimension 1, 4, 16, ...
/// by peeling quaternion subalgebras and passing to centralizers.
BrauerClass2 identify_class(const StructureAlgebra& A);

/// An element with rank-deficient left multiplication, if a short search finds one.
std::optional<SparseVec> find_zero_divisor(const StructureAlgebra& A);

/// Class of C_+(phi) read off the explicit algebra (even dim, trivial d).
BrauerClass2 explicit_clifford_class(const QuadraticForm& phi);

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct VerificationReport {
  std::string subject;
  std::vector<Check> checks;
  bool passed() const;
  std::string str() const;
};

/// The generators (z+z')/2 eps and v v' eps of C_0(phi + phi') and the
/// embedding of C_+(phi) (x) C_+(phi').
VerificationReport verify_lemma_etale(const QuadraticForm& phi, const QuadraticForm& phi2,
                                      const std::vector<Elem>& v, const std::vector<Elem>& v2);

/// The switch s on C(psi + ^psi) over L and its fixed algebra over F.
/// psi must live over a quadratic field extension of Q or F_p.
VerificationReport verify_switch_fixed_points(const QuadraticForm& psi, std::uint64_t seed = 0);

}  // namespace qfb
