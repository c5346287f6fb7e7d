#pragma once

// Recursive towers of computable fields with exact element arithmetic.
//
// Supported descriptors:
//   Q, R (rational representatives with real semantics), F_p (p odd),
//   Laurent(K, t) = K((t)) for any supported K,
//   Quad(K, d) = K(sqrt d) when K is Q, R, F_p or a complete discretely valued
//   field (Laurent or Quad over one).
//
// Laurent elements are rational functions in t, read through their t-adic
// expansion. A quadratic extension of a valued field is again complete and
// discretely valued; valuation, uniformizer and residue maps are exposed for
// both so that Springer-style recursions can walk down any tower.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qfb/errors.hpp"

namespace qfb {

class Field;
class Elem;
using FieldPtr = std::shared_ptr<const Field>;
using Poly = std::vector<Elem>;  // coefficients, lowest degree first

enum class FieldKind { Rationals, Reals, PrimeField, QuadExt, Laurent };

/// How a Quad descriptor is decided: C, F_{p^2}, Q(sqrt m), or valued.
enum class QuadFlavor { None, Complex, FiniteQuad, NumberField, Valued };

class Elem {
 public:
  Elem() = default;

  bool valid() const { return rep_ != nullptr; }
  const FieldPtr& field() const { return field_; }

  bool is_zero() const;
  bool is_one() const;

  Elem operator-() const;
  Elem inverse() const;
  Elem pow(long e) const;
  Elem square() const { return *this * *this; }

  friend Elem operator+(const Elem& x, const Elem& y);
  friend Elem operator-(const Elem& x, const Elem& y);
  friend Elem operator*(const Elem& x, const Elem& y);
  friend Elem operator/(const Elem& x, const Elem& y);
  friend bool operator==(const Elem& x, const Elem& y);
  friend bool operator!=(const Elem& x, const Elem& y) { return !(x == y); }

  Elem& operator+=(const Elem& y) { return *this = *this + y; }
  Elem& operator-=(const Elem& y) { return *this = *this - y; }
  Elem& operator*=(const Elem& y) { return *this = *this * y; }

  std::string str() const;

  // Representation access; each asserts the matching field kind.
  const mpq_class& rational() const;           // Q, R
  std::uint64_t residue_mod_p() const;         // F_p
  const Elem& re() const;                      // Quad: a in a + b*delta
  const Elem& im() const;                      // Quad: b
  long laurent_shift() const;                  // Laurent: t^shift * N/D
  const Poly& laurent_num() const;             // N(0) != 0
  const Poly& laurent_den() const;             // D(0) == 1

  struct Rep;

 private:
  friend class Field;
  Elem(FieldPtr f, std::shared_ptr<const Rep> r) : field_(std::move(f)), rep_(std::move(r)) {}

  FieldPtr field_;
  std::shared_ptr<const Rep> rep_;
};

class Field : public std::enable_shared_from_this<Field> {
  struct Token {};

 public:
  static FieldPtr rationals();
  static FieldPtr reals();
  static FieldPtr prime_field(std::uint64_t p);
  static FieldPtr laurent(const FieldPtr& base, const std::string& var);
  /// Raw quadratic extension; d must be a nonsquare of `base`. Prefer make_quad_ext().
  static FieldPtr quad(const FieldPtr& base, const Elem& d);

  Field(Token, FieldKind kind);

  FieldKind kind() const { return kind_; }
  QuadFlavor flavor() const { return flavor_; }
  const FieldPtr& base() const { return base_; }
  const Elem& quad_d() const { return d_; }
  const std::string& var() const { return var_; }
  std::uint64_t prime() const { return p_; }
  /// 0 for characteristic zero.
  std::uint64_t characteristic() const;
  const std::string& str() const { return name_; }
  bool same_as(const Field& other) const { return this == &other || name_ == other.name_; }
  /// Name of this level's generator ("delta", "delta2", ... or the Laurent variable).
  const std::string& gen_name() const { return gen_name_; }

  Elem zero() const;
  Elem one() const;
  Elem from_int(long v) const;
  Elem from_rational(const mpq_class& q) const;
  /// delta for Quad, t for Laurent.
  Elem gen() const;
  /// Embed an element of a subfield of this tower (identity on own elements).
  Elem embed(const Elem& x) const;
  bool contains_subfield(const Field& sub) const;

  Elem make_prime(std::uint64_t r) const;
  Elem make_quad(const Elem& a, const Elem& b) const;
  Elem make_laurent(long shift, Poly num, Poly den) const;

  // Number field data (QuadFlavor::NumberField): d = m * c^2, m squarefree.
  const mpz_class& nf_m() const { return nf_m_; }
  const mpq_class& nf_c() const { return nf_c_; }

  // Valued structure (Laurent, or Quad with QuadFlavor::Valued).
  bool is_valued() const;
  long valuation(const Elem& x) const;
  Elem uniformizer() const;
  /// x / uniformizer^valuation(x).
  Elem unit_part(const Elem& x) const;
  /// Residue of a unit, as an element of residue_field().
  Elem residue(const Elem& unit) const;
  /// A unit whose residue is r.
  Elem lift(const Elem& r) const;
  /// Throws UnsupportedTower when the residue field leaves the supported class.
  FieldPtr residue_field() const;
  bool ramified() const { return ramified_; }

  /// Fixed nonsquare of a finite ground field (least nonresidue, or a + delta in F_{p^2}).
  Elem finite_nonsquare() const;

 private:
  FieldKind kind_;
  QuadFlavor flavor_ = QuadFlavor::None;
  FieldPtr base_;
  Elem d_;
  std::string var_;
  std::uint64_t p_ = 0;
  std::string name_;
  std::string gen_name_;
  int quad_depth_ = 0;

  mpz_class nf_m_;
  mpq_class nf_c_;

  // Valued Quad data: d = pi_K^vd * ud, res(ud) = rd.
  long vd_ = 0;
  long half_ = 0;
  bool ramified_ = false;
  Elem ud_;
  Elem pi_inv_half_;  // pi_K^(-half_), an element of the base
  FieldPtr residue_;
  std::string residue_error_;

  std::uint64_t nonsquare_a_ = 0;  // F_p: least nonresidue; F_{p^2}: a with a + delta nonsquare
};

// ---- field-tower operations -------------------------------------------------

/// True iff x = y^2 for some y in x's field. Throws ZeroInput for x = 0.
bool is_square(const Elem& x);

/// An explicit square root where the representation allows one (Q, F_p, Q(sqrt m)).
std::optional<Elem> try_sqrt(const Elem& x);

/// Canonical (or ratio-testable) square-class representative.
struct SquareClass {
  Elem rep;
  bool same_class(const Elem& other) const;
  bool operator==(const SquareClass& other) const { return same_class(other.rep); }
};

SquareClass square_class(const Elem& x);

/// True iff x/y is a nonzero square.
bool same_square_class(const Elem& x, const Elem& y);

struct QuadExtResult {
  bool split = false;  // d is a square: the etale algebra is F x F
  FieldPtr field;      // F(sqrt d) when !split
};

QuadExtResult make_quad_ext(const FieldPtr& F, const Elem& d);

/// Rewrite a descriptor into the canonical Laurent-over-ground form
/// (e.g. R((x))((y)))(sqrt -1) -> R(sqrt -1)((x))((y))).
FieldPtr normalize_tower(const FieldPtr& F);

/// Generators of a subgroup of F^x/F^x2 containing -1 and the classes of `seeds`;
/// for R-grounded Laurent towers this is all of F^x/F^x2.
std::vector<Elem> square_class_atoms(const FieldPtr& F, const std::vector<Elem>& seeds);

/// Square-class-distinct products of subsets of `atoms`, by subset size; at most `limit`.
std::vector<Elem> square_class_products(const FieldPtr& F, const std::vector<Elem>& atoms,
                                        std::size_t limit = 4096);

/// Deterministic small-height elements of F, for witness searches.
std::vector<Elem> small_elements(const FieldPtr& F, std::size_t count);

bool is_finite_ground(const Field& F);  // F_p or F_{p^2}

}  // namespace qfb
