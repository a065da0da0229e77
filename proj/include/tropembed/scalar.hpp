#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tropembed/rational.hpp"

namespace tropembed {

/// A real number that is not assumed to be rational. Only its label (its
/// identity) and a certified rational enclosure are known; the enclosure is
/// used exclusively for ordering decisions.
struct Generator {
  std::string label;
  Rational lower;
  Rational upper;
};

using GeneratorRef = std::shared_ptr<const Generator>;

/// Builds a generator whose enclosure is the decimal string widened by one
/// unit in its last digit, e.g. "1.4142" -> [1.4141, 1.4143].
GeneratorRef make_generator(std::string label, std::string_view decimal_enclosure);
GeneratorRef make_generator(std::string label, Rational lower, Rational upper);

/// Element of the value group: a rational part plus a finite rational
/// combination of irrational generators. Generators are assumed linearly
/// independent over the rationals together with 1, so a scalar is zero
/// exactly when every coefficient is zero.
class Scalar {
 public:
  using Term = std::pair<GeneratorRef, Rational>;

  Scalar() = default;
  Scalar(Rational value) : unit_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Scalar(std::int64_t value) : unit_(value) {}         // NOLINT(google-explicit-constructor)
  Scalar(int value) : unit_(value) {}                  // NOLINT(google-explicit-constructor)

  static Scalar of(const GeneratorRef& generator, Rational coefficient = Rational(1));

  bool is_rational() const noexcept { return terms_.empty(); }
  bool is_zero() const noexcept { return terms_.empty() && unit_ == 0; }
  const Rational& rational_part() const noexcept { return unit_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  /// Coefficient of a generator by label (the rational part under "1").
  Rational coefficient(std::string_view label) const;

  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Rational& factor);
  Scalar& operator/=(const Rational& divisor);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Rational& f) { return a *= f; }
  friend Scalar operator*(const Rational& f, Scalar a) { return a *= f; }
  friend Scalar operator*(Scalar a, std::int64_t f) { return a *= Rational(f); }
  friend Scalar operator*(std::int64_t f, Scalar a) { return a *= Rational(f); }
  friend Scalar operator/(Scalar a, const Rational& d) { return a /= d; }
  friend Scalar operator/(Scalar a, std::int64_t d) { return a /= Rational(d); }
  Scalar operator-() const;

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Exact when rational; otherwise certified by generator enclosures.
  /// Throws UndecidableComparison when the enclosure straddles zero.
  int sign() const;

  friend bool operator<(const Scalar& a, const Scalar& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return (a - b).sign() > 0; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return (a - b).sign() <= 0; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return (a - b).sign() >= 0; }

  /// r such that *this == r * other, if one exists.
  std::optional<Rational> ratio_to(const Scalar& other) const;

  std::pair<Rational, Rational> enclosure() const;
  double approx() const;

  /// Human-readable, e.g. "3/2 + 1/3*g".
  std::string str() const;

 private:
  Rational unit_;
  std::vector<Term> terms_;  // sorted by label, no zero coefficients

  void add_terms(const Scalar& other, int sign);
};

/// Strict weak order on the representation (not on the real value); used to
/// key exact containers.
struct StructuralLess {
  bool operator()(const Scalar& a, const Scalar& b) const;
};

/// The value group: the rational span of declared generators. When any
/// declared generator has an exact rational value the group contains all of
/// the rationals.
class ValueGroup {
 public:
  /// Lambda = Q, the default.
  static ValueGroup rationals();

  ValueGroup() : contains_rationals_(true) {}
  ValueGroup(bool contains_rationals, std::vector<GeneratorRef> irrational);

  bool contains_rationals() const noexcept { return contains_rationals_; }
  const std::vector<GeneratorRef>& generators() const noexcept { return generators_; }
  GeneratorRef find(std::string_view label) const;

  /// Membership by exact linear algebra in generator coordinates.
  bool contains(const Scalar& value) const;

  /// A positive element of the group no larger than 1: exactly 1 when the
  /// group contains the rationals, otherwise a rational multiple of the
  /// first generator.
  Scalar base_scale() const;

 private:
  bool contains_rationals_;
  std::vector<GeneratorRef> generators_;
};

}  // namespace tropembed
