#include "tropembed/scalar.hpp"

#include <algorithm>
#include <sstream>

#include "tropembed/errors.hpp"

namespace tropembed {

GeneratorRef make_generator(std::string label, Rational lower, Rational upper) {
  if (lower > upper) std::swap(lower, upper);
  return std::make_shared<const Generator>(Generator{std::move(label), std::move(lower), std::move(upper)});
}

GeneratorRef make_generator(std::string label, std::string_view decimal_enclosure) {
  Rational centre = parse_rational(decimal_enclosure);
  std::size_t digits = 0;
  if (auto dot = decimal_enclosure.find('.'); dot != std::string_view::npos) {
    digits = decimal_enclosure.size() - dot - 1;
  }
  BigInt scale = 1;
  for (std::size_t i = 0; i < digits; ++i) scale *= 10;
  Rational ulp(BigInt(1), scale);
  return make_generator(std::move(label), centre - ulp, centre + ulp);
}

Scalar Scalar::of(const GeneratorRef& generator, Rational coefficient) {
  Scalar s;
  if (coefficient != 0) s.terms_.emplace_back(generator, std::move(coefficient));
  return s;
}

Rational Scalar::coefficient(std::string_view label) const {
  if (label == "1") return unit_;
  for (const auto& [g, c] : terms_) {
    if (g->label == label) return c;
  }
  return Rational(0);
}

void Scalar::add_terms(const Scalar& other, int sgn) {
  if (other.terms_.empty()) return;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first->label < b->first->label)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first->label < a->first->label) {
      merged.emplace_back(b->first, sgn > 0 ? b->second : Rational(-b->second));
      ++b;
    } else {
      Rational c = sgn > 0 ? Rational(a->second + b->second) : Rational(a->second - b->second);
      if (c != 0) merged.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
}

Scalar& Scalar::operator+=(const Scalar& other) {
  unit_ += other.unit_;
  add_terms(other, +1);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  unit_ -= other.unit_;
  add_terms(other, -1);
  return *this;
}

Scalar& Scalar::operator*=(const Rational& factor) {
  if (factor == 0) {
    unit_ = 0;
    terms_.clear();
    return *this;
  }
  unit_ *= factor;
  for (auto& term : terms_) term.second *= factor;
  return *this;
}

Scalar& Scalar::operator/=(const Rational& divisor) {
  unit_ /= divisor;
  for (auto& term : terms_) term.second /= divisor;
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar s(*this);
  s.unit_ = -s.unit_;
  for (auto& term : s.terms_) term.second = -term.second;
  return s;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.unit_ != b.unit_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].first->label != b.terms_[i].first->label) return false;
    if (a.terms_[i].second != b.terms_[i].second) return false;
  }
  return true;
}

std::pair<Rational, Rational> Scalar::enclosure() const {
  Rational lo = unit_;
  Rational hi = unit_;
  for (const auto& [g, c] : terms_) {
    if (c > 0) {
      lo += c * g->lower;
      hi += c * g->upper;
    } else {
      lo += c * g->upper;
      hi += c * g->lower;
    }
  }
  return {lo, hi};
}

int Scalar::sign() const {
  if (terms_.empty()) return unit_.sign();
  auto [lo, hi] = enclosure();
  if (lo > 0) return 1;
  if (hi < 0) return -1;
  throw Error(ErrorCode::UndecidableComparison,
              "generator enclosures too wide to decide the sign of " + str());
}

std::optional<Rational> Scalar::ratio_to(const Scalar& other) const {
  if (other.is_zero()) return std::nullopt;
  if (is_zero()) return Rational(0);
  if (terms_.size() != other.terms_.size()) return std::nullopt;
  std::optional<Rational> r;
  auto check = [&r](const Rational& num, const Rational& den) {
    if (den == 0) return num == 0;
    if (num == 0) return false;
    Rational q = num / den;
    if (!r) r = q;
    return *r == q;
  };
  if (!check(unit_, other.unit_)) return std::nullopt;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].first->label != other.terms_[i].first->label) return std::nullopt;
    if (!check(terms_[i].second, other.terms_[i].second)) return std::nullopt;
  }
  return r;
}

double Scalar::approx() const {
  double v = to_double(unit_);
  for (const auto& [g, c] : terms_) {
    v += to_double(c) * 0.5 * (to_double(g->lower) + to_double(g->upper));
  }
  return v;
}

std::string Scalar::str() const {
  std::ostringstream out;
  bool first = true;
  if (unit_ != 0 || terms_.empty()) {
    out << unit_;
    first = false;
  }
  for (const auto& [g, c] : terms_) {
    if (!first) out << " + ";
    out << c << "*" << g->label;
    first = false;
  }
  return out.str();
}

bool StructuralLess::operator()(const Scalar& a, const Scalar& b) const {
  if (a.rational_part() != b.rational_part()) return a.rational_part() < b.rational_part();
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  for (std::size_t i = 0; i < std::min(ta.size(), tb.size()); ++i) {
    if (ta[i].first->label != tb[i].first->label) return ta[i].first->label < tb[i].first->label;
    if (ta[i].second != tb[i].second) return ta[i].second < tb[i].second;
  }
  return ta.size() < tb.size();
}

ValueGroup ValueGroup::rationals() { return ValueGroup(true, {}); }

ValueGroup::ValueGroup(bool contains_rationals, std::vector<GeneratorRef> irrational)
    : contains_rationals_(contains_rationals), generators_(std::move(irrational)) {
  std::sort(generators_.begin(), generators_.end(),
            [](const GeneratorRef& a, const GeneratorRef& b) { return a->label < b->label; });
}

GeneratorRef ValueGroup::find(std::string_view label) const {
  for (const auto& g : generators_) {
    if (g->label == label) return g;
  }
  return nullptr;
}

bool ValueGroup::contains(const Scalar& value) const {
  if (value.rational_part() != 0 && !contains_rationals_) return false;
  for (const auto& [g, c] : value.terms()) {
    auto declared = find(g->label);
    if (!declared) return false;
  }
  return true;
}

Scalar ValueGroup::base_scale() const {
  if (contains_rationals_) return Scalar(1);
  if (generators_.empty()) {
    throw Error(ErrorCode::NotInLambda, "value group has no generators");
  }
  const auto& g = generators_.front();
  // g * q with q = sign(g) / 2^k, where 2^k exceeds |g|
  int s = g->lower > 0 ? 1 : (g->upper < 0 ? -1 : 0);
  if (s == 0) {
    throw Error(ErrorCode::UndecidableComparison, "cannot certify the sign of generator " + g->label);
  }
  Rational bound = s > 0 ? g->upper : Rational(-g->lower);
  long k = floor_log2(bound) + 1;
  return Scalar::of(g, Rational(s) / pow2(k));
}

}  // namespace tropembed
