#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fzs {

/// Piecewise-linear membership shape.
///
/// Triangles are stored as trapezoids with a degenerate plateau (b == c), so a
/// single evaluation path serves both kinds. A shape with a == b is a left
/// shoulder and a trapezoid with c == d a right shoulder: full membership
/// extends past the flat end to the universe edge.
class MembershipFunction {
 public:
  enum class Kind { triangle, trapezoid };

  static MembershipFunction triangle(double a, double b, double c);
  static MembershipFunction trapezoid(double a, double b, double c, double d);

  Kind kind() const noexcept { return kind_; }

  /// Abscissae as declared: three for a triangle, four for a trapezoid.
  std::vector<double> points() const;

  /// Normalized corners (a, b, c, d); triangles repeat their apex.
  const std::array<double, 4>& corners() const noexcept { return p_; }

  bool left_shoulder() const noexcept { return p_[0] == p_[1]; }
  bool right_shoulder() const noexcept { return p_[2] == p_[3]; }

  /// Lowest / highest abscissa with nonzero membership (ignoring shoulders).
  double support_lo() const noexcept { return p_[0]; }
  double support_hi() const noexcept { return p_[3]; }

  double operator()(double x) const noexcept;

  friend bool operator==(const MembershipFunction&, const MembershipFunction&) = default;

 private:
  MembershipFunction(Kind kind, std::array<double, 4> p) : kind_(kind), p_(p) {}

  Kind kind_;
  std::array<double, 4> p_;
};

/// Evaluate `mf` at `x`; x is expected to be already clamped to the universe.
inline double membership(const MembershipFunction& mf, double x) noexcept { return mf(x); }

struct Universe {
  double lo = 0.0;
  double hi = 1.0;
  std::string unit;

  double span() const noexcept { return hi - lo; }
  double clamp(double x) const noexcept { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }

  friend bool operator==(const Universe&, const Universe&) = default;
};

struct Term {
  std::string label;
  MembershipFunction mf;

  friend bool operator==(const Term&, const Term&) = default;
};

/// A named universe partitioned into ordered fuzzy terms.
///
/// Construction rejects: empty universes, duplicate labels, term supports
/// outside the universe, and coverage gaps (points with zero membership in
/// every term).
class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, Universe universe, std::vector<Term> terms);

  const std::string& name() const noexcept { return name_; }
  const Universe& universe() const noexcept { return universe_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }

  /// Index of `label`, or term_count() when absent.
  std::size_t find_term(std::string_view label) const noexcept;

  friend bool operator==(const LinguisticVariable&, const LinguisticVariable&) = default;

 private:
  std::string name_;
  Universe universe_;
  std::vector<Term> terms_;
};

/// Degrees of one crisp value in every term of a variable, in term order.
struct MembershipVector {
  const LinguisticVariable* variable = nullptr;
  std::vector<double> degrees;
  /// Input lay outside the universe and was clamped before evaluation.
  bool clamped = false;
};

MembershipVector fuzzify(const LinguisticVariable& v, double x);

}  // namespace fzs
