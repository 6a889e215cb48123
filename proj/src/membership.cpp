#include "fzs/membership.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fzs/error.hpp"

namespace fzs {

namespace {

void require_ordered(const std::array<double, 4>& p, std::size_t n) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isfinite(p[i])) throw ValidationError("membership abscissa is not finite");
  }
  for (std::size_t i = 0; i + 1 < 4; ++i) {
    if (p[i] > p[i + 1]) {
      throw ValidationError("membership abscissae must be nondecreasing (" + std::to_string(n) +
                            "-point shape)");
    }
  }
}

}  // namespace

MembershipFunction MembershipFunction::triangle(double a, double b, double c) {
  std::array<double, 4> p{a, b, b, c};
  require_ordered(p, 3);
  return {Kind::triangle, p};
}

MembershipFunction MembershipFunction::trapezoid(double a, double b, double c, double d) {
  std::array<double, 4> p{a, b, c, d};
  require_ordered(p, 4);
  return {Kind::trapezoid, p};
}

std::vector<double> MembershipFunction::points() const {
  if (kind_ == Kind::triangle) return {p_[0], p_[1], p_[3]};
  return {p_[0], p_[1], p_[2], p_[3]};
}

double MembershipFunction::operator()(double x) const noexcept {
  const auto [a, b, c, d] = p_;
  if (x >= b && x <= c) return 1.0;
  if (x < b) {
    if (a == b) return 1.0;  // left shoulder
    if (x <= a) return 0.0;
    return (x - a) / (b - a);
  }
  if (c == d) return 1.0;  // right shoulder
  if (x >= d) return 0.0;
  return (d - x) / (d - c);
}

LinguisticVariable::LinguisticVariable(std::string name, Universe universe, std::vector<Term> terms)
    : name_(std::move(name)), universe_(std::move(universe)), terms_(std::move(terms)) {
  if (name_.empty()) throw ValidationError("variable name must not be empty");
  if (!(std::isfinite(universe_.lo) && std::isfinite(universe_.hi)) ||
      !(universe_.lo < universe_.hi)) {
    throw ValidationError("variable " + name_ + ": universe requires lo < hi");
  }
  if (terms_.empty()) throw ValidationError("variable " + name_ + ": no terms");

  std::set<std::string> seen;
  for (const auto& t : terms_) {
    if (!seen.insert(t.label).second) {
      throw ValidationError("variable " + name_ + ": duplicate term label " + t.label);
    }
    if (t.mf.support_lo() < universe_.lo || t.mf.support_hi() > universe_.hi) {
      throw ValidationError("variable " + name_ + ": term " + t.label +
                            " has support outside the universe");
    }
  }

  // Coverage: the membership of a term is zero only outside its open support,
  // so gaps can only open between supports. Sweep the covered intervals.
  struct Span {
    double lo, hi;
    bool lo_closed, hi_closed;
  };
  std::vector<Span> spans;
  for (const auto& t : terms_) {
    const auto& mf = t.mf;
    Span s{mf.support_lo(), mf.support_hi(), false, false};
    if (mf.left_shoulder()) {
      s.lo = universe_.lo;
      s.lo_closed = true;
    }
    if (mf.right_shoulder()) {
      s.hi = universe_.hi;
      s.hi_closed = true;
    }
    spans.push_back(s);
  }
  std::sort(spans.begin(), spans.end(), [](const Span& x, const Span& y) {
    return x.lo < y.lo || (x.lo == y.lo && x.lo_closed && !y.lo_closed);
  });
  double reach = universe_.lo;
  bool reach_closed = false;  // whether `reach` itself is covered
  bool started = false;
  for (const auto& s : spans) {
    const bool gap = !started ? (s.lo > universe_.lo || !s.lo_closed)
                              : (s.lo > reach || (s.lo == reach && !reach_closed && !s.lo_closed));
    if (gap) {
      throw ValidationError("variable " + name_ + ": coverage gap near " +
                            std::to_string(started ? reach : universe_.lo));
    }
    started = true;
    if (s.hi > reach || (s.hi == reach && s.hi_closed)) {
      reach = s.hi;
      reach_closed = s.hi_closed;
    }
  }
  if (reach < universe_.hi || !reach_closed) {
    throw ValidationError("variable " + name_ + ": coverage gap near " + std::to_string(reach));
  }
}

std::size_t LinguisticVariable::find_term(std::string_view label) const noexcept {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].label == label) return i;
  }
  return terms_.size();
}

MembershipVector fuzzify(const LinguisticVariable& v, double x) {
  if (std::isnan(x)) throw ValidationError("variable " + v.name() + ": input is NaN");
  MembershipVector out;
  out.variable = &v;
  const double xc = v.universe().clamp(x);
  out.clamped = xc != x;
  out.degrees.reserve(v.term_count());
  for (const auto& t : v.terms()) out.degrees.push_back(t.mf(xc));
  return out;
}

}  // namespace fzs
