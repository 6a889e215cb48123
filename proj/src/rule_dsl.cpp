#include "fzs/rule_dsl.hpp"

#include <charconv>
#include <map>
#include <optional>
#include <set>

#include "fzs/error.hpp"

namespace fzs {

namespace {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
    } else if (c == '{' || c == '}') {
      out.push_back({std::string(1, c), line, col});
      advance();
    } else {
      Token t{{}, line, col};
      while (i < src.size()) {
        const char d = src[i];
        if (d == ' ' || d == '\t' || d == '\r' || d == '\n' || d == '{' || d == '}' || d == '#') {
          break;
        }
        t.text.push_back(d);
        advance();
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

struct PendingTerm {
  std::string label;
  MembershipFunction mf;
  Token at;
};

struct PendingVar {
  std::string name;
  Universe universe;
  std::vector<PendingTerm> terms;
  Token at;
};

struct Clause {
  Token var;
  Token label;
};

struct PendingRule {
  std::vector<Clause> antecedents;
  Clause consequent;
  Token at;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {
    eof_line_ = 1;
    eof_col_ = 1;
    for (char c : text) {
      if (c == '\n') {
        ++eof_line_;
        eof_col_ = 1;
      } else {
        ++eof_col_;
      }
    }
  }

  void run() {
    while (pos_ < toks_.size()) {
      const Token& t = toks_[pos_];
      if (t.text == "var") {
        parse_var();
      } else if (t.text == "rule:") {
        parse_rule();
      } else if (t.text == "tnorm") {
        ++pos_;
        const Token& v = next("t-norm name");
        if (v.text == "min") {
          tnorm_ = TNorm::min;
        } else if (v.text == "product") {
          tnorm_ = TNorm::product;
        } else {
          fail(v, "unknown t-norm '" + v.text + "' (expected min or product)");
        }
      } else {
        fail(t, "expected 'var', 'rule:' or 'tnorm', found '" + t.text + "'");
      }
    }
  }

  std::vector<PendingVar> vars;
  std::vector<PendingRule> rules;
  TNorm tnorm_ = TNorm::min;

  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw SyntaxError(msg, t.line, t.column);
  }

 private:
  const Token& next(const char* what) {
    if (pos_ >= toks_.size()) {
      throw SyntaxError(std::string("unexpected end of document, expected ") + what, eof_line_,
                        eof_col_);
    }
    return toks_[pos_++];
  }

  void expect(const char* word) {
    const Token& t = next(word);
    if (t.text != word) fail(t, std::string("expected '") + word + "', found '" + t.text + "'");
  }

  const Token& name(const char* what) {
    const Token& t = next(what);
    if (t.text == "{" || t.text == "}") fail(t, std::string("expected ") + what);
    return t;
  }

  double number() {
    const Token& t = next("number");
    double v = 0.0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail(t, "expected number, found '" + t.text + "'");
    return v;
  }

  void parse_var() {
    PendingVar v{{}, {}, {}, toks_[pos_]};
    ++pos_;
    v.name = name("variable name").text;
    expect("range");
    v.universe.lo = number();
    v.universe.hi = number();
    if (pos_ < toks_.size() && toks_[pos_].text == "unit") {
      ++pos_;
      v.universe.unit = name("unit").text;
    }
    expect("{");
    while (true) {
      const Token& t = next("'term' or '}'");
      if (t.text == "}") break;
      if (t.text != "term") fail(t, "expected 'term' or '}', found '" + t.text + "'");
      const Token& label = name("term label");
      const Token& kind = next("'tri' or 'trap'");
      try {
        if (kind.text == "tri") {
          const double a = number(), b = number(), c = number();
          v.terms.push_back({label.text, MembershipFunction::triangle(a, b, c), label});
        } else if (kind.text == "trap") {
          const double a = number(), b = number(), c = number(), d = number();
          v.terms.push_back({label.text, MembershipFunction::trapezoid(a, b, c, d), label});
        } else {
          fail(kind, "expected 'tri' or 'trap', found '" + kind.text + "'");
        }
      } catch (const SyntaxError&) {
        throw;
      } catch (const ValidationError& e) {
        fail(label, "term " + label.text + ": " + e.what());
      }
    }
    vars.push_back(std::move(v));
  }

  Clause clause() {
    Clause c{name("variable name"), {}};
    expect("is");
    c.label = name("term label");
    return c;
  }

  void parse_rule() {
    PendingRule r{{}, {}, toks_[pos_]};
    ++pos_;
    expect("IF");
    r.antecedents.push_back(clause());
    while (true) {
      const Token& t = next("'AND' or 'THEN'");
      if (t.text == "THEN") break;
      if (t.text != "AND") fail(t, "expected 'AND' or 'THEN', found '" + t.text + "'");
      r.antecedents.push_back(clause());
    }
    r.consequent = clause();
    rules.push_back(std::move(r));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t eof_line_;
  std::size_t eof_col_;
};

LinguisticVariable build_variable(const PendingVar& v) {
  std::vector<Term> terms;
  for (const auto& t : v.terms) terms.push_back({t.label, t.mf});
  try {
    return LinguisticVariable(v.name, v.universe, std::move(terms));
  } catch (const ValidationError& e) {
    Parser::fail(v.at, e.what());
  }
}

std::size_t resolve_label(const LinguisticVariable& v, const Token& label) {
  const auto idx = v.find_term(label.text);
  if (idx == v.term_count()) {
    Parser::fail(label, "unknown term label '" + label.text + "' for variable " + v.name());
  }
  return idx;
}

void append_number(std::string& out, double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, p);
}

}  // namespace

RuleBase parse_rules(std::string_view text, ParseOptions options) {
  Parser p(text);
  p.run();

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < p.vars.size(); ++i) {
    if (!index.emplace(p.vars[i].name, i).second) {
      Parser::fail(p.vars[i].at, "duplicate variable " + p.vars[i].name);
    }
  }
  if (p.rules.empty()) throw ValidationError("no rules");

  auto var_of = [&](const Token& t) {
    const auto it = index.find(t.text);
    if (it == index.end()) Parser::fail(t, "unknown variable '" + t.text + "'");
    return it->second;
  };

  const std::size_t out_idx = var_of(p.rules.front().consequent.var);
  std::vector<LinguisticVariable> built;
  built.reserve(p.vars.size());
  for (const auto& v : p.vars) built.push_back(build_variable(v));

  std::vector<std::size_t> slot(p.vars.size(), 0);  // var index -> input slot
  std::vector<LinguisticVariable> inputs;
  for (std::size_t i = 0; i < p.vars.size(); ++i) {
    if (i == out_idx) continue;
    slot[i] = inputs.size();
    inputs.push_back(built[i]);
  }

  std::vector<Rule> rules;
  for (const auto& pr : p.rules) {
    if (var_of(pr.consequent.var) != out_idx) {
      Parser::fail(pr.consequent.var, "rule concludes on '" + pr.consequent.var.text +
                                          "' but the output variable is " + built[out_idx].name());
    }
    Rule r;
    r.antecedents.assign(inputs.size(), 0);
    std::vector<bool> seen(inputs.size(), false);
    for (const auto& c : pr.antecedents) {
      const auto vi = var_of(c.var);
      if (vi == out_idx) Parser::fail(c.var, "output variable used as antecedent");
      if (seen[slot[vi]]) Parser::fail(c.var, "variable " + c.var.text + " repeated in rule");
      seen[slot[vi]] = true;
      r.antecedents[slot[vi]] = resolve_label(built[vi], c.label);
    }
    for (std::size_t s = 0; s < inputs.size(); ++s) {
      if (!seen[s]) Parser::fail(pr.at, "rule does not constrain input " + inputs[s].name());
    }
    r.consequent = resolve_label(built[out_idx], pr.consequent.label);
    rules.push_back(std::move(r));
  }

  RuleBase rb(std::move(inputs), built[out_idx], std::move(rules), p.tnorm_);
  if (!options.allow_conflicts) {
    const auto conflicts = find_conflicts(rb);
    if (!conflicts.empty()) {
      const auto [i, j] = conflicts.front();
      const auto& at = p.rules[j].at;
      Parser::fail(at, "rule conflicts with rule on line " + std::to_string(p.rules[i].at.line) +
                           ": " + rb.describe(rb.rules()[i]) + " vs " +
                           rb.describe(rb.rules()[j]));
    }
  }
  return rb;
}

std::string serialize_rules(const RuleBase& rb) {
  std::string out;
  out += "tnorm " + to_string(rb.tnorm()) + "\n";
  auto emit_var = [&](const LinguisticVariable& v) {
    out += "\nvar " + v.name() + " range ";
    append_number(out, v.universe().lo);
    out += ' ';
    append_number(out, v.universe().hi);
    if (!v.universe().unit.empty()) out += " unit " + v.universe().unit;
    out += " {\n";
    for (const auto& t : v.terms()) {
      out += "  term " + t.label;
      out += t.mf.kind() == MembershipFunction::Kind::triangle ? " tri" : " trap";
      for (const double p : t.mf.points()) {
        out += ' ';
        append_number(out, p);
      }
      out += '\n';
    }
    out += "}\n";
  };
  for (const auto& v : rb.inputs()) emit_var(v);
  emit_var(rb.output());
  out += '\n';
  for (const auto& r : rb.rules()) out += "rule: " + rb.describe(r) + "\n";
  return out;
}

CompletenessReport check_completeness(const RuleBase& rb) {
  CompletenessReport rep;
  rep.total = 1;
  for (const auto& v : rb.inputs()) rep.total *= v.term_count();

  std::set<std::vector<std::size_t>> present;
  for (const auto& r : rb.rules()) present.insert(r.antecedents);

  std::vector<std::size_t> combo(rb.inputs().size(), 0);
  for (std::size_t n = 0; n < rep.total; ++n) {
    if (present.contains(combo)) {
      ++rep.covered;
    } else {
      rep.gaps.push_back(combo);
    }
    // Odometer increment, last input fastest.
    for (std::size_t i = combo.size(); i-- > 0;) {
      if (++combo[i] < rb.inputs()[i].term_count()) break;
      combo[i] = 0;
    }
  }
  for (const auto& [i, j] : find_conflicts(rb)) rep.conflicts.push_back({i, j});
  return rep;
}

std::string describe_antecedents(const RuleBase& rb, const std::vector<std::size_t>& antecedents) {
  std::string s;
  for (std::size_t i = 0; i < rb.inputs().size(); ++i) {
    if (i) s += " AND ";
    s += rb.inputs()[i].name() + " is " + rb.inputs()[i].terms()[antecedents[i]].label;
  }
  return s;
}

LinguisticVariable default_utilization_variable() {
  using MF = MembershipFunction;
  return {"GU",
          {0, 100, "%"},
          {{"L", MF::trapezoid(0, 0, 30, 50)},
           {"M", MF::triangle(30, 50, 70)},
           {"H", MF::trapezoid(50, 70, 100, 100)}}};
}

LinguisticVariable default_temperature_variable() {
  using MF = MembershipFunction;
  return {"GT",
          {20, 100, "C"},
          {{"L", MF::trapezoid(20, 20, 45, 60)},
           {"M", MF::triangle(45, 60, 75)},
           {"H", MF::trapezoid(60, 75, 100, 100)}}};
}

LinguisticVariable default_targets_variable() {
  using MF = MembershipFunction;
  return {"NT",
          {0, 200, "targets"},
          {{"L", MF::trapezoid(0, 0, 20, 50)},
           {"M", MF::triangle(20, 50, 80)},
           {"H", MF::trapezoid(50, 80, 200, 200)}}};
}

LinguisticVariable default_score_variable() {
  using MF = MembershipFunction;
  return {"Score",
          {0, 100, "score"},
          {{"S", MF::trapezoid(0, 0, 25, 45)},
           {"M", MF::triangle(30, 50, 70)},
           {"L", MF::trapezoid(55, 75, 100, 100)}}};
}

namespace {

// GU, GT, NT -> Score
constexpr const char* kDefaultTable[27][4] = {
    {"L", "L", "L", "M"}, {"L", "L", "M", "M"}, {"L", "L", "H", "L"},
    {"L", "M", "L", "S"}, {"L", "M", "M", "M"}, {"L", "M", "H", "M"},
    {"L", "H", "L", "S"}, {"L", "H", "M", "S"}, {"L", "H", "H", "M"},
    {"M", "L", "L", "S"}, {"M", "L", "M", "M"}, {"M", "L", "H", "L"},
    {"M", "M", "L", "S"}, {"M", "M", "M", "M"}, {"M", "M", "H", "M"},
    {"M", "H", "L", "S"}, {"M", "H", "M", "S"}, {"M", "H", "H", "M"},
    {"H", "L", "L", "S"}, {"H", "L", "M", "S"}, {"H", "L", "H", "M"},
    {"H", "M", "L", "S"}, {"H", "M", "M", "S"}, {"H", "M", "H", "M"},
    {"H", "H", "L", "S"}, {"H", "H", "M", "S"}, {"H", "H", "H", "S"},
};

RuleBase make_default_rulebase() {
  std::vector<LinguisticVariable> inputs{default_utilization_variable(),
                                         default_temperature_variable(),
                                         default_targets_variable()};
  auto output = default_score_variable();
  std::vector<Rule> rules;
  for (const auto& row : kDefaultTable) {
    Rule r;
    for (std::size_t i = 0; i < 3; ++i) r.antecedents.push_back(inputs[i].find_term(row[i]));
    r.consequent = output.find_term(row[3]);
    rules.push_back(std::move(r));
  }
  return RuleBase(std::move(inputs), std::move(output), std::move(rules), TNorm::min);
}

}  // namespace

const RuleBase& builtin_rulebase() {
  static const RuleBase rb = make_default_rulebase();
  return rb;
}

std::string_view builtin_rules_text() {
  static const std::string text = serialize_rules(builtin_rulebase());
  return text;
}

}  // namespace fzs
