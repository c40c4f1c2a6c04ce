#include "incdb/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <map>
#include <sstream>

namespace incdb {

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

namespace {

bool is_ordered_op(CompareOp op) { return op != CompareOp::Eq && op != CompareOp::Ne; }

CompareOp flip(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return CompareOp::Gt;
    case CompareOp::Le: return CompareOp::Ge;
    case CompareOp::Gt: return CompareOp::Lt;
    case CompareOp::Ge: return CompareOp::Le;
    default: return op;
  }
}

std::optional<double> as_number(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

bool compare_values(Symbol a, Symbol b, CompareOp op) {
  if (op == CompareOp::Eq) return a == b;
  if (op == CompareOp::Ne) return a != b;
  int c;
  auto na = as_number(a.str());
  auto nb = as_number(b.str());
  if (na && nb)
    c = *na < *nb ? -1 : (*na > *nb ? 1 : 0);
  else
    c = a.str().compare(b.str()) < 0 ? -1 : (a.str() == b.str() ? 0 : 1);
  switch (op) {
    case CompareOp::Lt: return c < 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
    default: return false;
  }
}

bool eval_bound(const Tuple& t, const Condition& g) {
  switch (g.kind()) {
    case Condition::Kind::AttrConst: return compare_values(t.at(g.lhs()), g.rhs_constant(), g.op());
    case Condition::Kind::AttrAttr: return compare_values(t.at(g.lhs()), t.at(g.rhs_attribute()), g.op());
    case Condition::Kind::Not: return !eval_bound(t, g.children()[0]);
    case Condition::Kind::And: return eval_bound(t, g.children()[0]) && eval_bound(t, g.children()[1]);
    case Condition::Kind::Or: return eval_bound(t, g.children()[0]) || eval_bound(t, g.children()[1]);
  }
  return false;
}

std::string quote(std::string_view v) {
  std::string out = "'";
  for (char ch : v) {
    if (ch == '\'') out += '\'';
    out += ch;
  }
  return out + "'";
}

// ---------------------------------------------------------------------------
// Lexer / parser
// ---------------------------------------------------------------------------

enum class Tok { Ident, String, Number, Op, Comma, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  CompareOp op = CompareOp::Eq;
  std::size_t pos = 0;
};

bool is_delimiter(std::string_view s, std::size_t i) {
  return i >= s.size() || std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ')' || s[i] == ',';
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (i_ >= s_.size()) break;
      const std::size_t start = i_;
      const char ch = s_[i_];
      if (ch == '\'' || ch == '"') {
        out.push_back({Tok::String, quoted(ch), CompareOp::Eq, start});
      } else if (ch == ',') {
        ++i_;
        out.push_back({Tok::Comma, ",", CompareOp::Eq, start});
      } else if (ch == '(') {
        ++i_;
        out.push_back({Tok::LParen, "(", CompareOp::Eq, start});
      } else if (ch == ')') {
        ++i_;
        out.push_back({Tok::RParen, ")", CompareOp::Eq, start});
      } else if (ch == '=' || ch == '!' || ch == '<' || ch == '>') {
        out.push_back(op_token());
      } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '.') {
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.' ||
                                  s_[i_] == '-' || s_[i_] == '+'))
          ++i_;
        std::string text(s_.substr(start, i_ - start));
        if (!as_number(text)) fail(start, "malformed number '" + text + "'");
        out.push_back({Tok::Number, text, CompareOp::Eq, start});
      } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        out.push_back({Tok::Ident, std::string(s_.substr(start, i_ - start)), CompareOp::Eq, start});
      } else {
        fail(start, std::string("unexpected character '") + ch + "'");
      }
    }
    out.push_back({Tok::End, "", CompareOp::Eq, s_.size()});
    return out;
  }

 private:
  [[noreturn]] static void fail(std::size_t pos, const std::string& msg) {
    throw ParseError("query: " + msg + " at offset " + std::to_string(pos));
  }

  // A doubled quote is an escaped quote, except that a doubled quote right
  // before a delimiter stands for one literal quote and closes the string,
  // so 'k'' reads as k'.
  std::string quoted(char q) {
    const std::size_t start = i_++;
    std::string out;
    while (true) {
      if (i_ >= s_.size()) fail(start, "unterminated string");
      const char ch = s_[i_];
      if (ch != q) {
        out += ch;
        ++i_;
        continue;
      }
      if (i_ + 1 < s_.size() && s_[i_ + 1] == q) {
        out += q;
        if (is_delimiter(s_, i_ + 2)) {
          i_ += 2;
          return out;
        }
        i_ += 2;
        continue;
      }
      ++i_;
      return out;
    }
  }

  Token op_token() {
    const std::size_t start = i_;
    auto two = s_.substr(i_, 2);
    auto make = [&](CompareOp op, std::size_t len) {
      i_ += len;
      return Token{Tok::Op, std::string(s_.substr(start, len)), op, start};
    };
    if (two == "!=" || two == "<>") return make(CompareOp::Ne, 2);
    if (two == "<=") return make(CompareOp::Le, 2);
    if (two == ">=") return make(CompareOp::Ge, 2);
    if (s_[i_] == '=') return make(CompareOp::Eq, two == "==" ? 2 : 1);
    if (s_[i_] == '<') return make(CompareOp::Lt, 1);
    if (s_[i_] == '>') return make(CompareOp::Gt, 1);
    fail(start, "unexpected '!'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

bool keyword(const Token& t, std::string_view kw) {
  if (t.kind != Tok::Ident || t.text.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i)
    if (std::toupper(static_cast<unsigned char>(t.text[i])) != kw[i]) return false;
  return true;
}

bool is_reserved(const Token& t) {
  return keyword(t, "SELECT") || keyword(t, "WHERE") || keyword(t, "AND") || keyword(t, "OR") || keyword(t, "NOT");
}

class Parser {
 public:
  Parser(const Universe& u, std::string_view text) : u_(u), toks_(Lexer(text).run()) {}

  Query query() {
    expect_keyword("SELECT");
    Query q;
    do {
      const AttributeId a = attribute(next());
      if (q.select.contains(a)) fail(toks_[pos_ - 1], "attribute listed twice in SELECT");
      q.select.insert(a);
    } while (accept(Tok::Comma));
    if (keyword(peek(), "WHERE")) {
      ++pos_;
      q.where = disjunction();
    }
    expect_end();
    return q;
  }

  Condition condition() {
    Condition c = disjunction();
    expect_end();
    return c;
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError("query: " + msg + " at offset " + std::to_string(t.pos));
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  void expect_keyword(std::string_view kw) {
    if (!keyword(peek(), kw)) fail(peek(), "expected " + std::string(kw));
    ++pos_;
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
  }

  AttributeId attribute(const Token& t) {
    if (t.kind != Tok::Ident || is_reserved(t)) fail(t, "expected an attribute name");
    auto a = u_.find(t.text);
    if (!a) fail(t, "unknown attribute '" + t.text + "'");
    return *a;
  }

  Condition disjunction() {
    Condition c = conjunction();
    while (keyword(peek(), "OR")) {
      ++pos_;
      c = Condition::disj(std::move(c), conjunction());
    }
    return c;
  }

  Condition conjunction() {
    Condition c = negation();
    while (keyword(peek(), "AND")) {
      ++pos_;
      c = Condition::conj(std::move(c), negation());
    }
    return c;
  }

  Condition negation() {
    if (keyword(peek(), "NOT")) {
      ++pos_;
      return Condition::negate(negation());
    }
    if (accept(Tok::LParen)) {
      Condition c = disjunction();
      if (!accept(Tok::RParen)) fail(peek(), "expected ')'");
      return c;
    }
    return atom();
  }

  Condition atom() {
    const Token& left = next();
    const Token& op = next();
    if (op.kind != Tok::Op) fail(op, "expected a comparison operator");
    const Token& right = next();
    const bool left_attr = left.kind == Tok::Ident;
    const bool right_attr = right.kind == Tok::Ident;
    auto constant = [&](const Token& t) {
      if (t.kind != Tok::String && t.kind != Tok::Number) fail(t, "expected an attribute or a constant");
      return Symbol::intern(t.text);
    };
    if (left_attr && right_attr) return Condition::compare(attribute(left), op.op, attribute(right));
    if (left_attr) return Condition::compare(attribute(left), op.op, constant(right));
    if (right_attr) return Condition::compare(attribute(right), flip(op.op), constant(left));
    fail(left, "comparison between two constants");
  }

  const Universe& u_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

AnswerSet collect(const Query& q, const ChaseResult& result, AnswerMode mode, auto&& keep) {
  AnswerSet out;
  out.schema = q.select;
  out.mode = mode;
  for (const auto& t : result.dstar) {
    if (!q.select.subset_of(t.schema())) continue;
    if (q.where && !eval_condition(t, *q.where)) continue;
    if (keep(t)) out.tuples.insert(t.restrict(q.select));
  }
  return out;
}

// No FD in `fds` selected by `relevant` has t.Y recorded as a conflict.
bool clean(const Tuple& t, const ChaseResult& result, auto&& relevant) {
  const auto& fds = result.fds();
  for (std::size_t f = 0; f < fds.size(); ++f) {
    if (!relevant(fds[f])) continue;
    if (result.inc.at(f).contains(t.restrict(fds[f].lhs))) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Condition
// ---------------------------------------------------------------------------

Condition Condition::compare(AttributeId a, CompareOp op, Symbol constant) {
  Condition c;
  c.kind_ = Kind::AttrConst;
  c.op_ = op;
  c.lhs_ = a;
  c.rhs_const_ = constant;
  return c;
}

Condition Condition::compare(AttributeId a, CompareOp op, AttributeId b) {
  Condition c;
  c.kind_ = Kind::AttrAttr;
  c.op_ = op;
  c.lhs_ = a;
  c.rhs_attr_ = b;
  return c;
}

Condition Condition::negate(Condition inner) {
  Condition c;
  c.kind_ = Kind::Not;
  c.children_.push_back(std::move(inner));
  return c;
}

Condition Condition::conj(Condition l, Condition r) {
  Condition c;
  c.kind_ = Kind::And;
  c.children_.push_back(std::move(l));
  c.children_.push_back(std::move(r));
  return c;
}

Condition Condition::disj(Condition l, Condition r) {
  Condition c = conj(std::move(l), std::move(r));
  c.kind_ = Kind::Or;
  return c;
}

AttributeSet Condition::mentioned() const {
  switch (kind_) {
    case Kind::AttrConst: return AttributeSet::single(lhs_);
    case Kind::AttrAttr: return AttributeSet::single(lhs_) | AttributeSet::single(rhs_attr_);
    default: {
      AttributeSet out;
      for (const auto& ch : children_) out = out | ch.mentioned();
      return out;
    }
  }
}

void Condition::validate(const Universe& u) const {
  switch (kind_) {
    case Kind::AttrAttr:
      if (rhs_attr_ >= u.size() || !u.comparable(lhs_, rhs_attr_))
        throw SemanticError("attributes " + u.name(lhs_) + " and " + u.name(rhs_attr_) +
                            " have incomparable domains");
      [[fallthrough]];
    case Kind::AttrConst:
      if (lhs_ >= u.size()) throw SemanticError("condition attribute outside the universe");
      if (is_ordered_op(op_) && !u.ordered(lhs_))
        throw SemanticError("operator " + std::string(to_string(op_)) + " needs an ordered domain, " +
                            u.name(lhs_) + " has domain " + u.domain(lhs_));
      return;
    default:
      for (const auto& ch : children_) ch.validate(u);
  }
}

std::string Condition::to_text(const Universe& u) const {
  switch (kind_) {
    case Kind::AttrConst: return u.name(lhs_) + " " + std::string(to_string(op_)) + " " + quote(rhs_const_.str());
    case Kind::AttrAttr: return u.name(lhs_) + " " + std::string(to_string(op_)) + " " + u.name(rhs_attr_);
    case Kind::Not: return "NOT (" + children_[0].to_text(u) + ")";
    case Kind::And: return "(" + children_[0].to_text(u) + ") AND (" + children_[1].to_text(u) + ")";
    case Kind::Or: return "(" + children_[0].to_text(u) + ") OR (" + children_[1].to_text(u) + ")";
  }
  return {};
}

bool eval_condition(const Tuple& t, const Condition& gamma) {
  if (!gamma.mentioned().subset_of(t.schema())) return false;
  return eval_bound(t, gamma);
}

std::string Query::to_text(const Universe& u) const {
  std::string out = "SELECT " + u.format(select, ", ");
  if (where) out += " WHERE " + where->to_text(u);
  return out;
}

Query parse_query(const Universe& u, std::string_view text) {
  Query q = Parser(u, text).query();
  if (q.where) q.where->validate(u);
  return q;
}

Condition parse_condition(const Universe& u, std::string_view text) {
  Condition c = Parser(u, text).condition();
  c.validate(u);
  return c;
}

// ---------------------------------------------------------------------------
// Answers
// ---------------------------------------------------------------------------

std::string_view to_string(AnswerMode m) {
  switch (m) {
    case AnswerMode::Plain: return "plain";
    case AnswerMode::Consistent: return "consistent";
    case AnswerMode::Lower: return "lower";
    case AnswerMode::Upper: return "upper";
  }
  return "?";
}

std::optional<AnswerMode> answer_mode_from_string(std::string_view s) {
  for (auto m : {AnswerMode::Plain, AnswerMode::Consistent, AnswerMode::Lower, AnswerMode::Upper})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::vector<Tuple> AnswerSet::canonical_rows() const {
  std::vector<Tuple> out(tuples.begin(), tuples.end());
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

AnswerSet plain_answer(const Query& q, const ChaseResult& result) {
  return collect(q, result, AnswerMode::Plain, [](const Tuple&) { return true; });
}

AnswerSet consistent_answer(const Query& q, const ChaseResult& result) {
  return collect(q, result, AnswerMode::Consistent, [&](const Tuple& t) {
    return clean(t, result, [&](const FD& fd) { return fd.attributes().subset_of(q.select); });
  });
}

RepairAnswers repair_answers(const Query& q, const ChaseResult& result) {
  RepairAnswers out;
  out.lower = collect(q, result, AnswerMode::Lower, [&](const Tuple& t) {
    return clean(t, result, [&](const FD& fd) { return fd.attributes().subset_of(t.schema()); });
  });
  out.upper = collect(q, result, AnswerMode::Upper, [&](const Tuple& t) {
    return clean(t, result, [&](const FD& fd) {
      return fd.attributes().subset_of(t.schema()) && q.select.contains(fd.rhs);
    });
  });
  return out;
}

AnswerSet answer(const Query& q, const ChaseResult& result, AnswerMode mode) {
  switch (mode) {
    case AnswerMode::Plain: return plain_answer(q, result);
    case AnswerMode::Consistent: return consistent_answer(q, result);
    case AnswerMode::Lower: return repair_answers(q, result).lower;
    case AnswerMode::Upper: return repair_answers(q, result).upper;
  }
  return {};
}

std::vector<std::pair<Tuple, TruthValue>> annotate(const AnswerSet& answers, const ChaseResult& result,
                                                   const IncSet& incs) {
  std::vector<std::pair<Tuple, TruthValue>> out;
  for (auto& t : answers.canonical_rows()) {
    const TruthValue v = truth_value(t, result, incs);
    out.emplace_back(std::move(t), v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Repairs
// ---------------------------------------------------------------------------

namespace {

struct ChoicePoint {
  std::size_t fd;
  Tuple x;
  std::vector<Symbol> values;  // candidate surviving A-values
};

std::vector<ChoicePoint> choice_points(const ChaseResult& result) {
  std::vector<ChoicePoint> out;
  const auto& fds = result.fds();
  for (std::size_t f = 0; f < fds.size(); ++f) {
    for (const auto& x : result.inc.at(f)) {
      std::set<Symbol> values;
      for (const auto& row : result.dstar)
        if (fds[f].attributes().subset_of(row.schema()) && row.restrict(fds[f].lhs) == x)
          values.insert(row.at(fds[f].rhs));
      std::vector<Symbol> sorted(values.begin(), values.end());
      std::sort(sorted.begin(), sorted.end(), lexical_less);
      out.push_back({f, x, std::move(sorted)});
    }
  }
  return out;
}

std::size_t product_size(const std::vector<ChoicePoint>& points) {
  std::size_t n = 1;
  for (const auto& p : points) {
    if (p.values.empty()) continue;
    if (n > std::numeric_limits<std::size_t>::max() / p.values.size()) return std::numeric_limits<std::size_t>::max();
    n *= p.values.size();
  }
  return n;
}

}  // namespace

std::size_t repair_choice_count(const ChaseResult& result) { return product_size(choice_points(result)); }

std::vector<Repair> repairs_by_choice(const ChaseResult& result, std::size_t cap) {
  const auto points = choice_points(result);
  const std::size_t total = product_size(points);
  if (total > cap)
    throw CapExceeded("repair choice product " +
                      (total == std::numeric_limits<std::size_t>::max() ? std::string("overflows")
                                                                        : std::to_string(total)) +
                      " exceeds the cap of " + std::to_string(cap));
  const auto& fds = result.fds();
  std::set<Repair> out;
  std::vector<std::size_t> pick(points.size(), 0);
  while (true) {
    Repair r{result.dstar};
    for (std::size_t p = 0; p < points.size(); ++p) {
      const auto& cp = points[p];
      if (cp.values.empty()) continue;
      const FD& fd = fds[cp.fd];
      const Symbol keep = cp.values[pick[p]];
      for (const auto& row : result.dstar)
        if (fd.attributes().subset_of(row.schema()) && row.restrict(fd.lhs) == cp.x && row.at(fd.rhs) != keep)
          r.rows.erase(row);
    }
    out.insert(std::move(r));
    std::size_t p = 0;
    for (; p < points.size(); ++p) {
      if (points[p].values.empty()) continue;
      if (++pick[p] < points[p].values.size()) break;
      pick[p] = 0;
    }
    if (p == points.size()) break;
  }
  return {out.begin(), out.end()};
}

bool satisfies_fds(const Table& rows, const std::vector<FD>& fds) {
  for (const auto& fd : fds) {
    std::map<Tuple, Symbol> seen;
    for (const auto& row : rows) {
      if (!fd.attributes().subset_of(row.schema())) continue;
      auto [it, fresh] = seen.emplace(row.restrict(fd.lhs), row.at(fd.rhs));
      if (!fresh && it->second != row.at(fd.rhs)) return false;
    }
  }
  return true;
}

}  // namespace incdb
