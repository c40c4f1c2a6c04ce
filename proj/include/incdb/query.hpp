#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "incdb/chase.hpp"
#include "incdb/classify.hpp"

namespace incdb {

enum class CompareOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CompareOp op);

// Selection formula over one tuple. Atoms are A θ constant or A θ A'.
class Condition {
 public:
  enum class Kind : std::uint8_t { AttrConst, AttrAttr, Not, And, Or };

  static Condition compare(AttributeId a, CompareOp op, Symbol constant);
  static Condition compare(AttributeId a, CompareOp op, AttributeId b);
  static Condition negate(Condition c);
  static Condition conj(Condition l, Condition r);
  static Condition disj(Condition l, Condition r);

  Kind kind() const { return kind_; }
  CompareOp op() const { return op_; }
  AttributeId lhs() const { return lhs_; }
  AttributeId rhs_attribute() const { return rhs_attr_; }
  Symbol rhs_constant() const { return rhs_const_; }
  const std::vector<Condition>& children() const { return children_; }

  // Every attribute occurring anywhere in the formula, negated parts included.
  AttributeSet mentioned() const;

  // Throws SemanticError on A θ A' across domains or an ordered θ on an
  // unordered domain.
  void validate(const Universe& u) const;

  std::string to_text(const Universe& u) const;

 private:
  Kind kind_ = Kind::AttrConst;
  CompareOp op_ = CompareOp::Eq;
  AttributeId lhs_ = 0;
  AttributeId rhs_attr_ = 0;
  Symbol rhs_const_;
  std::vector<Condition> children_;
};

// t satisfies Γ: every attribute mentioned in Γ is bound in t and the formula
// is true under two-valued evaluation. Ordered comparisons are numeric when
// both sides parse as numbers, lexicographic otherwise.
bool eval_condition(const Tuple& t, const Condition& gamma);

struct Query {
  AttributeSet select;
  std::optional<Condition> where;

  std::string to_text(const Universe& u) const;
};

// SELECT A, B [WHERE cond]. Keywords are case-insensitive; NOT binds tighter
// than AND, AND tighter than OR. Constants are quoted ('..' or "..") or
// numeric. Throws ParseError on syntax errors, SemanticError on domain errors.
Query parse_query(const Universe& u, std::string_view text);
Condition parse_condition(const Universe& u, std::string_view text);

enum class AnswerMode : std::uint8_t { Plain, Consistent, Lower, Upper };

std::string_view to_string(AnswerMode m);
std::optional<AnswerMode> answer_mode_from_string(std::string_view s);

struct AnswerSet {
  AttributeSet schema;
  TupleSet tuples;
  AnswerMode mode = AnswerMode::Plain;

  std::vector<Tuple> canonical_rows() const;
};

// π_X(σ_Γ(D*))
AnswerSet plain_answer(const Query& q, const ChaseResult& result);
// Rows whose projection on the left-hand side of every FD inside X is not a
// recorded conflict.
AnswerSet consistent_answer(const Query& q, const ChaseResult& result);

struct RepairAnswers {
  AnswerSet lower;
  AnswerSet upper;
};

// Linear-time repair-based answers from D* and the conflict ledger.
RepairAnswers repair_answers(const Query& q, const ChaseResult& result);

AnswerSet answer(const Query& q, const ChaseResult& result, AnswerMode mode);

// v_Δ(x) for every answer tuple, in canonical order.
std::vector<std::pair<Tuple, TruthValue>> annotate(const AnswerSet& answers, const ChaseResult& result,
                                                   const IncSet& incs);

struct Repair {
  Table rows;

  friend bool operator==(const Repair&, const Repair&) = default;
  friend auto operator<=>(const Repair& a, const Repair& b) { return a.rows.rows() <=> b.rows.rows(); }
};

inline constexpr std::size_t kDefaultRepairCap = 4096;

// Size of the choice product: ∏ over conflicted (X -> A, x) of the number of
// A-values α with xα in D*. Saturates at SIZE_MAX.
std::size_t repair_choice_count(const ChaseResult& result);

// Enumerates every combination of one surviving A-value per conflicted x and
// removes the rows carrying the other values. Duplicates are collapsed.
// Throws CapExceeded when the choice product exceeds `cap`.
std::vector<Repair> repairs_by_choice(const ChaseResult& result, std::size_t cap = kDefaultRepairCap);

// Relational FD satisfaction: rows defined on XA that agree on X agree on A.
bool satisfies_fds(const Table& rows, const std::vector<FD>& fds);

}  // namespace incdb
