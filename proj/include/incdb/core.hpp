#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace incdb {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (schema, table, FD file, tuple literal, query syntax).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a semantic rule (incomparable domains, ...).
class SemanticError : public Error {
 public:
  using Error::Error;
};

// A configured resource cap was exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

// Interned string. Equality and hashing are by id; the id order is the
// interning order, so use `str()` whenever a content-based order is needed.
class Symbol {
 public:
  Symbol() = default;
  static Symbol intern(std::string_view text);

  std::string_view str() const;
  std::uint32_t id() const { return id_; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;  // id 0 is the empty string
};

// Content order used for all serialized output.
bool lexical_less(Symbol a, Symbol b);

// ---------------------------------------------------------------------------
// Attributes
// ---------------------------------------------------------------------------

using AttributeId = std::uint32_t;
inline constexpr std::size_t kMaxAttributes = 64;

// Set of attributes of one universe, as a bitmask over universe positions.
class AttributeSet {
 public:
  constexpr AttributeSet() = default;
  constexpr explicit AttributeSet(std::uint64_t bits) : bits_(bits) {}
  AttributeSet(std::initializer_list<AttributeId> ids) {
    for (auto id : ids) insert(id);
  }

  static constexpr AttributeSet single(AttributeId a) { return AttributeSet(std::uint64_t{1} << a); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const { return std::popcount(bits_); }
  constexpr bool contains(AttributeId a) const { return (bits_ >> a) & 1U; }
  constexpr bool subset_of(AttributeSet o) const { return (bits_ & ~o.bits_) == 0; }

  void insert(AttributeId a) { bits_ |= std::uint64_t{1} << a; }
  void erase(AttributeId a) { bits_ &= ~(std::uint64_t{1} << a); }

  AttributeSet operator|(AttributeSet o) const { return AttributeSet(bits_ | o.bits_); }
  AttributeSet operator&(AttributeSet o) const { return AttributeSet(bits_ & o.bits_); }
  AttributeSet operator-(AttributeSet o) const { return AttributeSet(bits_ & ~o.bits_); }

  // Members in increasing universe order.
  std::vector<AttributeId> members() const;

  // Calls f(sub) for every nonempty subset, including the set itself.
  template <class F>
  void for_each_nonempty_subset(F&& f) const {
    for (std::uint64_t sub = bits_; sub != 0; sub = (sub - 1) & bits_) f(AttributeSet(sub));
  }

  friend constexpr bool operator==(AttributeSet, AttributeSet) = default;
  friend constexpr auto operator<=>(AttributeSet a, AttributeSet b) { return a.bits_ <=> b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

struct AttributeDecl {
  std::string name;
  std::string domain;  // opaque domain tag

  bool operator==(const AttributeDecl&) const = default;
};

// Ordered attribute list with domain tags. Two attributes are comparable in
// query conditions iff they share a domain tag.
class Universe {
 public:
  Universe() = default;
  // `ordered_domains` lists the domain tags on which <, <=, >, >= make sense.
  Universe(std::vector<AttributeDecl> attributes, std::set<std::string> ordered_domains = {});

  std::size_t size() const { return attributes_.size(); }
  AttributeSet all() const;
  const AttributeDecl& attribute(AttributeId a) const { return attributes_.at(a); }
  const std::string& name(AttributeId a) const { return attributes_.at(a).name; }
  const std::string& domain(AttributeId a) const { return attributes_.at(a).domain; }
  bool ordered(AttributeId a) const { return ordered_domains_.contains(domain(a)); }
  bool comparable(AttributeId a, AttributeId b) const { return domain(a) == domain(b); }

  std::optional<AttributeId> find(std::string_view name) const;
  AttributeId id(std::string_view name) const;  // throws ParseError when unknown
  AttributeSet set_of(std::initializer_list<std::string_view> names) const;

  std::string format(AttributeSet s, std::string_view sep = " ") const;

  const std::vector<AttributeDecl>& attributes() const { return attributes_; }
  const std::set<std::string>& ordered_domains() const { return ordered_domains_; }

  friend bool operator==(const Universe&, const Universe&) = default;

 private:
  std::vector<AttributeDecl> attributes_;
  std::set<std::string> ordered_domains_;
};

// A domain constant, qualified by the attribute it is a value of. Constants of
// different attributes are never equal even when their text coincides.
struct Constant {
  AttributeId attribute = 0;
  Symbol value;

  friend bool operator==(Constant, Constant) = default;
  friend auto operator<=>(Constant, Constant) = default;
};

// ---------------------------------------------------------------------------
// Tuples and tables
// ---------------------------------------------------------------------------

// Partial function from attributes to values; an unbound attribute is a null.
class Tuple {
 public:
  Tuple() = default;

  // Builds a tuple from (attribute, value) pairs; throws on an empty list or a
  // repeated attribute.
  static Tuple of(std::initializer_list<std::pair<AttributeId, std::string_view>> bindings);
  static Tuple of(const std::vector<std::pair<AttributeId, Symbol>>& bindings);
  static Tuple of(const Universe& u,
                  std::initializer_list<std::pair<std::string_view, std::string_view>> bindings);
  static Tuple unary(Constant c);

  AttributeSet schema() const { return schema_; }
  bool empty() const { return schema_.empty(); }
  std::size_t arity() const { return values_.size(); }
  bool has(AttributeId a) const { return schema_.contains(a); }

  // Value of a bound attribute; throws std::out_of_range otherwise.
  Symbol at(AttributeId a) const;
  std::optional<Symbol> get(AttributeId a) const;

  // Bound (attribute, value) pairs in universe order.
  std::vector<Constant> constants() const;

  // t.S; throws std::invalid_argument unless S is a nonempty subset of sch(t).
  Tuple restrict(AttributeSet s) const;
  // Same tuple with `a` bound to `v` (added or replaced).
  Tuple with(AttributeId a, Symbol v) const;
  // Same tuple with `a` unbound; may produce the empty tuple.
  Tuple without(AttributeId a) const;

  bool agrees_on(const Tuple& o, AttributeSet s) const;
  std::size_t hash() const;

  template <class F>
  void for_each_subtuple(F&& f) const {
    schema_.for_each_nonempty_subset([&](AttributeSet s) { f(restrict_unchecked(s)); });
  }

  friend bool operator==(const Tuple&, const Tuple&) = default;
  friend auto operator<=>(const Tuple& a, const Tuple& b) {
    if (auto c = a.schema_ <=> b.schema_; c != 0) return c;
    return a.values_ <=> b.values_;
  }

 private:
  Tuple restrict_unchecked(AttributeSet s) const;
  std::size_t index_of(AttributeId a) const {
    return static_cast<std::size_t>(std::popcount(schema_.bits() & ((std::uint64_t{1} << a) - 1)));
  }

  AttributeSet schema_;
  std::vector<Symbol> values_;  // one per bound attribute, in universe order
};

struct TupleHash {
  std::size_t operator()(const Tuple& t) const { return t.hash(); }
};

using TupleSet = std::set<Tuple>;

// t1 ⊑ t2: sch(t1) ⊆ sch(t2) and t2 agrees with t1 on sch(t1).
bool subtuple(const Tuple& t1, const Tuple& t2);

// Free-function form of Tuple::restrict.
Tuple restrict(const Tuple& t, AttributeSet s);

// Deterministic, content-based tuple order: (schema bitmask, values as text).
bool canonical_less(const Tuple& a, const Tuple& b);

// Finite set of tuples; inserting an existing tuple is a no-op.
class Table {
 public:
  Table() = default;
  Table(std::initializer_list<Tuple> rows);
  explicit Table(TupleSet rows) : rows_(std::move(rows)) {}

  bool insert(Tuple t);
  bool erase(const Tuple& t) { return rows_.erase(t) > 0; }
  bool contains(const Tuple& t) const { return rows_.contains(t); }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  auto begin() const { return rows_.begin(); }
  auto end() const { return rows_.end(); }
  const TupleSet& rows() const { return rows_; }

  // Rows sorted by canonical_less.
  std::vector<Tuple> canonical_rows() const;

  friend bool operator==(const Table&, const Table&) = default;

 private:
  TupleSet rows_;
};

// Normalized functional dependency X -> A with A not in X.
struct FD {
  AttributeSet lhs;
  AttributeId rhs = 0;

  FD() = default;
  FD(AttributeSet lhs, AttributeId rhs);  // throws std::invalid_argument

  AttributeSet attributes() const { return lhs | AttributeSet::single(rhs); }

  friend bool operator==(const FD&, const FD&) = default;
  friend auto operator<=>(const FD&, const FD&) = default;
};

std::string format_fd(const Universe& u, const FD& fd);

// Pair (table, FDs) over a shared universe; the input to every algorithm.
struct Delta {
  std::shared_ptr<const Universe> universe;
  Table table;
  std::vector<FD> fds;  // declaration order, duplicate-free

  Delta() = default;
  // Validates that every attribute is in the universe and deduplicates fds.
  Delta(std::shared_ptr<const Universe> u, Table t, std::vector<FD> f);

  Delta with_row(const Tuple& t) const;
};

// Set of maximal rows: drops every row that is a strict sub-tuple of another.
Table reduce(const Table& table);

// t ∈ LoCl(table).
bool in_lower_closure(const Table& table, const Tuple& t);

// Membership index for LoCl(rows). Narrow rows have all their sub-tuples
// hashed; rows wider than kHashedWidth are scanned.
class LowerClosureIndex {
 public:
  static constexpr int kHashedWidth = 12;

  LowerClosureIndex() = default;
  explicit LowerClosureIndex(const Table& table);

  void add(const Tuple& row);
  bool contains(const Tuple& t) const;

 private:
  std::unordered_set<Tuple, TupleHash> subtuples_;
  std::vector<Tuple> wide_rows_;
};

}  // namespace incdb

template <>
struct std::hash<incdb::Tuple> {
  std::size_t operator()(const incdb::Tuple& t) const { return t.hash(); }
};
