#pragma once

#include <map>
#include <set>

#include <boost/dynamic_bitset.hpp>

#include "incdb/core.hpp"

namespace incdb {

using IdSet = boost::dynamic_bitset<>;
using ConstantSet = std::set<Constant>;

// Assignment of tuple-identifier sets to constants. Unmapped constants denote
// the empty set; a tuple's image is the intersection of its constants' images.
class TMapping {
 public:
  TMapping() = default;
  explicit TMapping(std::size_t id_count) : id_count_(id_count) {}

  // μ_0: identifier i is the i-th row of `table` (in its iteration order).
  static TMapping from_table(const Table& table);

  std::size_t id_count() const { return id_count_; }
  IdSet image(Constant c) const;
  IdSet image(const Tuple& t) const;
  void assign(Constant c, IdSet ids);
  // Widens the image of c; returns true if it grew.
  bool widen(Constant c, const IdSet& ids);

  // Constants with a nonempty image, grouped per attribute.
  std::map<AttributeId, std::vector<Constant>> support() const;
  const std::map<Constant, IdSet>& images() const { return images_; }

  friend bool operator==(const TMapping&, const TMapping&) = default;

 private:
  std::size_t id_count_ = 0;
  std::map<Constant, IdSet> images_;
};

// Order in which violated (X -> A, x, a) triples are repaired while widening.
enum class WideningOrder { Declared, Reversed };

// The least fixpoint μ* obtained from μ_0 by repeatedly setting
// μ(a) := μ(a) ∪ μ(x) for each X -> A, x, a with μ(xa) ≠ ∅ and μ(x) ⊄ μ(a).
TMapping mu_star(const Delta& delta, WideningOrder order = WideningOrder::Declared);

bool tmap_satisfies_fd(const TMapping& mu, const FD& fd);
bool tmap_satisfies_delta(const TMapping& mu, const Delta& delta);

// Partition constraint: distinct constants of one attribute have disjoint images.
bool is_interpretation(const TMapping& mu);

struct TupleClosure {
  Tuple base;
  ConstantSet constants;

  bool contains(Constant c) const { return constants.contains(c); }
  // Two distinct constants of the same attribute.
  bool has_conflict() const;
};

struct SchemeClosure {
  AttributeSet base;
  AttributeSet attributes;
};

// Δ ⊢ t, decided by chasing and testing t ∈ LoCl(D*).
bool derives(const Delta& delta, const Tuple& t);
// Δ ⊢ (t1 ⊓ t2), i.e. μ*(t1) ∩ μ*(t2) ≠ ∅.
bool derives_meet(const Delta& delta, const Tuple& t1, const Tuple& t2);

// t⁺: constants a with Δ ⊢ (t ⪯ a). Chases D ∪ {t} once and saturates.
TupleClosure tuple_closure(const Delta& delta, const Tuple& t);

// Armstrong closure X⁺ of an attribute set.
SchemeClosure scheme_closure(const std::vector<FD>& fds, AttributeSet x);

// Δ |~ t: t⁺ holds two distinct constants of one attribute.
bool pot_false(const Delta& delta, const Tuple& t);

// Memoized scheme closures for one FD set.
class SchemeClosureCache {
 public:
  explicit SchemeClosureCache(const std::vector<FD>& fds) : fds_(&fds) {}
  AttributeSet operator()(AttributeSet x);

 private:
  const std::vector<FD>* fds_;
  std::map<AttributeSet, AttributeSet> memo_;
};

}  // namespace incdb
