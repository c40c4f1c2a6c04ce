#pragma once

#include <string_view>

#include "incdb/chase.hpp"

namespace incdb {

// Four-valued classification of a tuple in Δ, from (Δ ⊢ t, Δ |~ t):
//   true  = (yes, no)   inc  = (yes, yes)   unkn = (no, no)   false = (no, yes)
enum class TruthValue : std::uint8_t { True, Inc, Unkn, False };

std::string_view to_string(TruthValue v);
TruthValue truth_value_from_flags(bool derivable, bool potentially_false);

// Inc(Δ): all inconsistent tuples, materialized.
struct IncSet {
  TupleSet tuples;

  bool contains(const Tuple& t) const { return tuples.contains(t); }
  bool empty() const { return tuples.empty(); }
  std::size_t size() const { return tuples.size(); }
};

// For each D* row t, each X -> A with XA ⊆ sch(t) and t.X ∈ inc(X -> A), and
// each sub-schema Q of sch(t) with X ⊆ Q⁺, emits t.Q.
IncSet inc_set(const ChaseResult& result);

// v_Δ(t) from the chased table: membership in LoCl(D*) and Inc(Δ) decide
// true/inc; otherwise D* ∪ {t} is chased and t is false iff inconsistent there.
TruthValue truth_value(const Tuple& t, const ChaseResult& result, const IncSet& incs);

bool is_consistent(const Delta& delta);

// δ: the largest number of distinct A-values paired with a conflicting x; 1
// when there is no conflict.
std::size_t conflict_degree(const ChaseResult& result);

}  // namespace incdb
