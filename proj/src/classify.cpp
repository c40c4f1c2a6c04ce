#include "incdb/classify.hpp"

#include <set>

#include "incdb/semantics.hpp"

namespace incdb {

std::string_view to_string(TruthValue v) {
  switch (v) {
    case TruthValue::True: return "true";
    case TruthValue::Inc: return "inc";
    case TruthValue::Unkn: return "unkn";
    case TruthValue::False: return "false";
  }
  return "?";
}

TruthValue truth_value_from_flags(bool derivable, bool potentially_false) {
  if (derivable) return potentially_false ? TruthValue::Inc : TruthValue::True;
  return potentially_false ? TruthValue::False : TruthValue::Unkn;
}

IncSet inc_set(const ChaseResult& result) {
  IncSet out;
  SchemeClosureCache closure(result.fds());
  const auto& fds = result.fds();
  for (const auto& t : result.dstar) {
    for (std::size_t f = 0; f < fds.size(); ++f) {
      const FD& fd = fds[f];
      if (!fd.attributes().subset_of(t.schema())) continue;
      if (!result.inc.at(f).contains(t.restrict(fd.lhs))) continue;
      t.schema().for_each_nonempty_subset([&](AttributeSet q) {
        if (fd.lhs.subset_of(closure(q))) out.tuples.insert(t.restrict(q));
      });
    }
  }
  return out;
}

TruthValue truth_value(const Tuple& t, const ChaseResult& result, const IncSet& incs) {
  if (result.derivable(t)) return incs.contains(t) ? TruthValue::Inc : TruthValue::True;
  Table extended = result.dstar;
  extended.insert(t);
  // Only the universe-free parts of Delta matter to the chase.
  Delta with_t;
  with_t.table = std::move(extended);
  with_t.fds = result.fds();
  const IncSet incs_t = inc_set(chase(with_t));
  return incs_t.contains(t) ? TruthValue::False : TruthValue::Unkn;
}

bool is_consistent(const Delta& delta) { return inc_set(chase(delta)).empty(); }

std::size_t conflict_degree(const ChaseResult& result) {
  std::size_t delta = 1;
  const auto& fds = result.fds();
  for (std::size_t f = 0; f < fds.size(); ++f) {
    for (const auto& x : result.inc.at(f)) {
      std::set<Symbol> values;
      for (const auto& row : result.dstar)
        if (fds[f].attributes().subset_of(row.schema()) && row.restrict(fds[f].lhs) == x)
          values.insert(row.at(fds[f].rhs));
      delta = std::max(delta, values.size());
    }
  }
  return delta;
}

}  // namespace incdb
