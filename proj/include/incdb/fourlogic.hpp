#pragma once

#include <string_view>
#include <vector>

#include "incdb/classify.hpp"

namespace incdb {

// Belnap's values: t (true), b (both), n (neither), f (false).
enum class FourValue : std::uint8_t { T, B, N, F };

inline constexpr FourValue kFourValues[] = {FourValue::T, FourValue::B, FourValue::N, FourValue::F};
inline constexpr TruthValue kTruthValues[] = {TruthValue::True, TruthValue::Inc, TruthValue::Unkn, TruthValue::False};

std::string_view to_string(FourValue v);

FourValue neg4(FourValue v);
FourValue and4(FourValue a, FourValue b);
FourValue or4(FourValue a, FourValue b);
FourValue oplus(FourValue a, FourValue b);   // lub in the knowledge order
FourValue otimes(FourValue a, FourValue b);  // glb in the knowledge order

// n ≤k t ≤k b, n ≤k f ≤k b
bool knowledge_le(FourValue a, FourValue b);
// f ≤t n ≤t t, f ≤t b ≤t t
bool truth_le(FourValue a, FourValue b);

// true ↦ t, inc ↦ b, unkn ↦ n, false ↦ f
FourValue h(TruthValue v);
TruthValue h_inverse(FourValue v);

// ⊕ transported through h.
TruthValue oplus(TruthValue a, TruthValue b);
// unkn ◁ true ◁ inc, unkn ◁ false ◁ inc (reflexive).
bool knowledge_le(TruthValue a, TruthValue b);

// Sources over one shared universe.
struct SourceSet {
  std::vector<Delta> deltas;
};

// Union of the tables and of the FD sets. Throws SemanticError when the
// sources do not share one universe, std::invalid_argument when empty.
Delta merge_sources(const SourceSet& sources);

struct MergeReportRow {
  Tuple probe;
  std::vector<TruthValue> per_source;
  TruthValue fold = TruthValue::Unkn;    // ⊕ over per_source
  TruthValue merged = TruthValue::Unkn;  // value in the merged Delta
  bool equal = false;
  bool knowledge_grows = false;  // fold ◁ merged; expected to hold always
};

// Per-probe comparison of the ⊕-fold of the source values with the merged value.
std::vector<MergeReportRow> merged_truth_report(const SourceSet& sources, const std::vector<Tuple>& probes);

// LoCl of the merged D* plus every single-constant tuple of the sources,
// in canonical order.
std::vector<Tuple> default_merge_probes(const SourceSet& sources);

}  // namespace incdb
