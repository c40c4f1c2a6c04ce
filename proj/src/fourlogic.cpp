#include "incdb/fourlogic.hpp"

#include <algorithm>
#include <array>

namespace incdb {

namespace {

using F = FourValue;
using Table4 = std::array<std::array<FourValue, 4>, 4>;

constexpr std::size_t idx(FourValue v) { return static_cast<std::size_t>(v); }

// Rows and columns in the order t, b, n, f.
constexpr Table4 kOr = {{{F::T, F::T, F::T, F::T},
                         {F::T, F::B, F::T, F::B},
                         {F::T, F::T, F::N, F::N},
                         {F::T, F::B, F::N, F::F}}};
constexpr Table4 kAnd = {{{F::T, F::B, F::N, F::F},
                          {F::B, F::B, F::F, F::F},
                          {F::N, F::F, F::N, F::F},
                          {F::F, F::F, F::F, F::F}}};
constexpr Table4 kOplus = {{{F::T, F::B, F::T, F::B},
                            {F::B, F::B, F::B, F::B},
                            {F::T, F::B, F::N, F::F},
                            {F::B, F::B, F::F, F::F}}};
constexpr Table4 kOtimes = {{{F::T, F::T, F::N, F::N},
                             {F::T, F::B, F::N, F::F},
                             {F::N, F::N, F::N, F::N},
                             {F::N, F::F, F::N, F::F}}};
constexpr std::array<FourValue, 4> kNeg = {F::F, F::B, F::N, F::T};

}  // namespace

std::string_view to_string(FourValue v) {
  static constexpr std::string_view names[] = {"t", "b", "n", "f"};
  return names[idx(v)];
}

FourValue neg4(FourValue v) { return kNeg[idx(v)]; }
FourValue and4(FourValue a, FourValue b) { return kAnd[idx(a)][idx(b)]; }
FourValue or4(FourValue a, FourValue b) { return kOr[idx(a)][idx(b)]; }
FourValue oplus(FourValue a, FourValue b) { return kOplus[idx(a)][idx(b)]; }
FourValue otimes(FourValue a, FourValue b) { return kOtimes[idx(a)][idx(b)]; }

bool knowledge_le(FourValue a, FourValue b) {
  if (a == b || a == F::N || b == F::B) return true;
  return false;
}

bool truth_le(FourValue a, FourValue b) {
  if (a == b || a == F::F || b == F::T) return true;
  return false;
}

FourValue h(TruthValue v) {
  switch (v) {
    case TruthValue::True: return F::T;
    case TruthValue::Inc: return F::B;
    case TruthValue::Unkn: return F::N;
    case TruthValue::False: return F::F;
  }
  return F::N;
}

TruthValue h_inverse(FourValue v) {
  switch (v) {
    case F::T: return TruthValue::True;
    case F::B: return TruthValue::Inc;
    case F::N: return TruthValue::Unkn;
    case F::F: return TruthValue::False;
  }
  return TruthValue::Unkn;
}

TruthValue oplus(TruthValue a, TruthValue b) { return h_inverse(oplus(h(a), h(b))); }
bool knowledge_le(TruthValue a, TruthValue b) { return knowledge_le(h(a), h(b)); }

Delta merge_sources(const SourceSet& sources) {
  if (sources.deltas.empty()) throw std::invalid_argument("merging needs at least one source");
  const auto& universe = sources.deltas.front().universe;
  Table table;
  std::vector<FD> fds;
  for (const auto& d : sources.deltas) {
    if (!d.universe || !universe || !(*d.universe == *universe))
      throw SemanticError("sources are not over the same universe");
    for (const auto& row : d.table) table.insert(row);
    fds.insert(fds.end(), d.fds.begin(), d.fds.end());
  }
  return Delta(universe, std::move(table), std::move(fds));
}

std::vector<MergeReportRow> merged_truth_report(const SourceSet& sources, const std::vector<Tuple>& probes) {
  struct Classified {
    ChaseResult chased;
    IncSet incs;
  };
  auto classify = [](const Delta& d) {
    Classified c{chase(d), {}};
    c.incs = inc_set(c.chased);
    return c;
  };
  std::vector<Classified> per_source;
  for (const auto& d : sources.deltas) per_source.push_back(classify(d));
  const Classified merged = classify(merge_sources(sources));

  std::vector<MergeReportRow> out;
  out.reserve(probes.size());
  for (const auto& t : probes) {
    MergeReportRow row;
    row.probe = t;
    row.fold = TruthValue::Unkn;  // neutral element of ⊕
    for (const auto& s : per_source) {
      row.per_source.push_back(truth_value(t, s.chased, s.incs));
      row.fold = oplus(row.fold, row.per_source.back());
    }
    row.merged = truth_value(t, merged.chased, merged.incs);
    row.equal = row.fold == row.merged;
    row.knowledge_grows = knowledge_le(row.fold, row.merged);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<Tuple> default_merge_probes(const SourceSet& sources) {
  TupleSet probes;
  const auto chased = chase(merge_sources(sources));
  for (const auto& row : chased.dstar) row.for_each_subtuple([&](Tuple s) { probes.insert(std::move(s)); });
  for (const auto& d : sources.deltas)
    for (const auto& row : d.table)
      for (auto c : row.constants()) probes.insert(Tuple::unary(c));
  std::vector<Tuple> out(probes.begin(), probes.end());
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

}  // namespace incdb
