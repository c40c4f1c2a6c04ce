#include "incdb/chase.hpp"

#include <algorithm>
#include <unordered_map>

namespace incdb {

const TupleSet& IncMap::operator[](const FD& fd) const {
  for (std::size_t i = 0; i < fds_.size(); ++i)
    if (fds_[i] == fd) return entries_[i];
  throw std::out_of_range("FD not tracked by this conflict ledger");
}

bool IncMap::empty() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const TupleSet& s) { return s.empty(); });
}

namespace {

class Saturation {
 public:
  Saturation(const std::vector<Tuple>& rows, const std::vector<FD>& fds)
      : fds_(fds), inc_(fds), buckets_(fds.size()) {
    for (const auto& row : rows) {
      if (row.empty()) throw std::invalid_argument("chase input contains the empty tuple");
      add(row);
    }
  }

  void run() {
    while (!frontier_.empty()) {
      ++stats_.passes;
      std::vector<std::size_t> current;
      current.swap(frontier_);
      for (auto idx : current)
        for (std::size_t f = 0; f < fds_.size(); ++f)
          if (fds_[f].lhs.subset_of(rows_[idx].schema()))
            buckets_[f][rows_[idx].restrict(fds_[f].lhs)].push_back(idx);
      for (auto idx : current) {
        for (std::size_t f = 0; f < fds_.size(); ++f) {
          const FD& fd = fds_[f];
          if (!fd.lhs.subset_of(rows_[idx].schema())) continue;
          const Tuple x = rows_[idx].restrict(fd.lhs);
          // Generated rows land in frontier_, not in the buckets, so the
          // bucket is stable during this loop.
          const auto& partners = buckets_[f].at(x);
          for (auto other : partners) {
            apply(f, x, idx, other);
            apply(f, x, other, idx);
          }
        }
      }
    }
    stats_.peak_rows = rows_.size();
  }

  ChaseResult finish() && {
    Table all;
    for (auto& r : rows_) all.insert(std::move(r));
    ChaseResult out;
    out.dstar = reduce(all);
    out.inc = std::move(inc_);
    out.stats = stats_;
    out.lower = LowerClosureIndex(out.dstar);
    return out;
  }

 private:
  void apply(std::size_t f, const Tuple& x, std::size_t i1, std::size_t i2) {
    const AttributeId a = fds_[f].rhs;
    const auto a1 = rows_[i1].get(a);
    if (!a1) return;
    const auto a2 = rows_[i2].get(a);
    if (a2 && *a2 == *a1) return;
    if (a2) inc_.insert(f, x);
    // Copy before add(): emplace_back may reallocate rows_.
    Tuple generated = rows_[i2].with(a, *a1);
    if (add(std::move(generated))) ++stats_.generated;
  }

  // Skips rows already covered by LoCl of the working set.
  bool add(Tuple t) {
    if (lower_.contains(t)) return false;
    lower_.add(t);
    rows_.push_back(std::move(t));
    frontier_.push_back(rows_.size() - 1);
    return true;
  }

  const std::vector<FD>& fds_;
  IncMap inc_;
  ChaseStats stats_;
  std::vector<Tuple> rows_;
  std::vector<std::size_t> frontier_;
  LowerClosureIndex lower_;
  std::vector<std::unordered_map<Tuple, std::vector<std::size_t>, TupleHash>> buckets_;
};

}  // namespace

ChaseResult chase(const Delta& delta) {
  return chase_rows(std::vector<Tuple>(delta.table.begin(), delta.table.end()), delta.fds);
}

ChaseResult chase_rows(const std::vector<Tuple>& rows, const std::vector<FD>& fds) {
  Saturation s(rows, fds);
  s.run();
  return std::move(s).finish();
}

}  // namespace incdb
