#pragma once

#include <vector>

#include "incdb/core.hpp"

namespace incdb {

// Conflict ledger: for each FD X -> A, the X-values x seen with two distinct
// A-values. Entries are aligned with the FD list the chase ran on.
class IncMap {
 public:
  IncMap() = default;
  explicit IncMap(std::vector<FD> fds) : fds_(std::move(fds)), entries_(fds_.size()) {}

  const std::vector<FD>& fds() const { return fds_; }
  // inc(X -> A); throws std::out_of_range for an FD the chase did not see.
  const TupleSet& operator[](const FD& fd) const;
  const TupleSet& at(std::size_t i) const { return entries_.at(i); }
  bool contains(const FD& fd, const Tuple& x) const { return (*this)[fd].contains(x); }
  bool insert(std::size_t fd_index, Tuple x) { return entries_.at(fd_index).insert(std::move(x)).second; }
  bool empty() const;

 private:
  std::vector<FD> fds_;
  std::vector<TupleSet> entries_;
};

struct ChaseStats {
  std::size_t passes = 0;        // semi-naive rounds until fixpoint
  std::size_t peak_rows = 0;     // largest working-set size
  std::size_t generated = 0;     // tuples added by the completion/conflict rules
};

struct ChaseResult {
  Table dstar;  // reduced
  IncMap inc;
  ChaseStats stats;
  LowerClosureIndex lower;  // LoCl(dstar)

  const std::vector<FD>& fds() const { return inc.fds(); }
  // t ∈ LoCl(D*), equivalently Δ ⊢ t.
  bool derivable(const Tuple& t) const { return lower.contains(t); }
};

// Extended chase. Saturates the table under
//   completion: t1 ⊇ xa, t2 ⊇ x without A  =>  add t2·a
//   conflict:   t1 ⊇ xa1, t2 ⊇ xa2, a1 ≠ a2 =>  add (t2 − A)·a1 and record x
// then keeps only maximal rows. Never fails on an FD violation.
ChaseResult chase(const Delta& delta);

// Same, with rows processed in the given order. The result does not depend
// on the order of `rows` or of `fds` (up to the alignment of the ledger).
ChaseResult chase_rows(const std::vector<Tuple>& rows, const std::vector<FD>& fds);

}  // namespace incdb
