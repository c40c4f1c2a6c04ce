#include "incdb/semantics.hpp"

#include <algorithm>

#include "incdb/chase.hpp"

namespace incdb {

namespace {

// Enumerates every tuple x over `attrs` built from supported constants whose
// image is nonempty; calls f(x_constants, image(x)).
template <class F>
void for_each_supported_x(const std::map<AttributeId, std::vector<Constant>>& support,
                          const TMapping& mu, AttributeSet attrs, F&& f) {
  auto members = attrs.members();
  std::vector<const std::vector<Constant>*> choices;
  for (auto a : members) {
    auto it = support.find(a);
    if (it == support.end()) return;
    choices.push_back(&it->second);
  }
  std::vector<Constant> current(members.size());
  auto rec = [&](auto&& self, std::size_t depth, const IdSet& acc) -> void {
    if (depth == members.size()) {
      f(current, acc);
      return;
    }
    for (const auto& c : *choices[depth]) {
      IdSet next = acc & mu.image(c);
      if (next.none()) continue;
      current[depth] = c;
      self(self, depth + 1, next);
    }
  };
  IdSet all(mu.id_count());
  all.set();
  rec(rec, 0, all);
}

}  // namespace

TMapping TMapping::from_table(const Table& table) {
  TMapping mu(table.size());
  std::size_t id = 0;
  for (const auto& row : table) {
    for (auto c : row.constants()) {
      auto& img = mu.images_[c];
      if (img.size() != mu.id_count_) img.resize(mu.id_count_);
      img.set(id);
    }
    ++id;
  }
  return mu;
}

IdSet TMapping::image(Constant c) const {
  if (auto it = images_.find(c); it != images_.end()) return it->second;
  return IdSet(id_count_);
}

IdSet TMapping::image(const Tuple& t) const {
  IdSet acc(id_count_);
  acc.set();
  for (auto c : t.constants()) {
    auto it = images_.find(c);
    if (it == images_.end()) return IdSet(id_count_);
    acc &= it->second;
  }
  return acc;
}

void TMapping::assign(Constant c, IdSet ids) {
  ids.resize(id_count_);
  if (ids.none()) {
    images_.erase(c);
    return;
  }
  images_[c] = std::move(ids);
}

bool TMapping::widen(Constant c, const IdSet& ids) {
  auto& img = images_[c];
  if (img.size() != id_count_) img.resize(id_count_);
  if (ids.is_subset_of(img)) return false;
  img |= ids;
  return true;
}

std::map<AttributeId, std::vector<Constant>> TMapping::support() const {
  std::map<AttributeId, std::vector<Constant>> out;
  for (const auto& [c, ids] : images_)
    if (ids.any()) out[c.attribute].push_back(c);
  return out;
}

TMapping mu_star(const Delta& delta, WideningOrder order) {
  TMapping mu = TMapping::from_table(delta.table);
  auto fds = delta.fds;
  if (order == WideningOrder::Reversed) std::reverse(fds.begin(), fds.end());
  // Only constants with nonempty images can take part in a violation, and
  // widening never empties an image, so the support is fixed.
  auto support = mu.support();
  if (order == WideningOrder::Reversed)
    for (auto& [a, cs] : support) std::reverse(cs.begin(), cs.end());

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& fd : fds) {
      auto rhs = support.find(fd.rhs);
      if (rhs == support.end()) continue;
      for_each_supported_x(support, mu, fd.lhs, [&](const std::vector<Constant>&, const IdSet& x_img) {
        for (auto a : rhs->second) {
          const IdSet a_img = mu.image(a);
          if (x_img.intersects(a_img) && !x_img.is_subset_of(a_img)) changed |= mu.widen(a, x_img);
        }
      });
    }
  }
  return mu;
}

bool tmap_satisfies_fd(const TMapping& mu, const FD& fd) {
  auto support = mu.support();
  auto rhs = support.find(fd.rhs);
  if (rhs == support.end()) return true;
  bool ok = true;
  for_each_supported_x(support, mu, fd.lhs, [&](const std::vector<Constant>&, const IdSet& x_img) {
    for (auto a : rhs->second) {
      const IdSet a_img = mu.image(a);
      if (x_img.intersects(a_img) && !x_img.is_subset_of(a_img)) ok = false;
    }
  });
  return ok;
}

bool tmap_satisfies_delta(const TMapping& mu, const Delta& delta) {
  for (const auto& row : delta.table)
    if (mu.image(row).none()) return false;
  return std::all_of(delta.fds.begin(), delta.fds.end(), [&](const FD& fd) { return tmap_satisfies_fd(mu, fd); });
}

bool is_interpretation(const TMapping& mu) {
  for (const auto& [attr, cs] : mu.support())
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = i + 1; j < cs.size(); ++j)
        if (mu.image(cs[i]).intersects(mu.image(cs[j]))) return false;
  return true;
}

bool TupleClosure::has_conflict() const {
  const Constant* prev = nullptr;
  for (const auto& c : constants) {  // ordered by attribute first
    if (prev && prev->attribute == c.attribute) return true;
    prev = &c;
  }
  return false;
}

bool derives(const Delta& delta, const Tuple& t) { return chase(delta).derivable(t); }

bool derives_meet(const Delta& delta, const Tuple& t1, const Tuple& t2) {
  auto mu = mu_star(delta);
  return mu.image(t1).intersects(mu.image(t2));
}

TupleClosure tuple_closure(const Delta& delta, const Tuple& t) {
  // Δ_t ⊢ xa iff xa ∈ LoCl(D_t*), i.e. some chased row r has r.XA = xa; the
  // chased table does not depend on the growing closure.
  const ChaseResult chased = chase(delta.with_row(t));
  TupleClosure cl{t, {}};
  for (auto c : t.constants()) cl.constants.insert(c);

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& fd : delta.fds) {
      const auto xa = fd.attributes();
      for (const auto& row : chased.dstar) {
        if (!xa.subset_of(row.schema())) continue;
        bool x_in = true;
        for (auto b : fd.lhs.members())
          if (!cl.contains({b, row.at(b)})) {
            x_in = false;
            break;
          }
        if (x_in && cl.constants.insert({fd.rhs, row.at(fd.rhs)}).second) changed = true;
      }
    }
  }
  return cl;
}

SchemeClosure scheme_closure(const std::vector<FD>& fds, AttributeSet x) {
  if (x.empty()) throw std::invalid_argument("scheme closure of an empty attribute set");
  AttributeSet closure = x;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& fd : fds) {
      if (fd.lhs.subset_of(closure) && !closure.contains(fd.rhs)) {
        closure.insert(fd.rhs);
        changed = true;
      }
    }
  }
  return {x, closure};
}

bool pot_false(const Delta& delta, const Tuple& t) { return tuple_closure(delta, t).has_conflict(); }

AttributeSet SchemeClosureCache::operator()(AttributeSet x) {
  if (auto it = memo_.find(x); it != memo_.end()) return it->second;
  auto c = scheme_closure(*fds_, x).attributes;
  memo_.emplace(x, c);
  return c;
}

}  // namespace incdb
