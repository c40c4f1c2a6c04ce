#include "incdb/core.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace incdb {

namespace {

struct SymbolPool {
  std::mutex mutex;
  std::deque<std::string> texts{std::string{}};
  std::unordered_map<std::string_view, std::uint32_t> ids{{std::string_view{}, 0}};
};

SymbolPool& pool() {
  static SymbolPool p;
  return p;
}

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Symbol Symbol::intern(std::string_view text) {
  auto& p = pool();
  std::lock_guard lock(p.mutex);
  if (auto it = p.ids.find(text); it != p.ids.end()) return Symbol(it->second);
  auto id = static_cast<std::uint32_t>(p.texts.size());
  p.texts.emplace_back(text);
  p.ids.emplace(p.texts.back(), id);
  return Symbol(id);
}

std::string_view Symbol::str() const {
  auto& p = pool();
  std::lock_guard lock(p.mutex);
  return p.texts[id_];
}

bool lexical_less(Symbol a, Symbol b) {
  if (a == b) return false;
  return a.str() < b.str();
}

std::vector<AttributeId> AttributeSet::members() const {
  std::vector<AttributeId> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<AttributeId>(std::countr_zero(b)));
  return out;
}

// ---------------------------------------------------------------------------

Universe::Universe(std::vector<AttributeDecl> attributes, std::set<std::string> ordered_domains)
    : attributes_(std::move(attributes)), ordered_domains_(std::move(ordered_domains)) {
  if (attributes_.size() > kMaxAttributes)
    throw std::invalid_argument("universe has more than 64 attributes");
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name.empty()) throw std::invalid_argument("empty attribute name");
    for (std::size_t j = 0; j < i; ++j)
      if (attributes_[i].name == attributes_[j].name)
        throw std::invalid_argument("duplicate attribute '" + attributes_[i].name + "'");
  }
}

AttributeSet Universe::all() const {
  if (attributes_.size() == 64) return AttributeSet(~std::uint64_t{0});
  return AttributeSet((std::uint64_t{1} << attributes_.size()) - 1);
}

std::optional<AttributeId> Universe::find(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i)
    if (attributes_[i].name == name) return static_cast<AttributeId>(i);
  return std::nullopt;
}

AttributeId Universe::id(std::string_view name) const {
  if (auto a = find(name)) return *a;
  throw ParseError("unknown attribute '" + std::string(name) + "'");
}

AttributeSet Universe::set_of(std::initializer_list<std::string_view> names) const {
  AttributeSet s;
  for (auto n : names) s.insert(id(n));
  return s;
}

std::string Universe::format(AttributeSet s, std::string_view sep) const {
  std::string out;
  for (auto a : s.members()) {
    if (!out.empty()) out += sep;
    out += name(a);
  }
  return out;
}

// ---------------------------------------------------------------------------

Tuple Tuple::of(std::initializer_list<std::pair<AttributeId, std::string_view>> bindings) {
  std::vector<std::pair<AttributeId, Symbol>> v;
  for (auto& [a, text] : bindings) v.emplace_back(a, Symbol::intern(text));
  return of(v);
}

Tuple Tuple::of(const std::vector<std::pair<AttributeId, Symbol>>& bindings) {
  if (bindings.empty()) throw std::invalid_argument("a tuple needs at least one binding");
  auto sorted = bindings;
  std::sort(sorted.begin(), sorted.end(), [](auto& x, auto& y) { return x.first < y.first; });
  Tuple t;
  for (auto& [a, v] : sorted) {
    if (a >= kMaxAttributes) throw std::invalid_argument("attribute id out of range");
    if (t.schema_.contains(a)) throw std::invalid_argument("attribute bound twice in one tuple");
    t.schema_.insert(a);
    t.values_.push_back(v);
  }
  return t;
}

Tuple Tuple::of(const Universe& u,
                std::initializer_list<std::pair<std::string_view, std::string_view>> bindings) {
  std::vector<std::pair<AttributeId, Symbol>> v;
  for (auto& [name, text] : bindings) v.emplace_back(u.id(name), Symbol::intern(text));
  return of(v);
}

Tuple Tuple::unary(Constant c) { return of({{c.attribute, c.value}}); }

Symbol Tuple::at(AttributeId a) const {
  if (!has(a)) throw std::out_of_range("attribute not bound in tuple");
  return values_[index_of(a)];
}

std::optional<Symbol> Tuple::get(AttributeId a) const {
  if (!has(a)) return std::nullopt;
  return values_[index_of(a)];
}

std::vector<Constant> Tuple::constants() const {
  std::vector<Constant> out;
  out.reserve(values_.size());
  std::size_t i = 0;
  for (auto a : schema_.members()) out.push_back({a, values_[i++]});
  return out;
}

Tuple Tuple::restrict(AttributeSet s) const {
  if (s.empty()) throw std::invalid_argument("restriction to an empty schema");
  if (!s.subset_of(schema_)) throw std::invalid_argument("restriction schema not contained in sch(t)");
  return restrict_unchecked(s);
}

Tuple Tuple::restrict_unchecked(AttributeSet s) const {
  Tuple out;
  out.schema_ = s;
  out.values_.reserve(static_cast<std::size_t>(s.size()));
  std::size_t i = 0;
  for (std::uint64_t b = schema_.bits(); b != 0; b &= b - 1, ++i) {
    auto a = static_cast<AttributeId>(std::countr_zero(b));
    if (s.contains(a)) out.values_.push_back(values_[i]);
  }
  return out;
}

Tuple Tuple::with(AttributeId a, Symbol v) const {
  Tuple out = *this;
  auto idx = index_of(a);
  if (has(a)) {
    out.values_[idx] = v;
  } else {
    out.schema_.insert(a);
    out.values_.insert(out.values_.begin() + static_cast<std::ptrdiff_t>(idx), v);
  }
  return out;
}

Tuple Tuple::without(AttributeId a) const {
  if (!has(a)) return *this;
  Tuple out = *this;
  out.values_.erase(out.values_.begin() + static_cast<std::ptrdiff_t>(index_of(a)));
  out.schema_.erase(a);
  return out;
}

bool Tuple::agrees_on(const Tuple& o, AttributeSet s) const {
  if (!s.subset_of(schema_) || !s.subset_of(o.schema_)) return false;
  for (auto a : s.members())
    if (at(a) != o.at(a)) return false;
  return true;
}

std::size_t Tuple::hash() const {
  std::size_t h = std::hash<std::uint64_t>{}(schema_.bits());
  for (auto v : values_) h = mix(h, v.id());
  return h;
}

bool subtuple(const Tuple& t1, const Tuple& t2) {
  if (!t1.schema().subset_of(t2.schema())) return false;
  for (auto c : t1.constants())
    if (t2.at(c.attribute) != c.value) return false;
  return true;
}

Tuple restrict(const Tuple& t, AttributeSet s) { return t.restrict(s); }

bool canonical_less(const Tuple& a, const Tuple& b) {
  if (a.schema() != b.schema()) return a.schema() < b.schema();
  auto ca = a.constants();
  auto cb = b.constants();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i].value == cb[i].value) continue;
    return lexical_less(ca[i].value, cb[i].value);
  }
  return false;
}

// ---------------------------------------------------------------------------

Table::Table(std::initializer_list<Tuple> rows) {
  for (const auto& r : rows) insert(r);
}

bool Table::insert(Tuple t) {
  if (t.empty()) throw std::invalid_argument("tables cannot hold the empty tuple");
  return rows_.insert(std::move(t)).second;
}

std::vector<Tuple> Table::canonical_rows() const {
  std::vector<Tuple> out(rows_.begin(), rows_.end());
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

FD::FD(AttributeSet l, AttributeId r) : lhs(l), rhs(r) {
  if (lhs.empty()) throw std::invalid_argument("FD with an empty left-hand side");
  if (lhs.contains(rhs)) throw std::invalid_argument("FD right-hand side occurs in its left-hand side");
}

std::string format_fd(const Universe& u, const FD& fd) { return u.format(fd.lhs) + " -> " + u.name(fd.rhs); }

Delta::Delta(std::shared_ptr<const Universe> u, Table t, std::vector<FD> f)
    : universe(std::move(u)), table(std::move(t)) {
  if (!universe) throw std::invalid_argument("delta without a universe");
  auto all = universe->all();
  for (const auto& row : table)
    if (!row.schema().subset_of(all)) throw std::invalid_argument("row uses an attribute outside the universe");
  for (const auto& fd : f) {
    if (!fd.attributes().subset_of(all)) throw std::invalid_argument("FD uses an attribute outside the universe");
    if (std::find(fds.begin(), fds.end(), fd) == fds.end()) fds.push_back(fd);
  }
}

Delta Delta::with_row(const Tuple& t) const {
  Delta out = *this;
  out.table.insert(t);
  return out;
}

// ---------------------------------------------------------------------------

Table reduce(const Table& table) {
  // Rows bucketed by schema width; a row can only be strictly below a wider one.
  std::vector<const Tuple*> rows;
  for (const auto& r : table) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->arity() > b->arity(); });
  Table out;
  std::vector<const Tuple*> kept;
  for (auto* r : rows) {
    bool dominated = false;
    for (auto* k : kept) {
      if (k->arity() > r->arity() && subtuple(*r, *k)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) {
      kept.push_back(r);
      out.insert(*r);
    }
  }
  return out;
}

bool in_lower_closure(const Table& table, const Tuple& t) {
  return std::any_of(table.begin(), table.end(), [&](const Tuple& r) { return subtuple(t, r); });
}

LowerClosureIndex::LowerClosureIndex(const Table& table) {
  for (const auto& r : table) add(r);
}

void LowerClosureIndex::add(const Tuple& row) {
  if (row.schema().size() > kHashedWidth) {
    wide_rows_.push_back(row);
    return;
  }
  if (subtuples_.contains(row)) return;
  row.for_each_subtuple([&](Tuple s) { subtuples_.insert(std::move(s)); });
}

bool LowerClosureIndex::contains(const Tuple& t) const {
  if (t.empty()) return false;
  if (subtuples_.contains(t)) return true;
  return std::any_of(wide_rows_.begin(), wide_rows_.end(), [&](const Tuple& r) { return subtuple(t, r); });
}

}  // namespace incdb
