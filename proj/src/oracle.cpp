#include "incdb/oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <sstream>

#include "incdb/fourlogic.hpp"

namespace incdb::oracle {

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

bool coin(Rng& rng, double p) { return static_cast<double>(rng() % 1000000) < p * 1e6; }

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[pick(rng, i)]);
}

bool mu_derivable(const TMapping& mu, const Tuple& t) { return mu.image(t).any(); }

TruthValue truth_value_with(const Delta& delta, const TMapping& mu, const Tuple& t) {
  return truth_value_from_flags(mu_derivable(mu, t), closure_def(delta, t).has_conflict());
}

// Calls f(x) for every tuple over `attrs` whose constants are all in `pool`.
void for_each_combination(const std::map<AttributeId, std::vector<Symbol>>& pool, AttributeSet attrs,
                          const std::function<void(const Tuple&)>& f) {
  const auto members = attrs.members();
  std::vector<const std::vector<Symbol>*> lists;
  for (auto a : members) {
    auto it = pool.find(a);
    if (it == pool.end() || it->second.empty()) return;
    lists.push_back(&it->second);
  }
  std::vector<std::size_t> idx(members.size(), 0);
  while (true) {
    std::vector<std::pair<AttributeId, Symbol>> b;
    for (std::size_t i = 0; i < members.size(); ++i) b.emplace_back(members[i], (*lists[i])[idx[i]]);
    f(Tuple::of(b));
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < lists[i]->size()) break;
      idx[i] = 0;
    }
    if (i == idx.size()) return;
  }
}

TupleSet select_project(const Query& q, const Table& rows) {
  TupleSet out;
  for (const auto& t : rows) {
    if (!q.select.subset_of(t.schema())) continue;
    if (q.where && !eval_condition(t, *q.where)) continue;
    out.insert(t.restrict(q.select));
  }
  return out;
}

}  // namespace

void RandomInstanceSpec::validate() const {
  if (attributes < 1 || attributes > 4) throw std::invalid_argument("attributes must be in 1..4");
  if (max_domain < 1 || max_domain > 3) throw std::invalid_argument("max_domain must be in 1..3");
  if (max_rows < 1 || max_rows > 6) throw std::invalid_argument("max_rows must be in 1..6");
  if (max_fds > 3) throw std::invalid_argument("max_fds must be at most 3");
  if (null_probability < 0 || null_probability >= 1) throw std::invalid_argument("null_probability must be in [0,1)");
}

Delta generate_instance(const RandomInstanceSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<AttributeDecl> decls;
  for (std::size_t a = 0; a < spec.attributes; ++a) {
    const std::string name(1, static_cast<char>('A' + a));
    decls.push_back({name, "d" + name});
  }
  auto u = std::make_shared<const Universe>(std::move(decls));

  std::vector<std::size_t> domain(spec.attributes);
  for (auto& d : domain) d = 1 + pick(rng, spec.max_domain);
  auto value = [&](std::size_t a, std::size_t i) {
    return Symbol::intern(std::string(1, static_cast<char>('a' + a)) + std::to_string(i));
  };

  Table table;
  const std::size_t rows = 1 + pick(rng, spec.max_rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<std::pair<AttributeId, Symbol>> b;
    for (std::size_t a = 0; a < spec.attributes; ++a)
      if (!coin(rng, spec.null_probability)) b.emplace_back(static_cast<AttributeId>(a), value(a, pick(rng, domain[a])));
    if (b.empty()) {
      const std::size_t a = pick(rng, spec.attributes);
      b.emplace_back(static_cast<AttributeId>(a), value(a, pick(rng, domain[a])));
    }
    table.insert(Tuple::of(b));
  }

  std::vector<FD> fds;
  if (spec.attributes >= 2) {
    const std::size_t count = pick(rng, spec.max_fds + 1);
    for (std::size_t i = 0; i < count; ++i) {
      const auto rhs = static_cast<AttributeId>(pick(rng, spec.attributes));
      std::vector<AttributeId> others;
      for (AttributeId a = 0; a < spec.attributes; ++a)
        if (a != rhs) others.push_back(a);
      const std::size_t mask = 1 + pick(rng, (std::size_t{1} << others.size()) - 1);
      AttributeSet lhs;
      for (std::size_t k = 0; k < others.size(); ++k)
        if ((mask >> k) & 1U) lhs.insert(others[k]);
      fds.emplace_back(lhs, rhs);
    }
  }
  return Delta(u, std::move(table), std::move(fds));
}

std::vector<Repair> repairs_brute(const ChaseResult& result, const std::vector<FD>& fds, std::size_t cap) {
  const std::vector<Tuple> rows(result.dstar.begin(), result.dstar.end());
  const std::size_t n = rows.size();
  if (n > kBruteForceRowLimit)
    throw CapExceeded("brute-force repair search limited to " + std::to_string(kBruteForceRowLimit) + " rows, D* has " +
                      std::to_string(n));
  auto conflict = [&](const Tuple& p, const Tuple& q) {
    for (const auto& fd : fds) {
      const auto s = fd.attributes();
      if (s.subset_of(p.schema()) && s.subset_of(q.schema()) && p.agrees_on(q, fd.lhs) &&
          p.at(fd.rhs) != q.at(fd.rhs))
        return true;
    }
    return false;
  };
  // Compatibility graph; repairs are its maximal cliques.
  std::vector<std::uint64_t> nbr(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !conflict(rows[i], rows[j])) nbr[i] |= std::uint64_t{1} << j;

  std::vector<std::uint64_t> cliques;
  std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)> bk = [&](std::uint64_t r, std::uint64_t p,
                                                                            std::uint64_t x) {
    if (p == 0 && x == 0) {
      if (cliques.size() >= cap) throw CapExceeded("more than " + std::to_string(cap) + " repairs");
      cliques.push_back(r);
      return;
    }
    std::size_t pivot = 0;
    int best = -1;
    for (std::uint64_t px = p | x; px != 0; px &= px - 1) {
      const auto u = static_cast<std::size_t>(std::countr_zero(px));
      const int c = std::popcount(p & nbr[u]);
      if (c > best) {
        best = c;
        pivot = u;
      }
    }
    for (std::uint64_t cand = p & ~nbr[pivot]; cand != 0; cand &= cand - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(cand));
      const std::uint64_t bit = std::uint64_t{1} << v;
      bk(r | bit, p & nbr[v], x & nbr[v]);
      p &= ~bit;
      x |= bit;
    }
  };
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  bk(0, all, 0);

  std::vector<Repair> out;
  for (auto c : cliques) {
    Repair rep;
    for (std::size_t i = 0; i < n; ++i)
      if ((c >> i) & 1U) rep.rows.insert(rows[i]);
    out.push_back(std::move(rep));
  }
  std::sort(out.begin(), out.end());
  return out;
}

RepairAnswerPair answers_from_repairs(const Query& q, const std::vector<Repair>& reps) {
  if (reps.empty()) throw std::invalid_argument("answers_from_repairs needs at least one repair");
  Table common;
  for (const auto& t : reps.front().rows)
    if (std::all_of(reps.begin(), reps.end(), [&](const Repair& r) { return r.rows.contains(t); })) common.insert(t);
  RepairAnswerPair out;
  out.lower = select_project(q, common);
  out.upper = select_project(q, reps.front().rows);
  for (std::size_t i = 1; i < reps.size(); ++i) {
    const auto next = select_project(q, reps[i].rows);
    TupleSet kept;
    std::set_intersection(out.upper.begin(), out.upper.end(), next.begin(), next.end(),
                          std::inserter(kept, kept.end()));
    out.upper = std::move(kept);
  }
  return out;
}

TupleClosure closure_def(const Delta& delta, const Tuple& t) {
  const Delta dt = delta.with_row(t);
  const TMapping mu = mu_star(dt);
  const auto support = mu.support();
  TupleClosure out{t, {}};
  for (auto c : t.constants()) out.constants.insert(c);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& fd : dt.fds) {
      auto rhs = support.find(fd.rhs);
      if (rhs == support.end()) continue;
      std::map<AttributeId, std::vector<Symbol>> pool;
      for (auto c : out.constants)
        if (fd.lhs.contains(c.attribute)) pool[c.attribute].push_back(c.value);
      for_each_combination(pool, fd.lhs, [&](const Tuple& x) {
        const IdSet ix = mu.image(x);
        if (ix.none()) return;
        for (auto a : rhs->second) {
          if (out.contains(a)) continue;
          if (ix.intersects(mu.image(a))) {
            out.constants.insert(a);
            changed = true;
          }
        }
      });
    }
  }
  return out;
}

TruthValue truth_value_def(const Delta& delta, const Tuple& t) { return truth_value_with(delta, mu_star(delta), t); }

std::vector<Tuple> candidate_tuples(const Delta& delta, bool with_fresh) {
  std::map<AttributeId, std::vector<Symbol>> pool;
  for (const auto& row : delta.table)
    for (auto c : row.constants()) pool[c.attribute].push_back(c.value);
  const std::size_t n = delta.universe ? delta.universe->size() : 0;
  for (AttributeId a = 0; a < n; ++a) {
    auto& v = pool[a];
    if (with_fresh) v.push_back(Symbol::intern("fresh_" + delta.universe->name(a)));
    std::sort(v.begin(), v.end(), lexical_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  std::vector<Tuple> out;
  AttributeSet all = delta.universe ? delta.universe->all() : AttributeSet{};
  all.for_each_nonempty_subset([&](AttributeSet s) {
    for_each_combination(pool, s, [&](const Tuple& t) { out.push_back(t); });
  });
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

// ---------------------------------------------------------------------------
// Property suite
// ---------------------------------------------------------------------------

bool PropertyReport::ok() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyOutcome& p) { return p.failures == 0; });
}

const PropertyOutcome* PropertyReport::find(std::string_view name) const {
  for (const auto& p : properties)
    if (p.name == name) return &p;
  return nullptr;
}

std::string PropertyReport::summary() const {
  std::ostringstream out;
  out << "instances=" << instances << " brute_force_skipped=" << brute_force_skipped
      << " discrepancies=" << discrepancies.size() << "\n";
  for (const auto& p : properties) {
    out << p.name << ": checks=" << p.checks << " failures=" << p.failures << "\n";
    for (const auto& s : p.samples) out << "  " << s << "\n";
  }
  return out.str();
}

namespace {

class Suite {
 public:
  explicit Suite(const PropertySuiteOptions& o) : opts_(o) {
    for (const char* n : {kLoClMatchesMuStar, kMuStarIsModel, kMuStarOrderFree, kConsistencyAgreement,
                          kTruthValueOracle, kClosureAgreement, kSchemeClosure, kAnswerChain, kRepairAnswers, kConsistentAnswerDef,
                          kMergeKnowledge, kChaseDeterminism})
      report_.properties.push_back({n, 0, 0, {}});
  }

  PropertyReport run() && {
    for (std::size_t i = 0; i < opts_.instances; ++i) instance(opts_.seed + i);
    report_.instances = opts_.instances;
    return std::move(report_);
  }

 private:
  void check(const char* name, bool ok, const std::function<std::string()>& detail) {
    for (auto& p : report_.properties) {
      if (p.name != name) continue;
      ++p.checks;
      if (!ok) {
        ++p.failures;
        if (p.samples.size() < 5) p.samples.push_back("seed=" + std::to_string(seed_) + " " + detail());
      }
      return;
    }
  }

  std::string show(const Tuple& t) const {
    std::string out = "(";
    for (auto c : t.constants()) out += (out.size() > 1 ? "," : "") + u_->name(c.attribute) + "=" + std::string(c.value.str());
    return out + ")";
  }

  std::string show(const TupleSet& s) const {
    std::vector<Tuple> v(s.begin(), s.end());
    std::sort(v.begin(), v.end(), canonical_less);
    std::string out = "{";
    for (const auto& t : v) out += (out.size() > 1 ? " " : "") + show(t);
    return out + "}";
  }

  void instance(std::uint64_t seed) {
    seed_ = seed;
    Rng meta(seed ^ 0x9e3779b97f4a7c15ULL);
    RandomInstanceSpec spec;
    spec.attributes = 2 + pick(meta, 3);
    spec.max_domain = 1 + pick(meta, 3);
    spec.max_rows = 1 + pick(meta, 6);
    spec.max_fds = 1 + pick(meta, 3);
    spec.null_probability = 0.15 * static_cast<double>(pick(meta, 3));
    spec.seed = seed;
    const Delta delta = generate_instance(spec);
    u_ = delta.universe;
    Rng rng(seed);

    const ChaseResult result = chase(delta);
    const IncSet incs = inc_set(result);
    const TMapping mu = mu_star(delta);

    // LoCl(D*) versus the support of μ*; every LoCl member is built from table constants.
    {
      std::string bad;
      for (const auto& t : candidate_tuples(delta, false))
        if (result.derivable(t) != mu_derivable(mu, t)) {
          bad = show(t) + (result.derivable(t) ? " in LoCl(D*) only" : " has nonempty mu* image only");
          break;
        }
      check(kLoClMatchesMuStar, bad.empty(), [&] { return bad; });
    }
    check(kMuStarIsModel, tmap_satisfies_delta(mu, delta), [] { return std::string("mu* violates an FD"); });
    check(kMuStarOrderFree, mu_star(delta, WideningOrder::Reversed) == mu,
          [] { return std::string("reversed widening order gives another fixpoint"); });

    // Truth values over every candidate tuple, fresh constants included.
    bool any_inc_def = false;
    for (const auto& t : candidate_tuples(delta, true)) {
      const TruthValue main = truth_value(t, result, incs);
      const TruthValue def = truth_value_with(delta, mu, t);
      any_inc_def = any_inc_def || def == TruthValue::Inc;
      check(kTruthValueOracle, main == def, [&] {
        return show(t) + " algorithm=" + std::string(to_string(main)) + " definition=" + std::string(to_string(def));
      });
    }
    {
      const bool a = is_consistent(delta);
      const bool b = is_interpretation(mu);
      const bool c = !any_inc_def;
      check(kConsistencyAgreement, a == b && b == c, [&] {
        return "Inc empty=" + std::to_string(a) + " mu* interpretation=" + std::to_string(b) +
               " no inc tuple by definition=" + std::to_string(c);
      });
    }

    // a ∈ q⁺ iff A ∈ Q⁺ for q, a below a derivable t; also tuple_closure = closure_def.
    {
      SchemeClosureCache scheme(delta.fds);
      for (const auto& t : result.dstar) {
        t.for_each_subtuple([&](const Tuple& q) {
          const TupleClosure def = closure_def(delta, q);
          const TupleClosure main = tuple_closure(delta, q);
          check(kClosureAgreement, def.constants == main.constants,
                [&] { return show(q) + ": closure algorithm and definition differ"; });
          const AttributeSet qplus = scheme(q.schema());
          for (auto c : t.constants()) {
            const bool in_tuple = def.contains(c);
            const bool in_scheme = qplus.contains(c.attribute);
            check(kSchemeClosure, in_tuple == in_scheme, [&] {
              return "t=" + show(t) + " q=" + show(q) + " a=" + u_->name(c.attribute) + "=" + std::string(c.value.str()) +
                     " in q+=" + std::to_string(in_tuple) + " in Q+=" + std::to_string(in_scheme);
            });
          }
        });
      }
    }

    queries(delta, result, rng);
    merge(delta, rng);

    // Chase under permuted rows and FDs.
    std::vector<Tuple> rows(delta.table.begin(), delta.table.end());
    std::vector<FD> fds = delta.fds;
    for (std::size_t p = 0; p < opts_.permutations; ++p) {
      shuffle(rows, rng);
      shuffle(fds, rng);
      const ChaseResult other = chase_rows(rows, fds);
      bool same = other.dstar == result.dstar;
      for (const auto& fd : delta.fds) same = same && other.inc[fd] == result.inc[fd];
      check(kChaseDeterminism, same, [&] { return "permutation " + std::to_string(p) + " changed (D*, inc)"; });
    }
  }

  Query random_query(const Delta& delta, Rng& rng) {
    const std::size_t n = u_->size();
    Query q;
    const std::uint64_t mask = 1 + pick(rng, (std::uint64_t{1} << n) - 1);
    q.select = AttributeSet(mask);
    auto atom = [&]() -> std::optional<Condition> {
      const auto a = static_cast<AttributeId>(pick(rng, n));
      std::vector<Symbol> values;
      for (const auto& row : delta.table)
        if (auto v = row.get(a)) values.push_back(*v);
      if (values.empty()) return std::nullopt;
      const Symbol v = values[pick(rng, values.size())];
      return Condition::compare(a, pick(rng, 2) == 0 ? CompareOp::Eq : CompareOp::Ne, v);
    };
    switch (pick(rng, 5)) {
      case 0:
      case 1: break;
      case 2: q.where = atom(); break;
      case 3:
        if (auto c = atom()) q.where = Condition::negate(*c);
        break;
      default:
        if (auto l = atom())
          if (auto r = atom()) q.where = pick(rng, 2) ? Condition::conj(*l, *r) : Condition::disj(*l, *r);
    }
    return q;
  }

  void queries(const Delta& delta, const ChaseResult& result, Rng& rng) {
    std::optional<std::vector<Repair>> brute;
    if (result.dstar.size() <= kBruteForceRowLimit) {
      brute = repairs_brute(result, delta.fds);
      try {
        const auto chosen = repairs_by_choice(result);
        if (chosen != *brute)
          report_.discrepancies.push_back("seed=" + std::to_string(seed_) + " repairs_by_choice gives " +
                                          std::to_string(chosen.size()) + " repairs, maximal subsets " +
                                          std::to_string(brute->size()));
      } catch (const CapExceeded& e) {
        report_.discrepancies.push_back("seed=" + std::to_string(seed_) + " choice product skipped: " + e.what());
      }
    } else {
      ++report_.brute_force_skipped;
    }

    for (std::size_t k = 0; k < opts_.queries_per_instance; ++k) {
      const Query q = random_query(delta, rng);
      const AnswerSet plus = consistent_answer(q, result);
      const RepairAnswers rep = repair_answers(q, result);
      const auto text = [&] { return q.to_text(*u_); };
      const bool chain = std::includes(rep.upper.tuples.begin(), rep.upper.tuples.end(), rep.lower.tuples.begin(),
                                       rep.lower.tuples.end()) &&
                         std::includes(plus.tuples.begin(), plus.tuples.end(), rep.upper.tuples.begin(),
                                       rep.upper.tuples.end());
      check(kAnswerChain, chain, [&] {
        return text() + " lower=" + show(rep.lower.tuples) + " upper=" + show(rep.upper.tuples) +
               " consistent=" + show(plus.tuples);
      });
      if (brute) {
        const auto def = answers_from_repairs(q, *brute);
        check(kRepairAnswers, def.lower == rep.lower.tuples && def.upper == rep.upper.tuples, [&] {
          return text() + " algorithm lower=" + show(rep.lower.tuples) + " upper=" + show(rep.upper.tuples) +
                 " repairs lower=" + show(def.lower) + " upper=" + show(def.upper);
        });
      }

      // Consistent answer through Δ_X = (π_X(D*), π_X(FD)).
      Table projected;
      for (const auto& t : result.dstar)
        if (q.select.subset_of(t.schema())) projected.insert(t.restrict(q.select));
      std::vector<FD> fds_x;
      for (const auto& fd : delta.fds)
        if (fd.attributes().subset_of(q.select)) fds_x.push_back(fd);
      const Delta delta_x(delta.universe, projected, fds_x);
      const ChaseResult chased_x = chase(delta_x);
      const IncSet incs_x = inc_set(chased_x);
      TupleSet via_def;
      for (const auto& x : plain_answer(q, result).tuples)
        if (truth_value(x, chased_x, incs_x) == TruthValue::True) via_def.insert(x);
      check(kConsistentAnswerDef, via_def == plus.tuples, [&] {
        return text() + " algorithm=" + show(plus.tuples) + " projection route=" + show(via_def);
      });
    }
  }

  void merge(const Delta& delta, Rng& rng) {
    Table t1, t2;
    for (const auto& row : delta.table) {
      const auto side = pick(rng, 3);
      if (side != 1) t1.insert(row);
      if (side != 0) t2.insert(row);
    }
    std::vector<FD> f1, f2;
    for (const auto& fd : delta.fds) {
      const auto side = pick(rng, 3);
      if (side != 1) f1.push_back(fd);
      if (side != 0) f2.push_back(fd);
    }
    SourceSet sources{{Delta(delta.universe, t1, f1), Delta(delta.universe, t2, f2)}};
    auto probes = default_merge_probes(sources);
    auto extra = candidate_tuples(delta, false);
    shuffle(extra, rng);
    extra.resize(std::min<std::size_t>(extra.size(), 48));
    probes.insert(probes.end(), extra.begin(), extra.end());
    for (const auto& row : merged_truth_report(sources, probes)) {
      check(kMergeKnowledge, row.knowledge_grows, [&] {
        std::string s = show(row.probe) + " sources=";
        for (auto v : row.per_source) s += std::string(to_string(v)) + ",";
        return s + " fold=" + std::string(to_string(row.fold)) + " merged=" + std::string(to_string(row.merged));
      });
    }
  }

  PropertySuiteOptions opts_;
  PropertyReport report_;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const Universe> u_;
};

}  // namespace

PropertyReport run_property_suite(const PropertySuiteOptions& options) { return Suite(options).run(); }

}  // namespace incdb::oracle
