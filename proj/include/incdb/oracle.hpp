#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "incdb/chase.hpp"
#include "incdb/classify.hpp"
#include "incdb/query.hpp"
#include "incdb/semantics.hpp"

// Brute-force references for the property tests. Nothing here goes through
// the chase to decide derivability.
namespace incdb::oracle {

struct RandomInstanceSpec {
  std::size_t attributes = 4;   // universe size, at most 4
  std::size_t max_domain = 3;   // values per attribute, at most 3
  std::size_t max_rows = 6;     // at most 6
  std::size_t max_fds = 3;      // at most 3
  double null_probability = 0.3;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when a bound is outside the limits above.
  void validate() const;
};

// Attributes A, B, C, D with domain tags dA, ... and values a0, a1, ...
// Identical specs give identical instances.
Delta generate_instance(const RandomInstanceSpec& spec);

inline constexpr std::size_t kBruteForceRowLimit = 64;

// Maximal FD-satisfying subsets of D*. Throws CapExceeded when D* has more
// than kBruteForceRowLimit rows or more than `cap` repairs exist.
std::vector<Repair> repairs_brute(const ChaseResult& result, const std::vector<FD>& fds, std::size_t cap = 1 << 16);

struct RepairAnswerPair {
  TupleSet lower;  // π_X(σ_Γ(⋂ R))
  TupleSet upper;  // ⋂ π_X(σ_Γ(R))
};

// Throws std::invalid_argument on an empty repair list.
RepairAnswerPair answers_from_repairs(const Query& q, const std::vector<Repair>& reps);

// t⁺ by saturation, with Δ_t ⊢ xa decided by μ* of D ∪ {t}.
TupleClosure closure_def(const Delta& delta, const Tuple& t);

// The four-case table applied to μ*-derivability and closure_def.
TruthValue truth_value_def(const Delta& delta, const Tuple& t);

// Every tuple over the constants of the table, plus one fresh value per
// attribute when `with_fresh` is set.
std::vector<Tuple> candidate_tuples(const Delta& delta, bool with_fresh);

struct PropertyOutcome {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> samples;  // first few failure descriptions
};

struct PropertySuiteOptions {
  std::uint64_t seed = 1;
  std::size_t instances = 1000;
  std::size_t permutations = 5;
  std::size_t queries_per_instance = 4;
};

struct PropertyReport {
  std::vector<PropertyOutcome> properties;
  // "seed=<s> <description>" lines for repair-generation mismatches; these do
  // not count as failures.
  std::vector<std::string> discrepancies;
  std::size_t instances = 0;
  std::size_t brute_force_skipped = 0;

  bool ok() const;
  const PropertyOutcome* find(std::string_view name) const;
  std::string summary() const;
};

// Property names, in report order.
inline constexpr const char* kLoClMatchesMuStar = "locl_equals_mu_star_support";
inline constexpr const char* kMuStarIsModel = "mu_star_is_model";
inline constexpr const char* kMuStarOrderFree = "mu_star_order_independent";
inline constexpr const char* kConsistencyAgreement = "consistency_three_way";
inline constexpr const char* kTruthValueOracle = "truth_value_matches_definition";
inline constexpr const char* kClosureAgreement = "tuple_closure_matches_definition";
inline constexpr const char* kSchemeClosure = "tuple_closure_matches_scheme_closure";
inline constexpr const char* kAnswerChain = "answer_inclusion_chain";
inline constexpr const char* kRepairAnswers = "repair_answers_match_brute_force";
inline constexpr const char* kConsistentAnswerDef = "consistent_answer_matches_projection_route";
inline constexpr const char* kMergeKnowledge = "merge_knowledge_grows";
inline constexpr const char* kChaseDeterminism = "chase_order_independent";

PropertyReport run_property_suite(const PropertySuiteOptions& options);

}  // namespace incdb::oracle
