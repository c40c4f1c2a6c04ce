#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "incdb/fourlogic.hpp"

using namespace incdb;
using namespace incdb::testing;

namespace {

constexpr FourValue t = FourValue::T, b = FourValue::B, n = FourValue::N, f = FourValue::F;

// Rows and columns in t, b, n, f order.
constexpr FourValue kOr[4][4] = {{t, t, t, t}, {t, b, t, b}, {t, t, n, n}, {t, b, n, f}};
constexpr FourValue kAnd[4][4] = {{t, b, n, f}, {b, b, f, f}, {n, f, n, f}, {f, f, f, f}};
constexpr FourValue kOplus[4][4] = {{t, b, t, b}, {b, b, b, b}, {t, b, n, f}, {b, b, f, f}};
constexpr FourValue kOtimes[4][4] = {{t, t, n, n}, {t, b, n, f}, {n, n, n, n}, {n, f, n, f}};
constexpr FourValue kNeg[4] = {f, b, n, t};

bool is_lub(FourValue x, FourValue y, FourValue z, bool (*le)(FourValue, FourValue)) {
  if (!le(x, z) || !le(y, z)) return false;
  for (auto w : kFourValues)
    if (le(x, w) && le(y, w) && !le(z, w)) return false;
  return true;
}

bool is_glb(FourValue x, FourValue y, FourValue z, bool (*le)(FourValue, FourValue)) {
  if (!le(z, x) || !le(z, y)) return false;
  for (auto w : kFourValues)
    if (le(w, x) && le(w, y) && !le(w, z)) return false;
  return true;
}

bool kle(FourValue x, FourValue y) { return knowledge_le(x, y); }
bool tle(FourValue x, FourValue y) { return truth_le(x, y); }

}  // namespace

TEST(Connectors, TablesExhaustive) {
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(neg4(kFourValues[i]), kNeg[i]);
    for (int j = 0; j < 4; ++j) {
      const auto x = kFourValues[i], y = kFourValues[j];
      EXPECT_EQ(or4(x, y), kOr[i][j]) << to_string(x) << " or " << to_string(y);
      EXPECT_EQ(and4(x, y), kAnd[i][j]) << to_string(x) << " and " << to_string(y);
      EXPECT_EQ(oplus(x, y), kOplus[i][j]) << to_string(x) << " oplus " << to_string(y);
      EXPECT_EQ(otimes(x, y), kOtimes[i][j]) << to_string(x) << " otimes " << to_string(y);
    }
  }
}

TEST(Connectors, NamedCases) {
  EXPECT_EQ(oplus(t, f), b);
  for (auto v : kFourValues) {
    EXPECT_EQ(oplus(n, v), v);
    EXPECT_EQ(oplus(b, v), b);
  }
  EXPECT_EQ(or4(n, neg4(n)), n);
}

TEST(Connectors, LatticeCharacterizations) {
  for (auto x : kFourValues)
    for (auto y : kFourValues) {
      EXPECT_TRUE(is_lub(x, y, oplus(x, y), kle));
      EXPECT_TRUE(is_glb(x, y, otimes(x, y), kle));
      EXPECT_TRUE(is_lub(x, y, or4(x, y), tle));
      EXPECT_TRUE(is_glb(x, y, and4(x, y), tle));
    }
}

TEST(Connectors, AlgebraicLaws) {
  for (auto x : kFourValues) {
    EXPECT_EQ(neg4(neg4(x)), x);
    EXPECT_EQ(oplus(x, x), x);
    EXPECT_EQ(or4(x, x), x);
    for (auto y : kFourValues) {
      EXPECT_EQ(oplus(x, y), oplus(y, x));
      EXPECT_EQ(or4(x, y), or4(y, x));
      EXPECT_EQ(neg4(and4(x, y)), or4(neg4(x), neg4(y)));
      EXPECT_EQ(neg4(or4(x, y)), and4(neg4(x), neg4(y)));
      for (auto z : kFourValues) {
        EXPECT_EQ(oplus(oplus(x, y), z), oplus(x, oplus(y, z)));
        EXPECT_EQ(or4(or4(x, y), z), or4(x, or4(y, z)));
      }
    }
  }
  EXPECT_EQ(neg4(b), b);
  EXPECT_EQ(neg4(n), n);
}

TEST(Correspondence, HIsBijection) {
  EXPECT_EQ(h(TruthValue::True), t);
  EXPECT_EQ(h(TruthValue::Inc), b);
  EXPECT_EQ(h(TruthValue::Unkn), n);
  EXPECT_EQ(h(TruthValue::False), f);
  for (auto v : kTruthValues) EXPECT_EQ(h_inverse(h(v)), v);
  for (auto x : kTruthValues)
    for (auto y : kTruthValues) {
      EXPECT_EQ(oplus(x, y), h_inverse(oplus(h(x), h(y))));
      EXPECT_EQ(knowledge_le(x, y), knowledge_le(h(x), h(y)));
    }
}

TEST(KnowledgeOrder, Examples) {
  EXPECT_TRUE(knowledge_le(TruthValue::Unkn, TruthValue::True));
  for (auto v : kTruthValues) EXPECT_TRUE(knowledge_le(v, v));
  EXPECT_FALSE(knowledge_le(TruthValue::True, TruthValue::False));
  EXPECT_FALSE(knowledge_le(TruthValue::False, TruthValue::True));
  EXPECT_TRUE(knowledge_le(TruthValue::False, TruthValue::Inc));
}

TEST(Merge, SourcesOfCatalog) {
  const SourceSet s{{running_d1(), running_d2()}};
  const Delta merged = merge_sources(s);
  EXPECT_EQ(merged.table, running_delta().table);
  EXPECT_EQ(merged.fds, running_delta().fds);
  const Delta self = merge_sources(SourceSet{{running_d1(), running_d1()}});
  EXPECT_EQ(self.table, running_d1().table);
  EXPECT_EQ(self.fds, running_d1().fds);
}

TEST(Merge, Errors) {
  EXPECT_THROW(merge_sources(SourceSet{}), std::invalid_argument);
  EXPECT_THROW(merge_sources(SourceSet{{running_d1(), abc_delta({"A=a"}, "")}}), SemanticError);
}

TEST(Merge, ReportOnCatalog) {
  const SourceSet s{{running_d1(), running_d2()}};
  const auto rows = merged_truth_report(s, {emp("Id=i2,C=c"), emp("Id=i2")});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].per_source, (std::vector<TruthValue>{TruthValue::True, TruthValue::False}));
  EXPECT_EQ(rows[0].fold, TruthValue::Inc);
  EXPECT_EQ(rows[0].merged, TruthValue::Inc);
  EXPECT_TRUE(rows[0].equal);
  EXPECT_EQ(rows[1].per_source, (std::vector<TruthValue>{TruthValue::True, TruthValue::True}));
  EXPECT_EQ(rows[1].fold, TruthValue::True);
  EXPECT_EQ(rows[1].merged, TruthValue::Inc);
  EXPECT_FALSE(rows[1].equal);
  EXPECT_TRUE(rows[1].knowledge_grows);
}

TEST(Merge, FDFromOneSourceAppliesToTheOther) {
  const SourceSet s{{abc_delta({"A=a,B=b,C=c"}, ""), abc_delta({"B=b,C=c'"}, "B -> C")}};
  const Delta merged = merge_sources(s);
  EXPECT_EQ(merged.table, table_of(*abc_universe(), {"A=a,B=b,C=c", "B=b,C=c'"}));
  EXPECT_EQ(merged.fds, fds_of(*abc_universe(), "B -> C"));
  const auto rows = merged_truth_report(s, {abc("B=b")});
  EXPECT_EQ(rows[0].fold, TruthValue::True);
  EXPECT_EQ(rows[0].merged, TruthValue::Inc);
}

TEST(Merge, DefaultProbesAllGainKnowledge) {
  const SourceSet s{{running_d1(), running_d2()}};
  const auto probes = default_merge_probes(s);
  EXPECT_TRUE(std::is_sorted(probes.begin(), probes.end(), canonical_less));
  EXPECT_TRUE(std::find(probes.begin(), probes.end(), emp("M=m''")) != probes.end());
  for (const auto& row : merged_truth_report(s, probes)) EXPECT_TRUE(row.knowledge_grows);
}
