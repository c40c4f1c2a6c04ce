#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "incdb/io.hpp"

using namespace incdb;
using namespace incdb::testing;

TEST(Schema, ParsesDeclarations) {
  const Universe u = io::parse_schema("# comment\nattribute A domain n ordered\n\nattribute B domain n\nattribute C domain c\n");
  EXPECT_EQ(u.size(), 3u);
  EXPECT_TRUE(u.ordered(u.id("B")));
  EXPECT_FALSE(u.ordered(u.id("C")));
  EXPECT_TRUE(u.comparable(u.id("A"), u.id("B")));
}

TEST(Schema, Errors) {
  EXPECT_THROW(io::parse_schema(""), ParseError);
  EXPECT_THROW(io::parse_schema("attribute A domain a\nattribute A domain b\n"), ParseError);
  EXPECT_THROW(io::parse_schema("attribute 1A domain a\n"), ParseError);
  EXPECT_THROW(io::parse_schema("attr A domain a\n"), ParseError);
  EXPECT_THROW(io::parse_schema("attribute A domain a sorted\n"), ParseError);
}

TEST(Table, ParsesNullsQuotesAndColumnOrder) {
  const auto& u = *abc_universe();
  const Table t = io::parse_table(u, "C,A\nc,a\n,a'\n\"x,y\",\" a \"\n c ,\n");
  EXPECT_EQ(t.size(), 4u);
  EXPECT_TRUE(t.contains(abc("A=a,C=c")));
  EXPECT_TRUE(t.contains(abc("A=a'")));
  EXPECT_TRUE(t.contains(Tuple::of(u, {{"A", " a "}, {"C", "x,y"}})));
  EXPECT_TRUE(t.contains(abc("C=c")));
}

TEST(Table, Errors) {
  const auto& u = *abc_universe();
  EXPECT_THROW(io::parse_table(u, "A,D\na,d\n"), ParseError);
  EXPECT_THROW(io::parse_table(u, "A,A\na,a\n"), ParseError);
  EXPECT_THROW(io::parse_table(u, "A,B\na\n"), ParseError);
  EXPECT_THROW(io::parse_table(u, "A,B\n,\n"), ParseError);
  EXPECT_THROW(io::parse_table(u, "A,B\n\"a,b\n"), ParseError);
}

TEST(FDFile, ParsesAndExpands) {
  const auto& u = *abc_universe();
  const auto fds = io::parse_fds(u, "# deps\nA -> B C\nA,B -> C\nA -> B\n");
  ASSERT_EQ(fds.size(), 3u);
  EXPECT_EQ(fds[0], FD(u.set_of({"A"}), u.id("B")));
  EXPECT_EQ(fds[1], FD(u.set_of({"A"}), u.id("C")));
  EXPECT_EQ(fds[2], FD(u.set_of({"A", "B"}), u.id("C")));
  EXPECT_TRUE(io::parse_fds(u, "\n# none\n").empty());
}

TEST(FDFile, Errors) {
  const auto& u = *abc_universe();
  EXPECT_THROW(io::parse_fds(u, "A B\n"), ParseError);
  EXPECT_THROW(io::parse_fds(u, "-> B\n"), ParseError);
  EXPECT_THROW(io::parse_fds(u, "A ->\n"), ParseError);
  EXPECT_THROW(io::parse_fds(u, "A -> A\n"), ParseError);
  EXPECT_THROW(io::parse_fds(u, "A -> D\n"), ParseError);
}

TEST(TupleLiteral, RoundTrip) {
  const auto& u = *running_universe();
  for (const char* l : {"Id=i1,K=k'", "M=m''", "Id=\"a,b\",C=c"}) {
    const Tuple t = io::parse_tuple_literal(u, l);
    EXPECT_EQ(io::parse_tuple_literal(u, io::format_tuple(u, t)), t);
  }
  EXPECT_THROW(io::parse_tuple_literal(u, ""), ParseError);
  EXPECT_THROW(io::parse_tuple_literal(u, "Id"), ParseError);
  EXPECT_THROW(io::parse_tuple_literal(u, "Id=i1,Id=i2"), ParseError);
  EXPECT_THROW(io::parse_tuple_literal(u, "X=1"), ParseError);
}

TEST(Writers, TableRoundTrip) {
  const auto& u = *running_universe();
  const ChaseResult r = chase(running_delta());
  const std::string text = io::write_table(u, r.dstar);
  EXPECT_EQ(io::parse_table(u, text), r.dstar);
  EXPECT_EQ(io::write_table(u, io::parse_table(u, text)), text);
  EXPECT_EQ(text.substr(0, text.find('\n')), "Id,K,M,C");
}

TEST(Writers, CsvCellQuoting) {
  EXPECT_EQ(io::csv_cell("k'"), "k'");
  EXPECT_EQ(io::csv_cell("a,b"), "\"a,b\"");
  EXPECT_EQ(io::csv_cell("say \"x\""), "\"say \"\"x\"\"\"");
  EXPECT_EQ(io::csv_cell(" padded"), "\" padded\"");
  EXPECT_EQ(io::csv_cell(""), "\"\"");
}

TEST(Writers, IncAndFDs) {
  const auto& u = *running_universe();
  const ChaseResult r = chase(running_delta());
  EXPECT_EQ(io::write_inc(u, r.inc), "Id -> C: i2\n");
  EXPECT_EQ(io::write_fds(u, r.fds()), "Id -> K\nId -> C\n");
  EXPECT_EQ(io::parse_fds(u, io::write_fds(u, r.fds())), r.fds());
}
