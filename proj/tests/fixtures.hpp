#pragma once

#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include "incdb/chase.hpp"
#include "incdb/io.hpp"

namespace incdb::testing {

inline std::shared_ptr<const Universe> abc_universe() {
  static auto u = std::make_shared<const Universe>(
      std::vector<AttributeDecl>{{"A", "a"}, {"B", "b"}, {"C", "c"}});
  return u;
}

inline std::shared_ptr<const Universe> running_universe() {
  static auto u = std::make_shared<const Universe>(
      std::vector<AttributeDecl>{{"Id", "id"}, {"K", "key"}, {"M", "manager"}, {"C", "category"}});
  return u;
}

// Tuple from a literal such as "A=a,B=b".
inline Tuple T(const Universe& u, const std::string& literal) { return io::parse_tuple_literal(u, literal); }
inline Tuple abc(const std::string& literal) { return T(*abc_universe(), literal); }
inline Tuple emp(const std::string& literal) { return T(*running_universe(), literal); }

inline Table table_of(const Universe& u, std::initializer_list<std::string> literals) {
  Table out;
  for (const auto& l : literals) out.insert(T(u, l));
  return out;
}

inline std::vector<FD> fds_of(const Universe& u, const std::string& text) { return io::parse_fds(u, text); }

inline Delta abc_delta(std::initializer_list<std::string> rows, const std::string& fds) {
  return Delta(abc_universe(), table_of(*abc_universe(), rows), fds_of(*abc_universe(), fds));
}

// Merged object catalog with {Id -> K, Id -> C}.
inline Delta running_delta() {
  const auto& u = *running_universe();
  return Delta(running_universe(),
               table_of(u, {"Id=i1,K=k,M=m,C=c", "Id=i1,M=m'", "Id=i1,K=k,C=c", "Id=i2,K=k',M=m',C=c",
                            "Id=i2,K=k',M=m''", "Id=i2,K=k',C=c'", "Id=i3,M=m", "Id=i3,K=k'"}),
               fds_of(u, "Id -> K\nId -> C\n"));
}

inline Delta running_d1() {
  const auto& u = *running_universe();
  return Delta(running_universe(),
               table_of(u, {"Id=i1,K=k,M=m,C=c", "Id=i1,M=m'", "Id=i2,K=k',M=m',C=c", "Id=i2,K=k',M=m''",
                            "Id=i3,M=m"}),
               fds_of(u, "Id -> K\nId -> C\n"));
}

inline Delta running_d2() {
  const auto& u = *running_universe();
  return Delta(running_universe(),
               table_of(u, {"Id=i1,K=k,C=c", "Id=i2,K=k',C=c'", "Id=i2,K=k',M=m''", "Id=i3,K=k'"}),
               fds_of(u, "Id -> K\nId -> C\n"));
}

// Its chased table.
inline Table running_dstar() {
  return table_of(*running_universe(),
                  {"Id=i1,K=k,M=m,C=c", "Id=i1,K=k,M=m',C=c", "Id=i2,K=k',M=m',C=c", "Id=i2,K=k',M=m'',C=c",
                   "Id=i2,K=k',M=m',C=c'", "Id=i2,K=k',M=m'',C=c'", "Id=i3,K=k',M=m"});
}

inline TupleSet set_of(const Universe& u, std::initializer_list<std::string> literals) {
  TupleSet out;
  for (const auto& l : literals) out.insert(T(u, l));
  return out;
}

}  // namespace incdb::testing
