#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "incdb/chase.hpp"
#include "incdb/classify.hpp"

namespace incdb::io {

// Lines "attribute <name> domain <tag> [ordered]"; '#' starts a comment.
// A domain tag is ordered when any of its declarations says so.
Universe parse_schema(std::string_view text);

// Comma-separated, RFC 4180 quoting. The header names a subset of the
// universe in any order; an empty cell is a null. Duplicate rows collapse.
Table parse_table(const Universe& u, std::string_view text);

// Lines "<A1> <A2> ... -> <B1> ...", attributes separated by blanks or commas.
// A compound right-hand side yields one FD per attribute.
std::vector<FD> parse_fds(const Universe& u, std::string_view text);

// "A=v,B=w"; values may be quoted like CSV cells.
Tuple parse_tuple_literal(const Universe& u, std::string_view text);

// Header lists the universe attributes; rows in canonical order.
std::string write_table(const Universe& u, const Table& table);
std::string write_rows(const Universe& u, AttributeSet columns, const std::vector<Tuple>& rows,
                       const std::vector<std::string>& extra_header = {},
                       const std::vector<std::vector<std::string>>& extra_cells = {});
std::string write_fds(const Universe& u, const std::vector<FD>& fds);

// "<FD>: <x>" per conflicting x, FDs in declaration order, x in canonical order.
std::string write_inc(const Universe& u, const IncMap& inc);

// Inverse of parse_tuple_literal.
std::string format_tuple(const Universe& u, const Tuple& t);
std::string csv_cell(std::string_view value);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);

Delta load_delta(const std::shared_ptr<const Universe>& u, const std::filesystem::path& table,
                 const std::filesystem::path& fds);

}  // namespace incdb::io
