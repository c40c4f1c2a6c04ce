#include "incdb/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

namespace incdb::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

[[noreturn]] void fail(std::string_view what, std::size_t line, const std::string& msg) {
  throw ParseError(std::string(what) + " line " + std::to_string(line) + ": " + msg);
}

struct Cell {
  std::string text;
  bool quoted = false;
};

// Splits CSV text into records; quoted cells may span lines.
std::vector<std::pair<std::size_t, std::vector<Cell>>> csv_records(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<Cell>>> out;
  std::vector<Cell> record;
  Cell cell;
  std::size_t line = 1, record_line = 1;
  bool in_quotes = false, after_quote = false, any = false;
  auto end_cell = [&] {
    if (!cell.quoted) cell.text = std::string(trim(cell.text));
    record.push_back(std::move(cell));
    cell = {};
    after_quote = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.text += '"';
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (ch == '\n') ++line;
        cell.text += ch;
      }
      continue;
    }
    if (ch == '"') {
      if (after_quote || !trim(cell.text).empty()) fail("table", line, "stray quote");
      cell.text.clear();
      cell.quoted = true;
      in_quotes = true;
      any = true;
    } else if (ch == ',') {
      end_cell();
      any = true;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !trim(cell.text).empty()) {
        end_cell();
        out.emplace_back(record_line, std::move(record));
        record = {};
      }
      cell = {};
      any = false;
      ++line;
      record_line = line;
    } else {
      if (after_quote && !std::isspace(static_cast<unsigned char>(ch))) fail("table", line, "text after closing quote");
      if (!after_quote) cell.text += ch;
      if (!std::isspace(static_cast<unsigned char>(ch))) any = true;
    }
  }
  if (in_quotes) fail("table", line, "unterminated quoted cell");
  if (any || !trim(cell.text).empty()) {
    end_cell();
    out.emplace_back(record_line, std::move(record));
  }
  return out;
}

const std::regex& name_pattern() {
  static const std::regex re("[A-Za-z_][A-Za-z0-9_]*");
  return re;
}

bool needs_quotes(std::string_view v) {
  if (v.empty()) return true;
  if (std::isspace(static_cast<unsigned char>(v.front())) || std::isspace(static_cast<unsigned char>(v.back())))
    return true;
  return v.find_first_of(",\"\r\n=") != std::string_view::npos;
}

}  // namespace

std::string csv_cell(std::string_view value) {
  if (!needs_quotes(value)) return std::string(value);
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

Universe parse_schema(std::string_view text) {
  std::vector<AttributeDecl> decls;
  std::set<std::string> ordered;
  std::set<std::string> names;
  std::size_t n = 0;
  for (auto raw : lines_of(text)) {
    ++n;
    auto line = strip_comment(raw);
    if (line.empty()) continue;
    std::istringstream in{std::string(line)};
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    if (words.size() < 4 || words.size() > 5 || words[0] != "attribute" || words[2] != "domain" ||
        (words.size() == 5 && words[4] != "ordered"))
      fail("schema", n, "expected 'attribute <name> domain <tag> [ordered]'");
    if (!std::regex_match(words[1], name_pattern())) fail("schema", n, "invalid attribute name '" + words[1] + "'");
    if (!names.insert(words[1]).second) fail("schema", n, "duplicate attribute '" + words[1] + "'");
    if (words.size() == 5) ordered.insert(words[3]);
    decls.push_back({words[1], words[3]});
  }
  if (decls.empty()) throw ParseError("schema: no attributes declared");
  if (decls.size() > kMaxAttributes)
    throw ParseError("schema: at most " + std::to_string(kMaxAttributes) + " attributes are supported");
  return Universe(std::move(decls), std::move(ordered));
}

Table parse_table(const Universe& u, std::string_view text) {
  auto records = csv_records(text);
  if (records.empty()) throw ParseError("table: missing header line");
  std::vector<AttributeId> columns;
  AttributeSet seen;
  for (const auto& cell : records.front().second) {
    auto a = u.find(cell.text);
    if (!a) fail("table", records.front().first, "unknown attribute '" + cell.text + "' in header");
    if (seen.contains(*a)) fail("table", records.front().first, "attribute '" + cell.text + "' repeated in header");
    seen.insert(*a);
    columns.push_back(*a);
  }
  Table out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& [line, cells] = records[r];
    if (cells.size() != columns.size())
      fail("table", line,
           "expected " + std::to_string(columns.size()) + " cells, found " + std::to_string(cells.size()));
    std::vector<std::pair<AttributeId, Symbol>> bindings;
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!cells[c].text.empty()) bindings.emplace_back(columns[c], Symbol::intern(cells[c].text));
    if (bindings.empty()) fail("table", line, "row has no values");
    out.insert(Tuple::of(bindings));
  }
  return out;
}

std::vector<FD> parse_fds(const Universe& u, std::string_view text) {
  std::vector<FD> out;
  std::size_t n = 0;
  auto attrs = [&](std::string_view side, std::size_t line) {
    AttributeSet s;
    std::string buf(side);
    std::replace(buf.begin(), buf.end(), ',', ' ');
    std::istringstream in(buf);
    for (std::string w; in >> w;) {
      auto a = u.find(w);
      if (!a) fail("fds", line, "unknown attribute '" + w + "'");
      s.insert(*a);
    }
    return s;
  };
  for (auto raw : lines_of(text)) {
    ++n;
    auto line = strip_comment(raw);
    if (line.empty()) continue;
    auto arrow = line.find("->");
    if (arrow == std::string_view::npos || line.find("->", arrow + 2) != std::string_view::npos)
      fail("fds", n, "expected '<lhs> -> <rhs>'");
    const AttributeSet lhs = attrs(line.substr(0, arrow), n);
    const AttributeSet rhs = attrs(line.substr(arrow + 2), n);
    if (lhs.empty()) fail("fds", n, "empty left-hand side");
    if (rhs.empty()) fail("fds", n, "empty right-hand side");
    for (auto b : rhs.members()) {
      if (lhs.contains(b)) fail("fds", n, "right-hand side attribute '" + u.name(b) + "' also on the left");
      FD fd(lhs, b);
      if (std::find(out.begin(), out.end(), fd) == out.end()) out.push_back(fd);
    }
  }
  return out;
}

Tuple parse_tuple_literal(const Universe& u, std::string_view text) {
  if (trim(text).empty()) throw ParseError("tuple literal: empty");
  // Split on top-level commas, honouring quotes.
  std::vector<std::string> parts(1);
  bool in_quotes = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '"') {
      if (in_quotes && i + 1 < text.size() && text[i + 1] == '"') {
        parts.back() += "\"\"";
        ++i;
        continue;
      }
      in_quotes = !in_quotes;
    } else if (ch == ',' && !in_quotes) {
      parts.emplace_back();
      continue;
    }
    parts.back() += ch;
  }
  if (in_quotes) throw ParseError("tuple literal: unterminated quote");
  std::vector<std::pair<AttributeId, Symbol>> bindings;
  AttributeSet seen;
  for (const auto& part : parts) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw ParseError("tuple literal: expected Attr=value, got '" + part + "'");
    const std::string name(trim(std::string_view(part).substr(0, eq)));
    auto a = u.find(name);
    if (!a) throw ParseError("tuple literal: unknown attribute '" + name + "'");
    if (seen.contains(*a)) throw ParseError("tuple literal: attribute '" + name + "' bound twice");
    seen.insert(*a);
    auto cells = csv_records(std::string_view(part).substr(eq + 1));
    if (cells.size() != 1 || cells[0].second.size() != 1 || cells[0].second[0].text.empty())
      throw ParseError("tuple literal: missing value for '" + name + "'");
    bindings.emplace_back(*a, Symbol::intern(cells[0].second[0].text));
  }
  return Tuple::of(bindings);
}

std::string write_rows(const Universe& u, AttributeSet columns, const std::vector<Tuple>& rows,
                       const std::vector<std::string>& extra_header,
                       const std::vector<std::vector<std::string>>& extra_cells) {
  std::string out;
  const auto cols = columns.members();
  bool first = true;
  for (auto a : cols) {
    out += (first ? "" : ",") + csv_cell(u.name(a));
    first = false;
  }
  for (const auto& h : extra_header) out += "," + csv_cell(h);
  out += '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    first = true;
    for (auto a : cols) {
      if (!first) out += ',';
      first = false;
      if (auto v = rows[r].get(a)) out += csv_cell(v->str());
    }
    if (r < extra_cells.size())
      for (const auto& c : extra_cells[r]) out += "," + csv_cell(c);
    out += '\n';
  }
  return out;
}

std::string write_table(const Universe& u, const Table& table) {
  return write_rows(u, u.all(), table.canonical_rows());
}

std::string write_fds(const Universe& u, const std::vector<FD>& fds) {
  std::string out;
  for (const auto& fd : fds) out += format_fd(u, fd) + "\n";
  return out;
}

std::string write_inc(const Universe& u, const IncMap& inc) {
  std::string out;
  for (std::size_t f = 0; f < inc.fds().size(); ++f) {
    std::vector<Tuple> xs(inc.at(f).begin(), inc.at(f).end());
    std::sort(xs.begin(), xs.end(), canonical_less);
    for (const auto& x : xs) {
      out += format_fd(u, inc.fds()[f]) + ": ";
      bool first = true;
      for (const auto& c : x.constants()) {
        out += (first ? "" : ",") + csv_cell(c.value.str());
        first = false;
      }
      out += '\n';
    }
  }
  return out;
}

std::string format_tuple(const Universe& u, const Tuple& t) {
  std::string out;
  for (const auto& c : t.constants()) {
    if (!out.empty()) out += ',';
    out += u.name(c.attribute) + "=" + csv_cell(c.value.str());
  }
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << content;
  if (!out) throw Error("failed writing " + p.string());
}

Delta load_delta(const std::shared_ptr<const Universe>& u, const std::filesystem::path& table,
                 const std::filesystem::path& fds) {
  return Delta(u, parse_table(*u, read_file(table)), parse_fds(*u, read_file(fds)));
}

}  // namespace incdb::io
