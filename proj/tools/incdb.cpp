#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <memory>

#include "incdb/chase.hpp"
#include "incdb/classify.hpp"
#include "incdb/fourlogic.hpp"
#include "incdb/io.hpp"
#include "incdb/oracle.hpp"
#include "incdb/query.hpp"

namespace fs = std::filesystem;
using namespace incdb;

namespace {

enum Exit : int { kOk = 0, kFailure = 1, kParse = 2, kSemantic = 3, kCap = 4 };

struct Inputs {
  std::string schema, table, fds;

  void bind(CLI::App* cmd) {
    cmd->add_option("--schema", schema, "schema file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--table", table, "table CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--fds", fds, "functional dependency file")->required()->check(CLI::ExistingFile);
  }

  std::shared_ptr<const Universe> universe() const {
    return std::make_shared<const Universe>(io::parse_schema(io::read_file(schema)));
  }
};

fs::path prepare_dir(const std::string& dir) {
  fs::create_directories(dir);
  return dir;
}

std::string stats_text(const ChaseResult& r) {
  return "passes " + std::to_string(r.stats.passes) + "\npeak_rows " + std::to_string(r.stats.peak_rows) +
         "\ngenerated " + std::to_string(r.stats.generated) + "\ndstar_rows " + std::to_string(r.dstar.size()) +
         "\nconflict_degree " + std::to_string(conflict_degree(r)) + "\n";
}

int run_chase(const Inputs& in, const std::string& out) {
  const auto u = in.universe();
  const auto result = chase(io::load_delta(u, in.table, in.fds));
  const auto dir = prepare_dir(out);
  io::write_file(dir / "dstar.csv", io::write_table(*u, result.dstar));
  io::write_file(dir / "inc.txt", io::write_inc(*u, result.inc));
  io::write_file(dir / "stats.txt", stats_text(result));
  return kOk;
}

int run_classify(const Inputs& in, const std::string& out) {
  const auto u = in.universe();
  const auto result = chase(io::load_delta(u, in.table, in.fds));
  const auto incs = inc_set(result);
  const auto rows = result.dstar.canonical_rows();
  std::vector<std::vector<std::string>> labels;
  for (const auto& t : rows) labels.push_back({std::string(to_string(incs.contains(t) ? TruthValue::Inc : TruthValue::True))});
  const auto dir = prepare_dir(out);
  io::write_file(dir / "labeled.csv", io::write_rows(*u, u->all(), rows, {"truth"}, labels));
  std::vector<Tuple> inc_rows(incs.tuples.begin(), incs.tuples.end());
  std::sort(inc_rows.begin(), inc_rows.end(), canonical_less);
  io::write_file(dir / "inc_tuples.csv", io::write_rows(*u, u->all(), inc_rows));
  return kOk;
}

int run_truth(const Inputs& in, const std::string& literal) {
  const auto u = in.universe();
  const Tuple t = io::parse_tuple_literal(*u, literal);
  const auto result = chase(io::load_delta(u, in.table, in.fds));
  std::cout << to_string(truth_value(t, result, inc_set(result))) << "\n";
  return kOk;
}

int run_merge(const std::string& schema, const std::vector<std::string>& tables, const std::vector<std::string>& fds,
              const std::string& out) {
  if (tables.size() != fds.size()) throw ParseError("merge needs one --fds file per --table");
  const auto u = std::make_shared<const Universe>(io::parse_schema(io::read_file(schema)));
  SourceSet sources;
  for (std::size_t i = 0; i < tables.size(); ++i) sources.deltas.push_back(io::load_delta(u, tables[i], fds[i]));
  const Delta merged = merge_sources(sources);
  std::string report;
  for (const auto& row : merged_truth_report(sources, default_merge_probes(sources))) {
    std::string values;
    for (auto v : row.per_source) values += (values.empty() ? "" : ",") + std::string(to_string(v));
    report += io::format_tuple(*u, row.probe) + " | " + values + " | " + std::string(to_string(row.fold)) + " | " +
              std::string(to_string(row.merged)) + " | " + (row.equal ? "yes" : "no") + "\n";
  }
  const auto dir = prepare_dir(out);
  io::write_file(dir / "merged.csv", io::write_table(*u, merged.table));
  io::write_file(dir / "merged_fds.txt", io::write_fds(*u, merged.fds));
  io::write_file(dir / "report.txt", report);
  std::cout << report;
  return kOk;
}

int run_query(const Inputs& in, const std::string& text, const std::string& mode_name, bool annotate_rows) {
  const auto u = in.universe();
  const auto mode = answer_mode_from_string(mode_name);
  if (!mode) throw ParseError("unknown mode '" + mode_name + "'");
  const Query q = parse_query(*u, text);
  const auto result = chase(io::load_delta(u, in.table, in.fds));
  const AnswerSet ans = answer(q, result, *mode);
  if (!annotate_rows) {
    std::cout << io::write_rows(*u, ans.schema, ans.canonical_rows());
    return kOk;
  }
  std::vector<Tuple> rows;
  std::vector<std::vector<std::string>> cells;
  for (auto& [t, v] : annotate(ans, result, inc_set(result))) {
    rows.push_back(t);
    cells.push_back({std::string(to_string(v))});
  }
  std::cout << io::write_rows(*u, ans.schema, rows, {"truth"}, cells);
  return kOk;
}

int run_repairs(const Inputs& in, const std::string& out, std::size_t cap) {
  const auto u = in.universe();
  const auto result = chase(io::load_delta(u, in.table, in.fds));
  const auto reps = repairs_by_choice(result, cap);
  const auto dir = prepare_dir(out);
  for (std::size_t i = 0; i < reps.size(); ++i)
    io::write_file(dir / ("repair_" + std::to_string(i + 1) + ".csv"), io::write_table(*u, reps[i].rows));
  std::cout << reps.size() << "\n";
  return kOk;
}

int run_check(std::uint64_t seed, std::size_t instances, const std::string& discrepancies) {
  oracle::PropertySuiteOptions opts;
  opts.seed = seed;
  opts.instances = instances;
  const auto report = oracle::run_property_suite(opts);
  std::cout << report.summary();
  if (!discrepancies.empty()) {
    std::string lines;
    for (const auto& l : report.discrepancies) lines += l + "\n";
    io::write_file(discrepancies, lines);
  }
  return report.ok() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inconsistency-tolerant tables with nulls and functional dependencies"};
  app.require_subcommand(1);

  Inputs in;
  std::string out, literal, text, mode = "consistent", schema, discrepancies;
  std::vector<std::string> tables, fds;
  bool annotate_rows = false;
  std::size_t cap = kDefaultRepairCap, instances = 1000;
  std::uint64_t seed = 1;

  auto* c_chase = app.add_subcommand("chase", "chase a table; writes dstar.csv, inc.txt, stats.txt");
  in.bind(c_chase);
  c_chase->add_option("--out", out, "output directory")->required();

  auto* c_classify = app.add_subcommand("classify", "label D* rows; writes labeled.csv, inc_tuples.csv");
  in.bind(c_classify);
  c_classify->add_option("--out", out, "output directory")->required();

  auto* c_truth = app.add_subcommand("truth", "print the truth value of one tuple");
  in.bind(c_truth);
  c_truth->add_option("--tuple", literal, "tuple literal, e.g. Id=i1,K=k")->required();

  auto* c_merge = app.add_subcommand("merge", "merge sources and report truth values");
  c_merge->add_option("--schema", schema, "schema file")->required()->check(CLI::ExistingFile);
  c_merge->add_option("--table", tables, "source table (repeatable)")->required()->check(CLI::ExistingFile);
  c_merge->add_option("--fds", fds, "source FD file, one per table")->required()->check(CLI::ExistingFile);
  c_merge->add_option("--out", out, "output directory")->required();

  auto* c_query = app.add_subcommand("query", "answer SELECT X [WHERE cond]");
  in.bind(c_query);
  c_query->add_option("--query", text, "query text")->required();
  c_query->add_option("--mode", mode, "plain|consistent|lower|upper")
      ->check(CLI::IsMember({"plain", "consistent", "lower", "upper"}));
  c_query->add_flag("--annotate", annotate_rows, "append each answer's truth value in the table");

  auto* c_repairs = app.add_subcommand("repairs", "write every repair as CSV and print their number");
  in.bind(c_repairs);
  c_repairs->add_option("--out", out, "output directory")->required();
  c_repairs->add_option("--cap", cap, "largest allowed choice product");

  auto* c_check = app.add_subcommand("check", "run the randomized property suite");
  c_check->add_option("--seed", seed, "first instance seed");
  c_check->add_option("--instances", instances, "number of instances");
  c_check->add_option("--discrepancies", discrepancies, "file for the repair discrepancy report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (c_chase->parsed()) return run_chase(in, out);
    if (c_classify->parsed()) return run_classify(in, out);
    if (c_truth->parsed()) return run_truth(in, literal);
    if (c_merge->parsed()) return run_merge(schema, tables, fds, out);
    if (c_query->parsed()) return run_query(in, text, mode, annotate_rows);
    if (c_repairs->parsed()) return run_repairs(in, out, cap);
    if (c_check->parsed()) return run_check(seed, instances, discrepancies);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemantic;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
