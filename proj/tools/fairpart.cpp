// fairpart: audit, solve and generate fair balanced partitions of friendship graphs.
//
// Exit codes: 0 found/pass, 1 none/fail, 2 usage or input error, 3 resource cap hit,
// 4 internal error (a solver output failed its re-audit).

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairpart/forge.hpp"
#include "fairpart/solve.hpp"

using namespace fairpart;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kCapped = 3, kInternal = 4 };

struct Common {
  std::string notions = "all";
  std::string method = "auto";
  int k = 0;
  std::string sizes;
  int limit = 0;
  std::uint64_t seed = 1;
  std::string output;
};

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput(std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw InvalidInput(std::string("empty ") + what);
  return out;
}

std::vector<FairnessNotion> parse_notions(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::toupper(c); });
  if (text == "ALL") return {kAllNotions.begin(), kAllNotions.end()};
  std::vector<FairnessNotion> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto notion = parse_notion(item);
    if (!notion) throw InvalidInput("unknown notion '" + item + "'");
    out.push_back(*notion);
  }
  if (out.empty()) throw InvalidInput("no notion given");
  return out;
}

FairnessNotion single_notion(const std::string& text) {
  auto notions = parse_notions(text);
  if (notions.size() != 1) throw InvalidInput("exactly one --notion is required");
  return notions.front();
}

int limit_of(const Common& c) { return c.limit > 0 ? c.limit : oracle_limit(); }

Instance load(const std::string& path, const Common& c) {
  Instance inst = load_instance(path);
  if (!c.sizes.empty()) {
    SizeVector sv(parse_int_list(c.sizes, "size"));
    if (c.k > 0 && sv.k() != c.k) throw InvalidInput("--k disagrees with --sizes");
    inst = with_sizes(inst, sv);
  } else if (c.k > 0) {
    if (c.k > inst.n()) throw InvalidInput("more parts than agents");
    inst = with_sizes(inst, SizeVector::balanced(inst.n(), c.k));
  }
  return inst;
}

/// Writes to the -o file if given, otherwise stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

int cmd_check(const std::string& instance_path, const std::string& partition_path, const Common& c) {
  const Instance inst = load(instance_path, c);
  const Partition p = load_partition(partition_path, inst.n());
  if (auto err = validate_partition(p, inst.n(), inst.sizes)) {
    std::cerr << "partition invalid: " << *err << "\n";
    return kNegative;
  }
  const auto notions = parse_notions(c.notions);
  std::ostringstream report;
  bool all_pass = true;
  for (FairnessNotion notion : notions) {
    const bool mms = notion == FairnessNotion::MMS;
    if (mms && !inst.utilities.is_binary()) {
      std::cerr << "warning: exact MMS shares take time exponential in agent degree\n";
    }
    auto r = check_partition(inst, p, notion, audit_shares(inst, inst.sizes, mms, limit_of(c)));
    write_report(report, r);
    std::cerr << to_string(notion) << (r.passed() ? " pass" : " fail") << "\n";
    all_pass = all_pass && r.passed();
  }
  emit(c.output, report.str());
  return all_pass ? kOk : kNegative;
}

int cmd_solve(const std::string& instance_path, const Common& c, std::optional<Method> forced = std::nullopt) {
  const Instance inst = load(instance_path, c);
  const FairnessNotion notion = single_notion(c.notions);
  auto method = forced ? forced : parse_method(c.method);
  if (!method) throw InvalidInput("unknown method '" + c.method + "'");
  SolveOptions options;
  options.limit = limit_of(c);
  const SolveOutcome out = solve(inst, notion, *method, options);
  std::cerr << "source " << out.source;
  if (!out.work_label.empty()) std::cerr << ' ' << out.work_label << ' ' << out.work;
  std::cerr << "\n";
  emit(c.output, out.partition ? serialize_partition(*out.partition) : "none\n");
  return out.partition ? kOk : kNegative;
}

int cmd_oracle(const std::string& instance_path, const Common& c) {
  const Instance inst = load(instance_path, c);
  const auto notions = parse_notions(c.notions);
  if (notions.size() == 1) return cmd_solve(instance_path, c, Method::Oracle);
  bool all_found = true;
  for (FairnessNotion notion : notions) {
    auto r = exists_fair(inst, notion, inst.sizes, limit_of(c));
    std::cout << to_string(notion) << (r.partition ? " found" : " none") << " enumerated " << r.enumerated << "\n";
    all_found = all_found && r.partition.has_value();
  }
  return all_found ? kOk : kNegative;
}

struct Arrow {
  FairnessNotion from, to;
  bool k2_only;
};

constexpr Arrow kArrows[] = {
    {FairnessNotion::EF, FairnessNotion::EFX0, false},  {FairnessNotion::EFX0, FairnessNotion::EFX, false},
    {FairnessNotion::EFX, FairnessNotion::EF1, false},  {FairnessNotion::PROP, FairnessNotion::MMS, false},
    {FairnessNotion::PROP, FairnessNotion::EF, true},   {FairnessNotion::MMS, FairnessNotion::EF1, true},
};

int cmd_taxonomy(const std::string& instance_path, const Common& c) {
  const Instance inst = load(instance_path, c);
  const int limit = limit_of(c);
  const auto rows = taxonomy_scan(inst, inst.sizes, limit);
  const ShareTable shares = compute_shares(inst, inst.sizes, true, limit);
  std::ostringstream out;
  for (const auto& row : rows) out << to_string(row.notion) << (row.witness ? " found" : " none") << "\n";
  bool violated = false;
  for (const Arrow& arrow : kArrows) {
    if (arrow.k2_only && inst.k != 2) continue;
    const auto& witness = rows[static_cast<std::size_t>(arrow.from)].witness;
    out << "arrow " << to_string(arrow.from) << "->" << to_string(arrow.to) << ' ';
    if (!witness) {
      out << "vacuous\n";
    } else if (is_fair(inst, *witness, arrow.to, shares)) {
      out << "exercised\n";
    } else {
      out << "violated\n";
      violated = true;
    }
  }
  emit(c.output, out.str());
  return violated ? kNegative : kOk;
}

struct ForgeParams {
  std::string family = "tree";
  std::string set;
  std::string variant = "efx";
  std::string expect_path;
  std::string partition_path;
  int n = 10;
  int bins = 2;
  int capacity = 4;
  int weight_max = 1;
  bool prop = false;
};

int cmd_forge(const std::string& kind, const ForgeParams& fp, const Common& c) {
  auto weights = [&] {
    auto ints = parse_int_list(fp.set, "set");
    return std::vector<Weight>(ints.begin(), ints.end());
  };
  Forged f;
  if (kind == "mms-nonexistence") {
    f = gen_mms_nonexistence(c.k > 0 ? c.k : 2);
  } else if (kind == "prop-not-ef") {
    f = gen_prop_not_ef(c.k > 0 ? c.k : 3);
  } else if (kind == "ef-not-prop") {
    f = gen_ef_not_prop(c.k > 0 ? c.k : 2);
  } else if (kind == "mms-not-prop") {
    f = gen_mms_not_prop(c.k > 0 ? c.k : 2);
  } else if (kind == "equitable-star") {
    f = gen_equitable_star(weights());
  } else if (kind == "binpacking-path") {
    f = gen_binpacking_path(parse_int_list(fp.set, "set"), fp.bins, fp.capacity, fp.prop);
  } else if (kind == "binpacking-tree") {
    f = gen_binpacking_tree(parse_int_list(fp.set, "set"), fp.bins, fp.capacity);
  } else if (kind == "bipartite-vc2") {
    BipartiteVariant v;
    if (fp.variant == "efx") {
      v = BipartiteVariant::Efx;
    } else if (fp.variant == "ef1") {
      v = BipartiteVariant::Ef1;
    } else if (fp.variant == "mms") {
      v = BipartiteVariant::Mms;
    } else {
      throw InvalidInput("unknown variant '" + fp.variant + "'");
    }
    f = gen_bipartite_vc2(weights(), v);
  } else if (kind == "random") {
    auto family = parse_family(fp.family);
    if (!family) throw InvalidInput("unknown family '" + fp.family + "'");
    f.instance = gen_random(fp.n, c.k > 0 ? c.k : 2, *family, fp.weight_max, c.seed);
  } else {
    throw InvalidInput("unknown forge kind '" + kind + "'");
  }
  emit(c.output, serialize_instance(f.instance));
  if (!fp.expect_path.empty()) {
    std::ostringstream side;
    write_sidecar(side, f);
    emit(fp.expect_path, side.str());
  }
  if (!fp.partition_path.empty()) {
    if (!f.partition) throw InvalidInput(kind + " has no bundled partition");
    emit(fp.partition_path, serialize_partition(*f.partition));
  }
  return kOk;
}

struct BenchRow {
  std::string file;
  std::string method;
  std::string answer;
  double millis = 0;
  std::string work_label;
  long long work = 0;
};

BenchRow bench_one(const fs::path& path, FairnessNotion notion, Method method, const SolveOptions& options) {
  BenchRow row;
  row.file = path.filename().string();
  const auto start = std::chrono::steady_clock::now();
  try {
    const Instance inst = load_instance(path.string());
    const SolveOutcome out = solve(inst, notion, method, options);
    row.method = std::string(to_string(out.method));
    row.answer = out.partition ? "found" : "none";
    row.work_label = out.work_label;
    row.work = out.work;
  } catch (const ResourceLimit&) {
    row.answer = "capped";
  } catch (const NotApplicable&) {
    row.answer = "not-applicable";
  } catch (const std::exception& e) {
    row.answer = std::string("error: ") + e.what();
  }
  row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

int cmd_bench(const std::string& corpus, int jobs, const Common& c) {
  if (!fs::is_directory(corpus)) throw InvalidInput("not a directory: " + corpus);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus)) {
    if (entry.is_regular_file() && entry.path().extension() == ".fp") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  const FairnessNotion notion = single_notion(c.notions == "all" ? "EF1" : c.notions);
  auto method = parse_method(c.method);
  if (!method) throw InvalidInput("unknown method '" + c.method + "'");
  SolveOptions options;
  options.limit = limit_of(c);

  std::vector<BenchRow> rows(files.size());
  std::size_t next = 0;
  while (next < files.size()) {
    std::vector<std::future<BenchRow>> batch;
    const std::size_t end = std::min(files.size(), next + static_cast<std::size_t>(std::max(1, jobs)));
    for (std::size_t i = next; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, bench_one, files[i], notion, *method, options));
    }
    for (std::size_t i = next; i < end; ++i) rows[i] = batch[i - next].get();
    next = end;
  }

  nlohmann::json table = nlohmann::json::array();
  std::cout << std::left << std::setw(32) << "instance" << std::setw(8) << "method" << std::setw(16) << "answer"
            << std::right << std::setw(12) << "ms" << "  work\n";
  for (const auto& r : rows) {
    std::cout << std::left << std::setw(32) << r.file << std::setw(8) << (r.method.empty() ? "-" : r.method)
              << std::setw(16) << r.answer << std::right << std::setw(12) << std::fixed << std::setprecision(3)
              << r.millis << "  ";
    if (r.work_label.empty()) {
      std::cout << "-\n";
    } else {
      std::cout << r.work << ' ' << r.work_label << "\n";
    }
    table.push_back({{"instance", r.file},
                     {"notion", to_string(notion)},
                     {"method", r.method},
                     {"answer", r.answer},
                     {"wall_ms", r.millis},
                     {"work_label", r.work_label},
                     {"work", r.work}});
  }
  if (!c.output.empty()) emit(c.output, table.dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair balanced partitioning of friendship graphs"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub, bool notion, bool method) {
    if (notion) sub->add_option("--notion", c.notions, "EF, EFX0, EFX, EF1, PROP, MMS, a comma list, or all");
    if (method) sub->add_option("--method", c.method, "auto, special, forest, twdp, vc or oracle");
    sub->add_option("--k", c.k, "Part count (balanced sizes)");
    sub->add_option("--sizes", c.sizes, "Comma-separated part sizes");
    sub->add_option("--limit", c.limit, "Agent cap for exhaustive enumeration");
    sub->add_option("-o,--output", c.output, "Output file");
  };

  std::string instance_path, partition_path, corpus, kind;
  int jobs = 1;
  ForgeParams fp;

  auto* check = app.add_subcommand("check", "Audit a partition");
  check->add_option("instance", instance_path)->required();
  check->add_option("partition", partition_path)->required();
  add_common(check, true, false);

  auto* solve_cmd = app.add_subcommand("solve", "Find a fair partition");
  solve_cmd->add_option("instance", instance_path)->required();
  add_common(solve_cmd, true, true);

  auto* oracle = app.add_subcommand("oracle", "Exhaustive existence check");
  oracle->add_option("instance", instance_path)->required();
  add_common(oracle, true, false);

  auto* taxonomy = app.add_subcommand("taxonomy", "Existence matrix over all six notions");
  taxonomy->add_option("instance", instance_path)->required();
  add_common(taxonomy, false, false);

  auto* forge = app.add_subcommand("forge", "Generate a counterexample, gadget or random instance");
  forge->add_option("kind", kind,
                    "mms-nonexistence, prop-not-ef, ef-not-prop, mms-not-prop, equitable-star, binpacking-path, "
                    "binpacking-tree, bipartite-vc2, random")
      ->required();
  add_common(forge, false, false);
  forge->add_option("--seed", c.seed, "Random seed");
  forge->add_option("--set", fp.set, "Comma-separated multiset");
  forge->add_option("--bins", fp.bins, "Bin count B");
  forge->add_option("--capacity", fp.capacity, "Bin capacity c");
  forge->add_flag("--prop", fp.prop, "PROP weight scheme for binpacking-path");
  forge->add_option("--variant", fp.variant, "efx, ef1 or mms");
  forge->add_option("--family", fp.family, "tree, forest, path, bipartite, cover or general");
  forge->add_option("--n", fp.n, "Agent count");
  forge->add_option("--weight-max", fp.weight_max, "Largest edge weight");
  forge->add_option("--expect", fp.expect_path, "Write the expected-profile sidecar here");
  forge->add_option("--partition", fp.partition_path, "Write the bundled partition here");

  auto* bench = app.add_subcommand("bench", "Solve every .fp instance in a directory");
  bench->add_option("corpus", corpus)->required();
  add_common(bench, true, true);
  bench->add_option("--jobs", jobs, "Instances solved concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(instance_path, partition_path, c);
    if (*solve_cmd) return cmd_solve(instance_path, c);
    if (*oracle) return cmd_oracle(instance_path, c);
    if (*taxonomy) return cmd_taxonomy(instance_path, c);
    if (*forge) return cmd_forge(kind, fp, c);
    if (*bench) return cmd_bench(corpus, jobs, c);
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kCapped;
  } catch (const NotApplicable& e) {
    std::cerr << "not applicable: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
