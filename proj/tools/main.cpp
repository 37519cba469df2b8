// Command-line driver: pi0 / degree / separate / suite over the built-in
// catalog and JSON file formats.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gentle/invariants.hpp"
#include "gentle/io.hpp"
#include "gentle/suites.hpp"

namespace {

using namespace gentle;
using cli::json;
using cli::Report;

struct CommonArgs {
  uint64_t seed = 0;
  std::string out;
  Caps caps;
  std::string caps_spec;
};

void apply_caps_spec(Caps& caps, const std::string& spec) {
  if (spec.empty()) return;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t comma = spec.find(',', pos);
    std::string item = spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw input_error("--caps expects key=value pairs");
    std::string key = item.substr(0, eq);
    long long value = std::stoll(item.substr(eq + 1));
    if (key == "dim")
      caps.dim_cap = static_cast<int>(value);
    else if (key == "simplices")
      caps.max_simplices = static_cast<std::size_t>(value);
    else if (key == "maps")
      caps.max_maps = static_cast<std::size_t>(value);
    else if (key == "group")
      caps.group_cap = static_cast<std::size_t>(value);
    else
      throw input_error("unknown cap '" + key + "'");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
}

int finish(const Report& report, const CommonArgs& args) {
  if (!args.out.empty()) {
    std::ofstream f(args.out);
    if (!f) throw input_error("cannot write report to '" + args.out + "'");
    f << report.to_json().dump(2) << "\n";
  }
  std::cout << report.to_text();
  return report.all_pass() ? cli::exit_ok : cli::exit_check_failure;
}

std::size_t module_cap_for(const Caps& caps) { return cli::catalog_module_cap(caps); }

int cmd_pi0(const std::string& source, const std::string& target, const CommonArgs& args) {
  auto src = cli::resolve_ref(source, module_cap_for(args.caps), args.caps);
  if (src.is_module()) throw input_error("pi0 source must be a crew");
  auto dst = cli::resolve_ref(target, module_cap_for(args.caps), args.caps);
  simp::Pi0 classes = simp::pi0(src.crew, dst.target(), args.caps);

  Report report;
  report.command = "pi0 --source " + source + " --target " + target;
  report.seed = args.seed;
  report.caps = args.caps;
  json d;
  d["vertices"] = classes.slice.vertices.size();
  d["classes"] = classes.class_count();
  // module targets are fibrant, so the homotopy relation is already an
  // equivalence; for plain crew targets the edge-closure may be coarser
  d["relation"] = dst.is_module() ? "homotopy" : "edge-quotient";
  json reps = json::array();
  for (uint32_t c = 0; c < classes.class_count(); ++c) reps.push_back(classes.class_name(c));
  d["representatives"] = reps;
  if (classes.has_module_structure) {
    d["zero_class"] = classes.class_name(classes.zero_class);
    json add = json::array();
    for (auto& row : classes.class_add) add.push_back(row);
    d["class_addition"] = add;
    d["cross_check"] = classes.cross_check_ok;
  }
  bool pass = !classes.has_module_structure || classes.cross_check_ok;
  report.checks.push_back(cli::CheckResult{"pi0", pass, d, 0});
  return finish(report, args);
}

int cmd_degree(const std::string& source, const std::string& target, const std::string& invariant_file,
               const CommonArgs& args) {
  auto src = cli::resolve_ref(source, module_cap_for(args.caps), args.caps);
  if (src.is_module()) throw input_error("degree source must be a crew");
  auto dst = cli::resolve_ref(target, module_cap_for(args.caps), args.caps);
  inv::SliceAnalysis analysis(src.crew, dst.target(), args.caps);

  std::ifstream f(invariant_file);
  if (!f) throw input_error("cannot open invariant file '" + invariant_file + "'");
  json j = json::parse(f, nullptr, true, true);
  inv::InvariantTable table;
  table.context = &analysis.classes();
  table.values = cli::invariant_from_json(j, analysis.classes());

  auto deg = analysis.simplicial_degree(table, args.caps.r_max);
  Report report;
  report.command = "degree --source " + source + " --target " + target;
  report.seed = args.seed;
  report.caps = args.caps;
  json d;
  if (deg.degree) {
    d["simplicial_degree"] = *deg.degree;
    d["functional_digest"] = deg.functional_digest;
    d["functional_verified"] = deg.functional_verified;
  } else {
    d["simplicial_degree"] = "exceeds r_max";
  }
  report.checks.push_back(cli::CheckResult{"degree", deg.degree.has_value(), d, 0});
  return finish(report, args);
}

int cmd_separate(const std::string& source, const std::string& target, const std::string& class1,
                 const std::string& class2, const std::string& table_out, const CommonArgs& args) {
  auto src = cli::resolve_ref(source, module_cap_for(args.caps), args.caps);
  if (src.is_module()) throw input_error("separate source must be a crew");
  auto dst = cli::resolve_ref(target, module_cap_for(args.caps), args.caps);
  inv::SliceAnalysis analysis(src.crew, dst.target(), args.caps);
  const simp::Pi0& classes = analysis.classes();

  auto find_class = [&](const std::string& name) -> uint32_t {
    for (uint32_t c = 0; c < classes.class_count(); ++c)
      if (classes.class_name(c) == name) return c;
    throw input_error("unknown class representative '" + name + "'");
  };
  uint32_t c1 = find_class(class1), c2 = find_class(class2);
  if (c1 == c2) throw input_error("classes are equal");

  auto sep = analysis.separate(c1, c2, args.caps.r_max);
  Report report;
  report.command = "separate --source " + source + " --target " + target;
  report.seed = args.seed;
  report.caps = args.caps;
  json d;
  if (sep) {
    d["r"] = sep->r;
    d["table"] = cli::invariant_to_json(classes, sep->table.values);
    if (!table_out.empty()) {
      std::ofstream f(table_out);
      if (!f) throw input_error("cannot write table to '" + table_out + "'");
      f << cli::invariant_to_json(classes, sep->table.values).dump(2) << "\n";
    }
  } else {
    d["result"] = "inseparable at r_max";
  }
  report.checks.push_back(cli::CheckResult{"separate", sep.has_value(), d, 0});
  return finish(report, args);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-degree homotopy invariants at desk scale"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string source, target, invariant_file, class1, class2, suite_name;
  std::string table_out = "separating_invariant.json";
  cli::SuiteOptions sopt;
  std::string window_spec;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", args.seed, "random seed (echoed in the report)");
    cmd->add_option("--out", args.out, "write the machine-readable report to this file");
    cmd->add_option("--r-max", args.caps.r_max, "largest power exponent to try");
    cmd->add_option("--dim-cap", args.caps.dim_cap, "dimension cap override for power computations");
    cmd->add_option("--caps", args.caps_spec, "comma list of key=value caps (dim, simplices, maps, group)");
  };

  CLI::App* pi0_cmd = app.add_subcommand("pi0", "classes of the function complex");
  pi0_cmd->add_option("--source", source)->required();
  pi0_cmd->add_option("--target", target)->required();
  add_common(pi0_cmd);

  CLI::App* degree_cmd = app.add_subcommand("degree", "simplicial degree of an invariant table");
  degree_cmd->add_option("--source", source)->required();
  degree_cmd->add_option("--target", target)->required();
  degree_cmd->add_option("--invariant", invariant_file)->required();
  add_common(degree_cmd);

  CLI::App* sep_cmd = app.add_subcommand("separate", "least degree separating two classes");
  sep_cmd->add_option("--source", source)->required();
  sep_cmd->add_option("--target", target)->required();
  sep_cmd->add_option("--class1", class1)->required();
  sep_cmd->add_option("--class2", class2)->required();
  sep_cmd->add_option("--table-out", table_out);
  add_common(sep_cmd);

  CLI::App* suite_cmd = app.add_subcommand("suite", "run a verification suite");
  suite_cmd->add_option("name", suite_name, "lemma-3 | lemma-4 | lemma-7 | lemma-12 | theorem-1-2 | all")
      ->required();
  suite_cmd->add_option("--trials", sopt.trials, "seeded trial count for the key suite");
  suite_cmd->add_option("--membership-trials", sopt.membership_trials);
  suite_cmd->add_option("--window", window_spec, "lo:hi window for the polynomial test");
  add_common(suite_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : gentle::cli::exit_input_error;
  }

  try {
    apply_caps_spec(args.caps, args.caps_spec);
    if (pi0_cmd->parsed()) return cmd_pi0(source, target, args);
    if (degree_cmd->parsed()) return cmd_degree(source, target, invariant_file, args);
    if (sep_cmd->parsed()) return cmd_separate(source, target, class1, class2, table_out, args);
    if (suite_cmd->parsed()) {
      if (!cli::is_suite_name(suite_name)) throw input_error("unknown suite '" + suite_name + "'");
      if (!window_spec.empty()) {
        auto colon = window_spec.find(':');
        if (colon == std::string::npos) throw input_error("--window expects lo:hi");
        sopt.window_lo = std::stoll(window_spec.substr(0, colon));
        sopt.window_hi = std::stoll(window_spec.substr(colon + 1));
      }
      sopt.seed = args.seed;
      sopt.caps = args.caps;
      Report report = cli::run_suite(suite_name, sopt);
      return finish(report, args);
    }
  } catch (const cap_error& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return cli::exit_cap_exceeded;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return cli::exit_input_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_input_error;
  }
  return cli::exit_input_error;
}
