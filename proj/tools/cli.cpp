#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>

#include "toscadata/catalog.hpp"
#include "toscadata/csar.hpp"
#include "toscadata/parser.hpp"
#include "toscadata/planner.hpp"
#include "toscadata/simulator.hpp"
#include "toscadata/verifier.hpp"

namespace toscadata::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string path;
  bool fix = false;
  std::string out;
  std::string report = "text";
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  bool undeploy = false;
  std::string inject;
  std::int64_t until = 100;
  std::string metrics;
  std::string dir;
  std::string archive;
  std::string entry;
};

void write_file(const fs::path& path, const std::string& data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << data;
}

void print_error(std::ostream& err, const Error& e) { err << "error: " << e.what() << "\n"; }

void print_warnings(std::ostream& err, const std::vector<ParseWarning>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w.location << ": " << w.message << "\n";
}

std::optional<ServiceTemplate> load(const Options& o, std::ostream& err) {
  try {
    std::vector<ParseWarning> warnings;
    ServiceTemplate t = load_template(o.path, &warnings);
    print_warnings(err, warnings);
    return t;
  } catch (const Error& e) {
    print_error(err, e);
    return std::nullopt;
  }
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  auto t = load(o, err);
  if (!t) return kExitUsage;
  VerifyResult result;
  try {
    result = verify(*t, {o.fix, o.seed});
  } catch (const Error& e) {
    print_error(err, e);
    return kExitDiagnostics;
  }
  out << (o.report == "json" ? report_json(result) : report_text(result));
  if (!o.out.empty()) {
    try {
      write_file(o.out, serialize_template(result.verified));
    } catch (const Error& e) {
      print_error(err, e);
      return kExitUsage;
    }
  }
  return result.has_problems() ? kExitDiagnostics : kExitClean;
}

/// Shared gate for plan and simulate: the template must verify cleanly.
bool verified_cleanly(const ServiceTemplate& t, const Options& o, std::ostream& err) {
  VerifyResult result = verify(t, {false, o.seed});
  if (!result.has_problems()) return true;
  err << "template does not verify cleanly:\n" << report_text(result);
  return false;
}

int cmd_plan(const Options& o, std::ostream& out, std::ostream& err) {
  auto t = load(o, err);
  if (!t) return kExitUsage;
  if (!verified_cleanly(*t, o, err)) return kExitDiagnostics;
  try {
    DeploymentPlan p = o.undeploy ? undeploy_plan(*t) : plan(*t);
    out << (o.format == "json" ? plan_json(p) : plan_text(p));
  } catch (const Error& e) {
    print_error(err, e);
    return kExitDiagnostics;
  }
  return kExitClean;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  auto t = load(o, err);
  if (!t) return kExitUsage;
  std::vector<Injection> schedule;
  if (!o.inject.empty()) {
    try {
      schedule = parse_schedule(read_text_file(o.inject), fs::path(o.inject).parent_path());
    } catch (const Error& e) {
      print_error(err, e);
      return kExitUsage;
    }
  }
  if (!verified_cleanly(*t, o, err)) return kExitDiagnostics;
  try {
    Flow flow = Flow::instantiate(*t);
    flow.schedule(schedule);
    Metrics m = flow.run_until(o.until);
    std::string json = metrics_json(m);
    if (o.metrics.empty())
      out << json;
    else
      write_file(o.metrics, json);
    for (const auto& e : flow.errors())
      err << "stage error: " << e.block << " at tick " << e.tick << ": " << e.message << "\n";
    return m.total_errors() == 0 ? kExitClean : kExitDiagnostics;
  } catch (const Error& e) {
    print_error(err, e);
    return kExitDiagnostics;
  }
}

int cmd_pack(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    Bytes data = pack_directory(o.dir, o.entry);
    write_file(o.archive, std::string(data.begin(), data.end()));
    out << "packed " << o.dir << " into " << o.archive << "\n";
    return kExitClean;
  } catch (const Error& e) {
    print_error(err, e);
    return kExitUsage;
  }
}

int cmd_unpack(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    std::string raw = read_text_file(o.archive);
    CsarArchive a = unpack_csar(Bytes(raw.begin(), raw.end()));
    unpack_to_directory(a, o.dir);
    out << "unpacked " << a.files.size() << " file(s); entry " << a.entry_definitions << "\n";
    return kExitClean;
  } catch (const Error& e) {
    print_error(err, e);
    return kExitUsage;
  }
}

int cmd_catalog(const Options& o, std::ostream& out, std::ostream& err) {
  std::string yaml = serialize_definitions(builtin_catalog().all());
  if (o.dir.empty()) {
    out << yaml;
    return kExitClean;
  }
  try {
    write_file(fs::path(o.dir) / "toscadata-catalog.yaml", yaml);
  } catch (const Error& e) {
    print_error(err, e);
    return kExitUsage;
  }
  return kExitClean;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verify, plan and simulate TOSCAdata blueprints", "toscadata"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;

  auto* verify_cmd = app.add_subcommand("verify", "Check a template against the verifier rules");
  verify_cmd->add_option("path", o.path, "Template file or CSAR")->required();
  verify_cmd->add_flag("--fix", o.fix, "Apply fixable repairs");
  verify_cmd->add_option("--out", o.out, "Write the (verified) template here");
  verify_cmd->add_option("--report", o.report, "Report format")
      ->check(CLI::IsMember({"json", "text"}));
  auto* verify_seed = verify_cmd->add_option("--seed", seed, "Passphrase generator seed");

  auto* plan_cmd = app.add_subcommand("plan", "Print the deployment plan");
  plan_cmd->add_option("path", o.path, "Template file or CSAR")->required();
  plan_cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));
  plan_cmd->add_flag("--undeploy", o.undeploy, "Print the stop/delete plan instead");
  auto* plan_seed = plan_cmd->add_option("--seed", seed, "Generator seed");

  auto* sim_cmd = app.add_subcommand("simulate", "Run the topology on the virtual clock");
  sim_cmd->add_option("path", o.path, "Template file or CSAR")->required();
  sim_cmd->add_option("--inject", o.inject, "Injection schedule file");
  sim_cmd->add_option("--until", o.until, "Last tick to run")->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--metrics", o.metrics, "Write metrics JSON here");
  auto* sim_seed = sim_cmd->add_option("--seed", seed, "Generator seed");

  auto* csar_cmd = app.add_subcommand("csar", "Pack or unpack a CSAR archive");
  csar_cmd->require_subcommand(1);
  auto* pack_cmd = csar_cmd->add_subcommand("pack", "Pack a directory");
  pack_cmd->add_option("dir", o.dir, "Source directory")->required();
  pack_cmd->add_option("archive", o.archive, "Output archive")->required();
  pack_cmd->add_option("--entry", o.entry, "Entry definitions path inside the archive");
  auto* unpack_cmd = csar_cmd->add_subcommand("unpack", "Unpack an archive");
  unpack_cmd->add_option("archive", o.archive, "Input archive")->required();
  unpack_cmd->add_option("dir", o.dir, "Destination directory")->required();

  auto* catalog_cmd = app.add_subcommand("catalog", "Export the built-in type catalog");
  catalog_cmd->add_option("--out", o.dir, "Directory to write the definitions into");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitClean : kExitUsage;
  }
  for (auto* opt : {verify_seed, plan_seed, sim_seed})
    if (opt->count()) o.seed = seed;

  if (verify_cmd->parsed()) return cmd_verify(o, out, err);
  if (plan_cmd->parsed()) return cmd_plan(o, out, err);
  if (sim_cmd->parsed()) return cmd_simulate(o, out, err);
  if (pack_cmd->parsed()) return cmd_pack(o, out, err);
  if (unpack_cmd->parsed()) return cmd_unpack(o, out, err);
  if (catalog_cmd->parsed()) return cmd_catalog(o, out, err);
  return kExitUsage;
}

}  // namespace toscadata::cli
