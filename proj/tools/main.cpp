#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "chebdes/commands.hpp"
#include "chebdes/config.hpp"
#include "chebdes/errors.hpp"
#include "json.hpp"

namespace {

int fail_config(const std::string& msg) {
  nlohmann::json err{{"error", {{"type", "config"}, {"message", msg}}}};
  std::cout << err.dump(2) << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally optimal experimental designs on Chebyshev points: "
               "solving, verification, efficiency tables and asymptotic checks"};
  app.require_subcommand(1);

  struct {
    std::string config_path, out_path, format;
    bool round = false;
  } opts;

  const std::pair<const char*, const char*> commands[] = {
      {"solve", "compute and verify one optimal design"},
      {"table1", "extremal-design support/weight table over a z-list"},
      {"table2", "coordinate-efficiency table over a z-list"},
      {"sweep", "efficiency or eigenvalue-ratio curve over one parameter"},
      {"asympt", "small-separation expansion and design-convergence checks"},
      {"check", "verify an externally supplied design file"}};
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", opts.config_path, "job description (JSON file)")
        ->required();
    sub->add_option("--out", opts.out_path,
                    "write the result to this file instead of standard output");
    sub->add_option("--format", opts.format, "json or csv (overrides the config)");
    sub->add_flag("--round", opts.round, "2-decimal table presentation (CSV tables)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    return fail_config(std::string("command line: ") + e.what());
  }

  CLI::App* sub = app.get_subcommands().front();

  std::ifstream in(opts.config_path);
  if (!in) return fail_config("cannot read config \"" + opts.config_path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();

  chebdes::JobConfig job;
  try {
    job = chebdes::parse_job(buf.str(), sub->get_name());
  } catch (const chebdes::parameter_error& e) {
    return fail_config(e.what());
  }

  if (sub->count("--format") > 0) {
    if (opts.format == "json")
      job.output.format = chebdes::OutputFormat::Json;
    else if (opts.format == "csv")
      job.output.format = chebdes::OutputFormat::Csv;
    else
      return fail_config("--format must be \"json\" or \"csv\"");
  }
  if (sub->count("--out") > 0) job.output.path = opts.out_path;
  if (opts.round) job.output.round = true;

  const chebdes::CommandResult result = chebdes::run_job(job);
  if (result.exit_code != 0 || job.output.path.empty()) {
    std::cout << result.output;
    return result.exit_code;
  }
  std::ofstream out(job.output.path);
  if (!out) return fail_config("cannot write \"" + job.output.path + "\"");
  out << result.output;
  return result.exit_code;
}
