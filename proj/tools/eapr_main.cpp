// Command line front end for the instance space analysis pipeline.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eapr/eapr.hpp"

namespace {

struct CommonOptions {
  std::string config_file;
  std::string input;
  std::string output;
  std::string seed;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config_file, "key=value configuration file");
  cmd->add_option("-i,--input", o.input, "instance table CSV");
  cmd->add_option("-o,--output", o.output, "output directory");
  cmd->add_option("--seed", o.seed, "global seed (overrides EAPR_SEED and the config file)");
  cmd->add_option("--set", o.overrides, "override a config key, e.g. --set ga.population=20");
}

// Precedence: config file < EAPR_SEED < command line flags.
eapr::PipelineConfig build_config(const CommonOptions& o) {
  eapr::PipelineConfig cfg;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw eapr::Error(eapr::ErrorCode::kIoFailure, "cannot read config '" + o.config_file + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    eapr::apply_config(cfg, eapr::parse_config_text(buf.str()));
  }
  eapr::ConfigMap flags;
  if (const char* env = std::getenv("EAPR_SEED"); env && *env) flags["seed"] = env;
  eapr::apply_config(cfg, flags);
  flags.clear();
  for (const auto& kv : o.overrides) {
    const auto parsed = eapr::parse_config_text(kv);
    flags.insert(parsed.begin(), parsed.end());
  }
  if (!o.input.empty()) flags["input"] = o.input;
  if (!o.output.empty()) flags["output"] = o.output;
  if (!o.seed.empty()) flags["seed"] = o.seed;
  eapr::apply_config(cfg, flags);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instance space analysis of algorithm portfolios"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string stage_to_run;
  for (const auto& stage : eapr::stage_names()) {
    auto* cmd = app.add_subcommand(stage, "run the " + stage + " stage");
    add_common(cmd, common);
    cmd->callback([&stage_to_run, stage] { stage_to_run = stage; });
  }
  auto* pipeline = app.add_subcommand("pipeline", "run every stage in order");
  add_common(pipeline, common);

  std::string model_dir;
  auto* select = app.add_subcommand("select", "rank algorithms for a feature vector read from stdin");
  select->add_option("models", model_dir, "directory written by the classify stage")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (select->parsed()) {
      std::ostringstream buf;
      buf << std::cin.rdbuf();
      const auto bundle = eapr::load_selector(model_dir);
      eapr::print_ranking(std::cout, eapr::rank_for_input(bundle, buf.str()));
      return 0;
    }
    const auto cfg = build_config(common);
    if (pipeline->parsed()) eapr::run_pipeline(cfg);
    else eapr::run_stage(stage_to_run, cfg);
    return 0;
  } catch (const eapr::Error& e) {
    std::cerr << eapr::error_tag(e.code()) << " " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "E_IO " << e.what() << '\n';
  }
  return 1;
}
