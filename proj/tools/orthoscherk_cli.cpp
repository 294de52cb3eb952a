#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "orthoscherk/errors.hpp"
#include "run_config.hpp"

using orthoscherk::cli::RunConfig;

namespace {

// Flags given on the command line, as key=value overrides applied after the
// config file.
struct Flags {
  std::string config;
  std::vector<std::pair<std::string, CLI::Option*>> opts;
  std::string genus, phi, resolution, height_tol, period_tol, extent, out, checkpoint, seed_checkpoint, stratum,
      points;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "key=value configuration file");
  f.opts.emplace_back("genus", sub->add_option("--genus", f.genus, "genus g >= 0"));
  f.opts.emplace_back("phi", sub->add_option("--phi", f.phi, "genus 0: angle between the end periods"));
  f.opts.emplace_back("resolution", sub->add_option("--resolution", f.resolution, "patch grid resolution"));
  f.opts.emplace_back("height_tol", sub->add_option("--height-tol", f.height_tol, "total height tolerance"));
  f.opts.emplace_back("period_tol", sub->add_option("--period-tol", f.period_tol, "period residual tolerance"));
  f.opts.emplace_back("extent", sub->add_option("--extent", f.extent, "lattice copies per direction"));
  f.opts.emplace_back("out", sub->add_option("--out", f.out, "output directory"));
  f.opts.emplace_back("checkpoint", sub->add_option("--checkpoint", f.checkpoint, "coordinates checkpoint"));
  f.opts.emplace_back("seed_checkpoint",
                      sub->add_option("--seed-checkpoint", f.seed_checkpoint, "solve: seed of genus g or g-1"));
  f.opts.emplace_back("stratum", sub->add_option("--stratum", f.stratum, "sweep: stratum name or 'all'"));
  f.opts.emplace_back("points", sub->add_option("--points", f.points, "sweep: points per path"));
}

std::string value_of(const Flags& f, const std::string& key) {
  if (key == "genus") return f.genus;
  if (key == "phi") return f.phi;
  if (key == "resolution") return f.resolution;
  if (key == "height_tol") return f.height_tol;
  if (key == "period_tol") return f.period_tol;
  if (key == "extent") return f.extent;
  if (key == "out") return f.out;
  if (key == "checkpoint") return f.checkpoint;
  if (key == "seed_checkpoint") return f.seed_checkpoint;
  if (key == "stratum") return f.stratum;
  return f.points;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthodisk solver and mesh generator for Scherk-type minimal surfaces"};
  app.require_subcommand(1);
  Flags flags;
  const char* names[][2] = {{"solve", "solve the period problem and write a checkpoint"},
                            {"generate", "integrate, assemble and write OBJ/PLY meshes"},
                            {"verify", "re-run the period, monodromy and mesh checks"},
                            {"sweep", "tabulate the height along paths to the boundary strata"}};
  for (auto& n : names) add_common(app.add_subcommand(n[0], n[1]), flags);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : orthoscherk::cli::kValidation;
  }

  RunConfig cfg;
  try {
    if (!flags.config.empty()) {
      std::ifstream in(flags.config);
      if (!in) throw orthoscherk::ValidationError("cannot read config '" + flags.config + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      cfg = orthoscherk::cli::parse_config_text(ss.str());
    }
    cfg.command = app.get_subcommands().front()->get_name();
    for (const auto& [key, opt] : flags.opts)
      if (opt->count() > 0) orthoscherk::cli::apply_setting(cfg, key, value_of(flags, key));
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return orthoscherk::cli::kValidation;
  }
  return orthoscherk::cli::run(cfg, std::cerr);
}
