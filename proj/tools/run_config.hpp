#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace orthoscherk::cli {

enum ExitCode { kOk = 0, kValidation = 2, kSolver = 3, kVerification = 4 };

struct RunConfig {
  std::string command;  // solve | generate | verify | sweep
  int genus = -1;
  std::optional<double> phi;  // genus 0 only
  double height_tol = 1e-8;
  double period_tol = 1e-6;
  int resolution = 32;
  int extent = 2;                // lattice copies per direction in `generate`
  std::string out = "orthoscherk_out";  // output directory
  std::string checkpoint;        // input of generate / verify / sweep
  std::string seed_checkpoint;   // solve: genus g or g-1 start point
  std::string stratum = "all";   // sweep: one stratum name or "all"
  int points = 5;                // sweep: reported points per path
};

// Flat key=value lines; '#' starts a comment, blank lines are skipped. Keys
// use the flag spelling without dashes (height-tol or height_tol). Unknown
// keys and malformed values throw ValidationError.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Throws ValidationError.
void validate(const RunConfig& cfg);

// Result-affecting settings as sorted key=value lines. Paths are left out;
// the checkpoint enters through the digest of its contents.
std::string canonical_text(const RunConfig& cfg);
// SHA-256 (hex) of canonical_text plus the checkpoint digest.
std::string config_hash(const RunConfig& cfg);
std::string sha256_hex(const std::string& data);

// Runs one command, writing artifacts below cfg.out and progress lines to
// log. Returns an ExitCode; never throws.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace orthoscherk::cli
