#include "run_config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "orthoscherk/errors.hpp"
#include "orthoscherk/extlen.hpp"
#include "orthoscherk/height_solver.hpp"
#include "orthoscherk/json_io.hpp"
#include "orthoscherk/mesh.hpp"
#include "orthoscherk/weierstrass.hpp"

namespace orthoscherk::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    throw ValidationError("config: '" + key + "' expects a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ValidationError("config: '" + key + "' expects an integer, got '" + v + "'");
  return x;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
}

std::string fmt17(double x) {
  std::ostringstream ss;
  ss << std::setprecision(17) << x;
  return ss.str();
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string v = trim(raw_value);
  if (key == "command") cfg.command = v;
  else if (key == "genus") cfg.genus = to_int(key, v);
  else if (key == "phi") cfg.phi = to_double(key, v);
  else if (key == "height_tol") cfg.height_tol = to_double(key, v);
  else if (key == "period_tol") cfg.period_tol = to_double(key, v);
  else if (key == "resolution") cfg.resolution = to_int(key, v);
  else if (key == "extent") cfg.extent = to_int(key, v);
  else if (key == "out") cfg.out = v;
  else if (key == "checkpoint") cfg.checkpoint = v;
  else if (key == "seed_checkpoint") cfg.seed_checkpoint = v;
  else if (key == "stratum") cfg.stratum = v;
  else if (key == "points") cfg.points = to_int(key, v);
  else throw ValidationError("config: unknown key '" + raw_key + "'");
}

RunConfig parse_config_text(const std::string& text, RunConfig cfg) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(n) + ": expected key=value");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

void validate(const RunConfig& c) {
  static const char* commands[] = {"solve", "generate", "verify", "sweep"};
  if (std::find(std::begin(commands), std::end(commands), c.command) == std::end(commands))
    throw ValidationError("command must be one of solve, generate, verify, sweep");
  if (c.genus < 0) throw ValidationError("genus must be given and non-negative");
  if (c.genus == 0 && !c.phi) throw ValidationError("genus 0 requires phi");
  if (c.genus > 0 && c.phi) throw ValidationError("phi applies to genus 0 only");
  if (c.phi && !(*c.phi > 0.0 && *c.phi < std::numbers::pi)) throw ValidationError("phi must lie in (0, pi)");
  if (!(c.height_tol > 0.0) || !(c.period_tol > 0.0)) throw ValidationError("tolerances must be positive");
  if (c.resolution < 2) throw ValidationError("resolution must be at least 2");
  if (c.extent < 1) throw ValidationError("extent must be at least 1");
  if (c.points < 2) throw ValidationError("points must be at least 2");
  if (c.command == "verify" && c.genus > 0 && c.checkpoint.empty())
    throw ValidationError("verify needs --checkpoint for genus >= 1");
  if (c.command == "sweep" && c.genus == 0) throw ValidationError("sweep needs genus >= 1");
  if (c.command == "sweep" && c.stratum != "all") {
    const auto s = boundary_strata(c.genus);
    if (std::find(s.begin(), s.end(), c.stratum) == s.end())
      throw ValidationError("unknown stratum '" + c.stratum + "'");
  }
}

std::string canonical_text(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  kv["command"] = c.command;
  kv["genus"] = std::to_string(c.genus);
  kv["phi"] = c.phi ? fmt17(*c.phi) : "none";
  kv["height_tol"] = fmt17(c.height_tol);
  kv["period_tol"] = fmt17(c.period_tol);
  kv["resolution"] = std::to_string(c.resolution);
  kv["extent"] = std::to_string(c.extent);
  kv["stratum"] = c.stratum;
  kv["points"] = std::to_string(c.points);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return ss.str();
}

std::string config_hash(const RunConfig& c) {
  std::string text = canonical_text(c);
  if (!c.checkpoint.empty()) text += "checkpoint_sha256=" + sha256_hex(read_file(c.checkpoint)) + "\n";
  if (!c.seed_checkpoint.empty())
    text += "seed_checkpoint_sha256=" + sha256_hex(read_file(c.seed_checkpoint)) + "\n";
  return sha256_hex(text);
}

namespace {

struct Context {
  const RunConfig& cfg;
  std::ostream& log;
  std::string hash;
  fs::path dir;

  Json stamp(Json j) const {
    Json out;
    out["config_hash"] = hash;
    out["command"] = cfg.command;
    out["genus"] = cfg.genus;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value();
    return out;
  }
  fs::path write_json(const std::string& name, const Json& j) const {
    const fs::path p = dir / name;
    write_file(p, dump_json(stamp(j)) + "\n");
    log << "wrote " << p.string() << "\n";
    return p;
  }
};

GeometricCoords load_or_solve(const Context& ctx) {
  if (!ctx.cfg.checkpoint.empty()) {
    auto cp = coords_from_json(read_file(ctx.cfg.checkpoint));
    if (cp.coords.genus != ctx.cfg.genus) throw ValidationError("checkpoint genus does not match --genus");
    return cp.coords;
  }
  SolveOptions o;
  o.height_tol = ctx.cfg.height_tol;
  return solve_genus(ctx.cfg.genus, std::nullopt, o).coords;
}

Json graph_json(const GraphCheck& g, const Vec3& dir) {
  Json j;
  j["injective"] = g.injective;
  j["direction"] = {dir[0], dir[1], dir[2]};
  j["flipped_triangles"] = g.flipped_triangles;
  j["boundary_crossings"] = g.boundary_crossings;
  j["min_separation"] = g.min_separation;
  j["note"] = "numerical evidence of embeddedness, not a proof";
  return j;
}

WeierstrassData data_for(const Context& ctx, GeometricCoords* coords_out, double reflexive_tol) {
  if (ctx.cfg.genus == 0) return genus0_data(*ctx.cfg.phi);
  const GeometricCoords c = load_or_solve(ctx);
  if (coords_out) *coords_out = c;
  return recover_data(fit_pair(c), reflexive_tol);
}

int cmd_solve(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  if (c.genus == 0) {
    const Genus0Check g = genus0_periods(*c.phi);
    Json j;
    j["phi"] = *c.phi;
    j["residues"] = {g.residue[0], g.residue[1], g.residue[2], g.residue[3]};
    j["expected_residue"] = 1.0 / (4.0 * std::sin(*c.phi));
    Json p = Json::array();
    for (const auto& v : g.period) p.push_back({v[0], v[1], v[2]});
    j["end_periods"] = p;
    j["max_vertical"] = g.max_vertical;
    j["lattice_angle"] = g.angle;
    j["lattice_length_ratio"] = g.length_ratio;
    ctx.write_json("genus0_report.json", j);
    return kOk;
  }
  std::optional<GeometricCoords> seed;
  if (!c.seed_checkpoint.empty()) seed = coords_from_json(read_file(c.seed_checkpoint)).coords;
  SolveOptions o;
  o.height_tol = c.height_tol;
  const SolveResult r = solve_genus(c.genus, seed, o);
  Json cp = checkpoint_json(r.coords, r.report, r.trace);
  if (c.genus == 1) cp["r_star"] = solve_genus1();
  ctx.write_json("checkpoint.json", cp);
  Json rep = report_to_json(r.report);
  rep["outer_iterations"] = r.outer_iterations;
  ctx.write_json("height_report.json", rep);
  ctx.log << "total height " << fmt17(r.report.total) << "\n";
  return kOk;
}

int cmd_generate(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  GeometricCoords coords;
  const WeierstrassData data = data_for(ctx, &coords, 1e-7);
  PatchReport prep;
  const SurfaceMesh patch = integrate_patch(data, c.resolution, {}, &prep);
  AssemblyReport arep;
  const SurfaceMesh surface = assemble(patch, c.extent, c.extent, &arep);
  const SurfaceMesh conj = integrate_patch(associate_family(data, std::numbers::pi / 2), c.resolution);
  const Vec3 dir = straight_line_bisector(conj);
  const GraphCheck gc = graph_check(conj, dir);

  const std::string comment = "orthoscherk genus " + std::to_string(c.genus) + " config_hash " + ctx.hash;
  {
    std::ofstream obj(ctx.dir / "surface.obj");
    write_obj(surface, obj, comment);
    std::ofstream ply(ctx.dir / "surface.ply", std::ios::binary);
    write_ply(surface, ply, comment);
    std::ofstream pobj(ctx.dir / "patch.obj");
    write_obj(patch, pobj, comment);
    if (!obj || !ply || !pobj) throw ValidationError("cannot write mesh files below '" + c.out + "'");
  }
  ctx.log << "wrote " << (ctx.dir / "surface.obj").string() << ", surface.ply, patch.obj\n";

  Json j;
  j["resolution"] = c.resolution;
  j["extent"] = c.extent;
  j["patch_vertices"] = patch.vertices.size();
  j["patch_triangles"] = patch.triangles.size();
  j["surface_triangles"] = surface.triangles.size();
  j["max_loop_residual"] = prep.max_loop_residual;
  j["diameter"] = prep.diameter;
  j["max_seam_gap"] = arep.max_seam_gap;
  j["lattice_angle"] = arep.lattice_angle;
  j["lattice_length_ratio"] = arep.lattice_length_ratio;
  j["mean_curvature_residual"] = mean_curvature_residual(patch);
  j["relative_mean_curvature"] = relative_mean_curvature(patch);
  j["conjugate_graph_check"] = graph_json(gc, dir);
  if (c.genus > 0) j["periods"] = periods_to_json(verify_periods(data, handle_cycles(data)));
  ctx.write_json("verification.json", j);
  return prep.max_loop_residual <= 1e-8 ? kOk : kVerification;
}

int cmd_verify(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  Json j;
  Json failures = Json::array();
  auto gate = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  WeierstrassData data;
  if (c.genus == 0) {
    const Genus0Check g = genus0_periods(*c.phi);
    j["max_vertical"] = g.max_vertical;
    j["lattice_angle"] = g.angle;
    j["lattice_length_ratio"] = g.length_ratio;
    gate(g.max_vertical <= c.period_tol, "vertical end periods");
    data = genus0_data(*c.phi);
  } else {
    const auto cp = coords_from_json(read_file(c.checkpoint));
    if (cp.coords.genus != c.genus) throw ValidationError("checkpoint genus does not match --genus");
    const FittedPair fitted = fit_pair(cp.coords);
    const HeightReport rep = height_report(fitted);
    j["height_report"] = report_to_json(rep);
    gate(rep.total <= c.height_tol, "total height");
    auto close = [](const std::vector<double>& a, const std::vector<double>& b) {
      if (a.empty()) return true;
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-6) return false;
      return true;
    };
    gate(close(cp.prevertices_gdh, rep.prevertices_gdh) && close(cp.prevertices_ginvdh, rep.prevertices_ginvdh),
         "stored prevertices");
    data = recover_data(fitted, std::numeric_limits<double>::infinity());
    const auto periods = verify_periods(data, handle_cycles(data));
    j["periods"] = periods_to_json(periods);
    double worst = 0.0;
    for (const auto& p : periods) worst = std::max({worst, p.horizontal, p.vertical});
    j["max_period_residual"] = worst;
    gate(worst <= c.period_tol, "handle-cycle periods");
    const MonodromyReport m = monodromy_test(c.genus, cp.coords);
    j["monodromy"] = {{"max_defect", m.max_defect}, {"pairs_tested", m.pairs_tested},
                      {"pairs_skipped", m.pairs_skipped}};
    gate(m.max_defect <= 1e-6, "monodromy identity");
  }
  try {
    PatchReport prep;
    const SurfaceMesh patch = integrate_patch(data, c.resolution, {}, &prep);
    j["max_loop_residual"] = prep.max_loop_residual;
    j["mean_curvature_residual"] = mean_curvature_residual(patch);
    j["relative_mean_curvature"] = relative_mean_curvature(patch);
    gate(prep.max_loop_residual <= 1e-8, "patch loop closure");
    const SurfaceMesh conj = integrate_patch(associate_family(data, std::numbers::pi / 2), c.resolution);
    const Vec3 dir = straight_line_bisector(conj);
    const GraphCheck gc = graph_check(conj, dir);
    j["conjugate_graph_check"] = graph_json(gc, dir);
    gate(gc.injective, "conjugate graph check");
  } catch (const NotSupportedError& e) {
    j["mesh_checks"] = std::string("skipped: ") + e.what();
  } catch (const PeriodClosureError& e) {
    gate(false, std::string("patch integration: ") + e.what());
  } catch (const GeometryError& e) {
    gate(false, std::string("conjugate patch: ") + e.what());
  }
  j["failures"] = failures;
  j["passed"] = failures.empty();
  ctx.write_json("verification.json", j);
  for (const auto& f : failures) ctx.log << "FAILED: " << f.get<std::string>() << "\n";
  return failures.empty() ? kOk : kVerification;
}

int cmd_sweep(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const GeometricCoords base = load_or_solve(ctx);
  std::vector<std::string> strata =
      c.stratum == "all" ? boundary_strata(c.genus) : std::vector<std::string>{c.stratum};
  std::ostringstream csv;
  csv << "# config_hash=" << ctx.hash << "\n";
  csv << "stratum,parameter";
  for (const auto& f : height_families(c.genus, Domain::Gdh)) csv << ",term_" << f.name;
  csv << ",total,seconds\n";
  csv << std::setprecision(17);
  for (const auto& s : strata) {
    const ProbePath path = properness_path(base, s, c.points);
    for (const auto& p : path.points) {
      csv << s << ',' << p.parameter;
      for (const auto& t : p.report.terms) csv << ',' << t.term;
      csv << ',' << p.report.total << ',' << p.seconds << "\n";
    }
    ctx.log << s << ": " << path.points.size() << " points, "
            << (path.strictly_increasing ? "strictly increasing" : "not strictly increasing")
            << (path.error.empty() ? "" : " (stopped: " + path.error + ")") << "\n";
  }
  write_file(ctx.dir / "sweep.csv", csv.str());
  ctx.log << "wrote " << (ctx.dir / "sweep.csv").string() << "\n";
  return kOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    validate(cfg);
    Context ctx{cfg, log, config_hash(cfg), fs::path(cfg.out)};
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + cfg.out + "'");
    log << "config_hash " << ctx.hash << "\n";
    if (cfg.command == "solve") return cmd_solve(ctx);
    if (cfg.command == "generate") return cmd_generate(ctx);
    if (cfg.command == "verify") return cmd_verify(ctx);
    return cmd_sweep(ctx);
  } catch (const SolverError& e) {
    log << "solver did not converge: " << e.what() << "\n";
    return kSolver;
  } catch (const FitError& e) {
    log << "solver did not converge: " << e.what() << "\n";
    return kSolver;
  } catch (const DivergenceError& e) {
    log << "solver did not converge: " << e.what() << "\n";
    return kSolver;
  } catch (const std::invalid_argument& e) {  // ValidationError and subclasses
    log << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const std::domain_error& e) {
    log << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const NotSupportedError& e) {
    log << "not supported: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    log << "verification failed: " << e.what() << "\n";
    return kVerification;
  }
}

}  // namespace orthoscherk::cli
