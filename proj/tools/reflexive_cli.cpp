// Command-line front end: validate, audit, solve, scan, oracle.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "reflexive/error.hpp"
#include "reflexive/families.hpp"
#include "reflexive/flat_surfaces.hpp"
#include "reflexive/io.hpp"

namespace {

using namespace reflexive;

constexpr const char* kVersion = "0.1.0";

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

std::vector<std::string> g_argv;

struct Manifest {
  Manifest(std::string cmd, std::vector<std::string> in) : command(std::move(cmd)), inputs(std::move(in)) {}

  std::string command;
  std::vector<std::string> inputs;
  Json options = Json::object();
  std::optional<std::uint64_t> seed;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Json json() const {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return Json{{"command", command},
                {"argv", g_argv},
                {"inputs", inputs},
                {"options", options},
                {"seed", seed ? Json(*seed) : Json(nullptr)},
                {"tool_version", kVersion},
                {"wall_time_s", wall}};
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write '" + path + "'");
  out << text;
}

// Primary output goes to `out` (or stdout); the manifest sits beside it so the
// primary file stays byte-identical across runs.
void emit(const std::string& out, const std::string& text, const Manifest& m, const std::string& manifest_path) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_file(out, text);
  std::string mp = manifest_path;
  if (mp.empty() && !out.empty() && out != "-") mp = out + ".manifest.json";
  if (!mp.empty()) write_file(mp, dump_json(m.json()));
}

Exec exec_of(bool serial) { return serial ? Exec::serial : Exec::parallel; }

struct Common {
  std::string manifest;
  bool serial = false;
};

int cmd_validate(const std::string& path, const Common& c) {
  Manifest m("validate", {path});
  const ConfigurationDatum d = parse_datum(read_json_file(path));
  const ValidationReport r = validate_datum(d);
  emit("", dump_json(to_json(r)), m, c.manifest);
  return r.ok() ? kPass : kFail;
}

struct AuditArgs {
  std::string field;
  std::string hypothesis = "all";
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  std::string out;
  double blow_threshold = 5.0;
  double depth = 1e-2;
  int steps = 20;
  double rank_tol = 1e-6;
  double margin = 1e-6;
  std::vector<std::string> points;
};

int cmd_audit(const AuditArgs& a, const Common& c) {
  Manifest m("audit", {a.field});
  m.seed = a.seed;
  m.options = Json{{"hypothesis", a.hypothesis}, {"samples", a.samples},        {"blow_threshold", a.blow_threshold},
                   {"depth", a.depth},           {"steps", a.steps},            {"rank_tol", a.rank_tol},
                   {"margin", a.margin},         {"points", a.points},          {"serial", c.serial}};
  const FamilySetup setup = parse_field_spec(read_json_file(a.field));
  const HeightField& f = setup.field;

  std::vector<Eigen::VectorXd> samples = quasi_random_samples(f, setup.box, a.samples, a.seed);
  for (const auto& p : a.points) {
    const Eigen::VectorXd u = parse_vector(p);
    if (static_cast<std::size_t>(u.size()) != f.dim() || !f.in_domain(u))
      throw Error("out_of_domain", "user sample '" + p + "' is outside the field domain");
    samples.push_back(u);
  }

  const bool all = a.hypothesis == "all";
  std::vector<AuditReport> reports;
  if (all || a.hypothesis == "h1") {
    RegularityOptions o;
    o.rank_tol = a.rank_tol;
    o.exec = exec_of(c.serial);
    reports.push_back(audit_regularity(f, samples, o));
    reports.back().seed = a.seed;
  }
  if (all || a.hypothesis == "h2") {
    DegenerationOptions o;
    o.blow_threshold = a.blow_threshold;
    o.depth = a.depth;
    o.steps = a.steps;
    reports.push_back(audit_degeneration(f, setup.rays, o));
  }
  if (all || a.hypothesis == "h3") {
    PushabilityOptions o;
    o.margin = a.margin;
    o.exec = exec_of(c.serial);
    reports.push_back(audit_pushability(f, setup.push, samples, o));
    reports.back().seed = a.seed;
  }

  bool any_fail = false, any_inconclusive = false;
  Json arr = Json::array();
  for (const auto& r : reports) {
    any_fail = any_fail || r.verdict == Verdict::fail;
    any_inconclusive = any_inconclusive || r.verdict == Verdict::inconclusive;
    arr.push_back(to_json(r));
  }
  const int code = any_fail ? kFail : any_inconclusive ? kInconclusive : kPass;
  Json doc{{"family", setup.family}, {"reports", arr}};
  emit(a.out, dump_json(doc), m, c.manifest);
  for (const auto& r : reports)
    std::cerr << to_string(r.hypothesis) << ": " << to_string(r.verdict) << (r.message.empty() ? "" : " (") << r.message
              << (r.message.empty() ? "" : ")") << '\n';
  return code;
}

struct SolveArgs {
  std::string field;
  std::string start;
  double eps = 1e-12;
  std::string out;
  std::string mode = "push";
  std::string trace;
  int max_iters = 10000;
  std::optional<double> cert_tol;
};

int cmd_solve(const SolveArgs& a, const Common& c) {
  Manifest m("solve", {a.field});
  const FamilySetup setup = parse_field_spec(read_json_file(a.field));
  const HeightField& f = setup.field;
  const Eigen::VectorXd u0 = a.start.empty() ? setup.reference : parse_vector(a.start);
  if (static_cast<std::size_t>(u0.size()) != f.dim())
    throw Error("malformed", "start point needs " + std::to_string(f.dim()) + " coordinates");

  SolveOptions o;
  o.eps_reflexive = a.eps;
  o.max_iters = a.max_iters;
  o.mode = a.mode == "gradient" ? SolveMode::gradient_descent : SolveMode::push_descent;
  const double tol = a.cert_tol.value_or(std::sqrt(a.eps));
  m.options = Json{{"start", vector_json(u0)}, {"eps", a.eps},   {"mode", to_string(o.mode)},
                   {"max_iters", a.max_iters}, {"cert_tol", tol}, {"trace", a.trace}};

  const SolveResult r = solve(f, setup.push, u0, o);
  const ReflexiveCertificate cert = certify_reflexive(f, r.u_star, tol);
  Json doc{{"family", setup.family}, {"params", f.domain().names}, {"result", to_json(r)}, {"certificate", to_json(cert)}};
  emit(a.out, dump_json(doc), m, c.manifest);
  if (!a.trace.empty()) {
    std::ostringstream os;
    write_trace_csv(os, r, f.domain().names);
    write_file(a.trace, os.str());
  }
  std::cerr << "status " << to_string(r.status) << ", H* = " << format_double(r.h_star) << ", "
            << (cert.certified ? "certified" : "not certified") << '\n';
  return cert.certified ? kPass : kFail;
}

struct ScanArgs {
  std::string field;
  std::string box;
  std::string res = "101";
  std::string out;
};

int cmd_scan(const ScanArgs& a, const Common& c) {
  Manifest m("scan", {a.field});
  const FamilySetup setup = parse_field_spec(read_json_file(a.field));
  const HeightField& f = setup.field;
  const Box box = a.box.empty() ? setup.box : parse_box(a.box);
  if (static_cast<std::size_t>(box.lo.size()) != f.dim()) throw Error("malformed", "box needs one range per parameter");

  const Eigen::VectorXd r = parse_vector(a.res);
  std::vector<int> res;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (!(r(i) >= 1.0) || r(i) != std::floor(r(i))) throw Error("malformed", "resolution must be positive integers");
    res.push_back(static_cast<int>(r(i)));
  }
  if (res.size() == 1) res.assign(f.dim(), res[0]);
  if (res.size() != f.dim()) throw Error("malformed", "resolution needs one count per parameter");
  m.options = Json{{"box_lo", vector_json(box.lo)}, {"box_hi", vector_json(box.hi)}, {"res", res}, {"serial", c.serial}};

  const ScanTable t = grid_scan(f, box, res, exec_of(c.serial));
  std::ostringstream os;
  write_scan_csv(os, t);
  emit(a.out, os.str(), m, c.manifest);
  const std::string sidecar = dump_json(argmin_json(t));
  if (a.out.empty() || a.out == "-")
    std::cerr << sidecar;
  else
    write_file(a.out + ".argmin.json", sidecar);
  return kPass;
}

int cmd_oracle(double w, double h, int n, const Common& c) {
  Manifest m("oracle", {});
  m.options = Json{{"w", w}, {"h", h}, {"n", n}};
  const EuclideanCylinder cyl(w, h);
  const double est = discrete_extremal_length_oracle(cyl, n);
  const double exact = cylinder_extremal_length(cyl);
  Json doc{{"w", w}, {"h", h}, {"n", n}, {"estimate", est}, {"exact", exact}, {"rel_error", std::abs(est - exact) / exact}};
  emit("", dump_json(doc), m, c.manifest);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  g_argv.assign(argv, argv + argc);
  CLI::App app{"Reflexive points of extremal-length height fields"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--manifest", common.manifest, "Write the run manifest here (default: <out>.manifest.json)");
  app.add_flag("--serial", common.serial, "Disable OpenMP parallel evaluation");

  std::string datum_path;
  auto* validate = app.add_subcommand("validate", "Validate a configuration datum file");
  validate->add_option("config", datum_path, "Datum JSON")->required();

  AuditArgs aa;
  auto* audit = app.add_subcommand("audit", "Audit hypotheses H1-H3 on a field spec");
  audit->add_option("field", aa.field, "Field spec JSON")->required();
  audit->add_option("--hypothesis", aa.hypothesis, "h1|h2|h3|all")
      ->check(CLI::IsMember({"h1", "h2", "h3", "all"}))
      ->capture_default_str();
  audit->add_option("--samples", aa.samples, "Quasi-random sample count")->capture_default_str();
  audit->add_option("--seed", aa.seed, "Sampling seed")->capture_default_str();
  audit->add_option("--point", aa.points, "Extra sample point, comma separated (repeatable)");
  audit->add_option("--out", aa.out, "Report JSON path (default stdout)");
  audit->add_option("--blow-threshold", aa.blow_threshold, "H2 blow-up threshold")->capture_default_str();
  audit->add_option("--depth", aa.depth, "Smallest ray parameter sampled by H2")->capture_default_str();
  audit->add_option("--steps", aa.steps, "Samples per ray")->capture_default_str();
  audit->add_option("--rank-tol", aa.rank_tol, "Relative singular value cut for H1")->capture_default_str();
  audit->add_option("--margin", aa.margin, "H3 mismatch margin")->capture_default_str();

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Search for a reflexive point by descent");
  solve_cmd->add_option("field", sa.field, "Field spec JSON")->required();
  solve_cmd->add_option("--start", sa.start, "Start point, comma separated (default: family reference)");
  solve_cmd->add_option("--eps", sa.eps, "Stop once H falls below this")->capture_default_str();
  solve_cmd->add_option("--max-iters", sa.max_iters, "Iteration cap")->capture_default_str();
  solve_cmd->add_option("--mode", sa.mode, "push|gradient")->check(CLI::IsMember({"push", "gradient"}))->capture_default_str();
  solve_cmd->add_option("--cert-tol", sa.cert_tol, "Certificate tolerance on |m| (default sqrt(eps))");
  solve_cmd->add_option("--out", sa.out, "Result JSON path (default stdout)");
  solve_cmd->add_option("--trace", sa.trace, "Trace CSV path");

  ScanArgs sc;
  auto* scan = app.add_subcommand("scan", "Evaluate m and H on a grid");
  scan->add_option("field", sc.field, "Field spec JSON")->required();
  scan->add_option("--box", sc.box, "lo:hi per parameter, comma separated (default: spec box)");
  scan->add_option("--res", sc.res, "Points per axis, one value or one per parameter")->capture_default_str();
  scan->add_option("--out", sc.out, "CSV path (default stdout); argmin goes to <out>.argmin.json");

  double w = 1.0, h = 1.0;
  int n = 32;
  auto* oracle = app.add_subcommand("oracle", "Discrete extremal length of a flat cylinder");
  oracle->set_help_flag("--help", "Print this help message and exit");
  oracle->add_option("--w", w, "Circumference")->required();
  oracle->add_option("--h", h, "Height")->required();
  oracle->add_option("--n", n, "Cells across the shorter side")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(datum_path, common);
    if (*audit) return cmd_audit(aa, common);
    if (*solve_cmd) return cmd_solve(sa, common);
    if (*scan) return cmd_scan(sc, common);
    if (*oracle) return cmd_oracle(w, h, n, common);
  } catch (const reflexive::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
