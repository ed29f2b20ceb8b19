#include "reflexive/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "reflexive/error.hpp"

namespace reflexive {
namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error("malformed", what); }

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing key '") + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    malformed("bad value for '" + what + "'");
  }
}

double get_number(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  malformed("expected a number for '" + what + "'");
}

Eigen::VectorXd get_vector(const Json& j, const std::string& what, std::size_t expected) {
  if (!j.is_array() || j.size() != expected)
    malformed("'" + what + "' must be an array of " + std::to_string(expected) + " numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) v(static_cast<Eigen::Index>(i)) = get_number(j[i], what);
  return v;
}

std::size_t edge_of(const ConfigurationDatum& d, const std::string& name, const char* what) {
  for (std::size_t i = 0; i < d.edges.size(); ++i)
    if (d.edges[i] == name) return i;
  malformed(std::string(what) + " refers to unknown edge '" + name + "'");
}

PushWeighting parse_weighting(const std::string& s) {
  if (s == "mismatch") return PushWeighting::mismatch;
  if (s == "none") return PushWeighting::none;
  malformed("push weighting must be 'mismatch' or 'none'");
}

void apply_push(FamilySetup& setup, const Json& p) {
  const HeightField& f = setup.field;
  const std::string preset = p.value("preset", std::string("coordinate_scaling"));
  const PushWeighting weighting = parse_weighting(p.value("weighting", std::string("mismatch")));
  const double sign = p.contains("sign") ? get_number(p.at("sign"), "push.sign") : 1.0;
  PushFieldSpec push;
  if (preset == "coordinate_scaling") {
    if (f.curve_count() > f.dim()) malformed("coordinate_scaling needs one parameter per curve");
    push = coordinate_scaling_push(f, weighting, sign);
  } else if (preset != "custom") {
    malformed("unknown push preset '" + preset + "'");
  }
  push.weighting = weighting;

  if (p.contains("fields")) {
    // Each entry is {"curve": name, "coordinate": i, "scale": s}: V = s * u_i d/du_i.
    const Json& fields = p.at("fields");
    if (!fields.is_array()) malformed("push.fields must be an array");
    if (push.fields.size() != f.curve_count()) {
      push.fields.assign(f.curve_count(), nullptr);
      push.incidence.resize(f.curve_count());
      for (std::size_t g = 0; g < f.curve_count(); ++g) push.incidence[g] = {g};
    }
    for (const Json& e : fields) {
      const std::size_t g = f.curves().index(get_as<std::string>(need(e, "curve"), "push.fields.curve"));
      const auto i = get_as<std::size_t>(need(e, "coordinate"), "push.fields.coordinate");
      if (i >= f.dim()) malformed("push field coordinate out of range");
      const double scale = e.contains("scale") ? get_number(e.at("scale"), "push.fields.scale") : 1.0;
      const auto idx = static_cast<Eigen::Index>(i);
      push.fields[g] = [idx, scale](const Eigen::VectorXd& u) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(u.size());
        v(idx) = scale * u(idx);
        return v;
      };
    }
    push.description = "custom coordinate scaling";
  }
  if (p.contains("incidence")) {
    const Json& inc = p.at("incidence");
    if (!inc.is_object()) malformed("push.incidence must map curve -> [curves]");
    for (const auto& [curve, set] : inc.items()) {
      const std::size_t g = f.curves().index(curve);
      std::vector<std::size_t> ids;
      for (const Json& c : set) ids.push_back(f.curves().index(get_as<std::string>(c, "push.incidence")));
      push.incidence.at(g) = std::move(ids);
    }
  }
  for (const auto& field : push.fields)
    if (!field) malformed("push spec leaves a curve without a field");
  try {
    push.check(f);
  } catch (const Error& e) {
    malformed(e.what());
  }
  setup.push = std::move(push);
}

FamilySetup table_family(const Json& j) {
  const auto names = get_as<std::vector<std::string>>(need(j, "params"), "params");
  const std::size_t k = names.size();
  const auto axes = get_as<std::vector<std::vector<double>>>(need(j, "axes"), "axes");
  if (axes.size() != k) malformed("table needs one axis per parameter");
  for (const auto& a : axes)
    if (a.size() < 2) malformed("table axes need at least two nodes");
  const auto curves = get_as<std::vector<std::string>>(need(j, "curves"), "curves");
  const auto values_I = get_as<std::vector<std::vector<double>>>(need(j, "values_I"), "values_I");
  const auto values_II = get_as<std::vector<std::vector<double>>>(need(j, "values_II"), "values_II");
  if (values_I.size() != curves.size() || values_II.size() != curves.size())
    malformed("table needs one value array per curve and side");

  Eigen::VectorXd lo(static_cast<Eigen::Index>(k)), hi(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    lo(static_cast<Eigen::Index>(i)) = axes[i].front();
    hi(static_cast<Eigen::Index>(i)) = axes[i].back();
  }
  if (j.contains("lower")) lo = get_vector(j.at("lower"), "lower", k);
  if (j.contains("upper")) hi = get_vector(j.at("upper"), "upper", k);

  HeightField f(ParamDomain::box(names, lo, hi), AdmissibleCurveSet::with_identity_pairing(curves),
                make_table_assignment(Side::I, axes, values_I), make_table_assignment(Side::II, axes, values_II));
  Box box{lo, hi};
  Eigen::VectorXd ref = (lo + hi) / 2.0;
  PushFieldSpec push;
  if (f.curve_count() <= f.dim()) push = coordinate_scaling_push(f);
  std::vector<Ray> rays = default_rays(f, ref);
  return FamilySetup{"table", std::move(f), std::move(push), std::move(box), std::move(ref), std::move(rays)};
}

void write_number(std::string& out, double x) { out += format_double(x); }

void write_string(std::string& out, const std::string& s) { out += Json(s).dump(); }

void emit(std::string& out, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_string(out, key);
        out += ": ";
        emit(out, value, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalars = true;
      for (const auto& v : j) scalars = scalars && !v.is_structured();
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(out, j[i], depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(out, j[i], depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x))
        write_number(out, x);
      else
        out += "null";
      return;
    }
    default:
      out += j.dump();
  }
}

Json quantities_json(const Quantities& q) {
  Json o = Json::object();
  for (const auto& [k, v] : q) o[k] = v;
  return o;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    malformed("'" + path + "' is not valid JSON (" + e.what() + ")");
  }
}

ConfigurationDatum parse_datum(const Json& j) {
  if (!j.is_object()) malformed("datum must be a JSON object");
  ConfigurationDatum d;
  d.genus = get_as<int>(need(j, "genus"), "genus");
  d.punctures = get_as<int>(need(j, "punctures"), "punctures");
  if (d.genus < 0 || d.punctures < 0) malformed("genus and punctures must be nonnegative");
  d.edges = get_as<std::vector<std::string>>(need(j, "edges"), "edges");

  const Json& iota = need(j, "iota");
  const Json& tau = need(j, "tau");
  const Json& sigma = need(j, "sigma");
  if (!iota.is_object() || !tau.is_object() || !sigma.is_object())
    malformed("iota, tau and sigma must be objects keyed by edge");
  for (const auto& e : d.edges) {
    if (!iota.contains(e) || !tau.contains(e) || !sigma.contains(e))
      malformed("edge '" + e + "' lacks an iota, tau or sigma entry");
    d.iota.push_back(get_as<std::vector<long long>>(iota.at(e), "iota." + e));
    const auto t = get_as<std::string>(tau.at(e), "tau." + e);
    if (t == "h")
      d.tau.push_back(EdgeType::horizontal);
    else if (t == "v")
      d.tau.push_back(EdgeType::vertical);
    else
      malformed("tau." + e + " must be \"h\" or \"v\"");
  }
  for (const auto& e : d.edges) d.sigma.push_back(edge_of(d, get_as<std::string>(sigma.at(e), "sigma." + e), "sigma"));
  d.relations = get_as<std::vector<std::vector<long long>>>(need(j, "relations"), "relations");
  if (j.contains("extra_linear_constraints"))
    d.extra_linear_constraints =
        get_as<std::vector<std::vector<double>>>(j.at("extra_linear_constraints"), "extra_linear_constraints");
  if (j.contains("e0") && !j.at("e0").is_null())
    d.e0 = edge_of(d, get_as<std::string>(j.at("e0"), "e0"), "e0");
  return d;
}

FamilySetup parse_field_spec(const Json& j) {
  if (!j.is_object()) malformed("field spec must be a JSON object");
  const auto family = get_as<std::string>(need(j, "family"), "family");
  FamilySetup setup = [&] {
    try {
      if (family == "dumbbell") return dumbbell_family(get_number(need(j, "ell"), "ell"));
      if (family == "stacked")
        return stacked_family(j.contains("w") ? get_number(j.at("w"), "w") : 1.0,
                              j.contains("comparison_w") ? get_number(j.at("comparison_w"), "comparison_w") : 2.0);
      if (family == "table") return table_family(j);
    } catch (const Error& e) {
      if (e.code() == "malformed") throw;
      malformed(e.what());
    }
    malformed("unknown family '" + family + "'");
  }();
  const std::size_t k = setup.field.dim();

  if (j.contains("pairing")) {
    const Json& p = j.at("pairing");
    if (!p.is_object()) malformed("pairing must map curve -> partner");
    AdmissibleCurveSet curves = setup.field.curves();
    for (const auto& [c, partner] : p.items())
      curves.pairing.at(curves.index(c)) = curves.index(get_as<std::string>(partner, "pairing"));
    try {
      setup.field = HeightField(setup.field.domain(), curves, setup.field.assignment(Side::I),
                                setup.field.assignment(Side::II));
    } catch (const Error& e) {
      malformed(e.what());
    }
  }
  if (j.contains("box")) {
    const Json& b = j.at("box");
    setup.box = Box{get_vector(need(b, "lo"), "box.lo", k), get_vector(need(b, "hi"), "box.hi", k)};
  }
  if (j.contains("reference")) setup.reference = get_vector(j.at("reference"), "reference", k);
  if (j.contains("push")) apply_push(setup, j.at("push"));
  if (j.contains("rays")) {
    setup.rays.clear();
    for (const Json& r : j.at("rays")) {
      Ray ray;
      ray.name = r.value("name", std::string("ray") + std::to_string(setup.rays.size()));
      ray.base = get_vector(need(r, "base"), "rays.base", k);
      ray.slope = get_vector(need(r, "slope"), "rays.slope", k);
      ray.power = r.contains("power") ? get_as<std::vector<int>>(r.at("power"), "rays.power") : std::vector<int>(k, 1);
      if (ray.power.size() != k) malformed("rays.power needs one entry per parameter");
      setup.rays.push_back(std::move(ray));
    }
  }
  return setup;
}

std::string dump_json(const Json& j) {
  std::string out;
  emit(out, j, 0);
  out += "\n";
  return out;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const ValidationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"message", c.message}});
  return Json{{"ok", r.ok()}, {"checks", checks}};
}

Json to_json(const AuditReport& r) {
  Json evidence = Json::array();
  for (const auto& e : r.evidence) {
    Json item{{"point", vector_json(e.point)}, {"quantities", quantities_json(e.quantities)}};
    if (!e.note.empty()) item["note"] = e.note;
    if (e.witness) item["witness"] = true;
    evidence.push_back(std::move(item));
  }
  Json o{{"hypothesis", to_string(r.hypothesis)},
         {"verdict", to_string(r.verdict)},
         {"thresholds", quantities_json(r.thresholds)},
         {"evidence", evidence},
         {"seed", r.seed ? Json(*r.seed) : Json(nullptr)},
         {"message", r.message}};
  if (!r.notes.empty()) {
    Json notes = Json::object();
    for (const auto& [k, v] : r.notes) notes[k] = v;
    o["notes"] = notes;
  }
  return o;
}

Json to_json(const SolveResult& r, bool include_trace) {
  Json o{{"status", to_string(r.status)},
         {"u_star", vector_json(r.u_star)},
         {"H_star", r.h_star},
         {"iterations", r.iterations}};
  if (include_trace) {
    Json trace = Json::array();
    for (const auto& t : r.trace)
      trace.push_back(Json{{"u", vector_json(t.u)}, {"H", t.height}, {"curve", t.curve}, {"step", t.step}});
    o["trace"] = trace;
  }
  return o;
}

Json to_json(const ReflexiveCertificate& c) {
  Json matches = Json::array();
  for (const auto& m : c.matches)
    matches.push_back(Json{{"curve", m.curve},
                           {"partner", m.partner},
                           {"ext_I", m.ext_I},
                           {"ext_II", m.ext_II},
                           {"residual", m.residual},
                           {"abs_mismatch", m.abs_mismatch}});
  return Json{{"u", vector_json(c.u)},
              {"tolerance", c.tol},
              {"max_abs_mismatch", c.max_abs_mismatch()},
              {"verdict", c.certified ? "certified" : "not_certified"},
              {"matches", matches}};
}

Json argmin_json(const ScanTable& t) {
  Json params = Json::object();
  const Eigen::VectorXd u = t.argmin();
  for (std::size_t i = 0; i < t.param_names.size(); ++i) params[t.param_names[i]] = u(static_cast<Eigen::Index>(i));
  return Json{{"rows", t.rows()}, {"argmin_row", t.argmin_row}, {"argmin", params}, {"H_min", t.h_min}};
}

void write_trace_csv(std::ostream& os, const SolveResult& r, const std::vector<std::string>& param_names) {
  os << "iter";
  for (const auto& n : param_names) os << ',' << n;
  os << ",H,curve\n";
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& t = r.trace[i];
    os << i;
    for (Eigen::Index p = 0; p < t.u.size(); ++p) os << ',' << format_double(t.u(p));
    os << ',' << format_double(t.height) << ',' << t.curve << '\n';
  }
}

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) malformed("bad number '" + item + "'");
    } catch (const std::logic_error&) {
      malformed("bad number '" + item + "'");
    }
  }
  if (vals.empty()) malformed("empty vector");
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Box parse_box(const std::string& text) {
  std::vector<double> lo, hi;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) malformed("box entries must be lo:hi");
    const Eigen::VectorXd a = parse_vector(item.substr(0, colon));
    const Eigen::VectorXd b = parse_vector(item.substr(colon + 1));
    if (a.size() != 1 || b.size() != 1 || !(a(0) <= b(0))) malformed("bad box entry '" + item + "'");
    lo.push_back(a(0));
    hi.push_back(b(0));
  }
  if (lo.empty()) malformed("empty box");
  return Box{Eigen::Map<Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size())),
             Eigen::Map<Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size()))};
}

}  // namespace reflexive
