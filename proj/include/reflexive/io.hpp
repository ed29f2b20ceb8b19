#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "reflexive/families.hpp"
#include "reflexive/homology_config.hpp"
#include "reflexive/hypothesis_audit.hpp"
#include "reflexive/reflexive_solver.hpp"

namespace reflexive {

using Json = nlohmann::ordered_json;

/// Reads a JSON document. Throws io_error when unreadable, malformed on parse failure.
Json read_json_file(const std::string& path);

/// Datum document: genus, punctures, edges, iota (edge -> int array),
/// relations, optional extra_linear_constraints, tau (edge -> "h"|"v"),
/// sigma (edge -> edge), optional e0. Throws malformed.
ConfigurationDatum parse_datum(const Json& j);

/// Field spec document. `family` is "dumbbell" (ell), "stacked" (w,
/// comparison_w) or "table" (params, lower, upper, axes, curves, values_I,
/// values_II). Optional overrides: box {lo, hi}, reference, pairing
/// (curve -> partner), push {preset, weighting, sign, fields, incidence}
/// and rays [{name, base, slope, power}]. Throws malformed.
FamilySetup parse_field_spec(const Json& j);

/// Pretty-prints with fixed key order; finite doubles use `%.17g`, integers
/// stay integral and non-finite numbers become null.
std::string dump_json(const Json& j);

Json vector_json(const Eigen::VectorXd& v);
Json to_json(const ValidationReport& r);
Json to_json(const AuditReport& r);
Json to_json(const SolveResult& r, bool include_trace = false);
Json to_json(const ReflexiveCertificate& c);
Json argmin_json(const ScanTable& t);

/// `iter,param_1..param_k,H,curve` with `%.17g` numbers.
void write_trace_csv(std::ostream& os, const SolveResult& r, const std::vector<std::string>& param_names);

/// Comma-separated reals, e.g. "2.5,0.8". Throws malformed.
Eigen::VectorXd parse_vector(const std::string& text);

/// "lo:hi,lo:hi,...". Throws malformed.
Box parse_box(const std::string& text);

std::string format_double(double x);

}  // namespace reflexive
