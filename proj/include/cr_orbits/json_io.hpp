#pragma once

// JSON wire format for every public value, scenario parsing and the orbit report.
// Field order is fixed (ordered_json) so reports are byte-stable.

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "cr_orbits/classification.hpp"
#include "cr_orbits/congruence.hpp"
#include "cr_orbits/geometry.hpp"
#include "cr_orbits/verify.hpp"

namespace cr::io {

using json = nlohmann::ordered_json;

namespace detail {

inline const json & field(const json & j, const char * key, const std::string & where)
{
  if (!j.is_object() || !j.contains(key)) { throw InvalidInput(where + ": missing field \"" + key + "\""); }
  return j.at(key);
}

template <typename T>
T get(const json & j, const char * key, const std::string & where)
{
  const json & v = field(j, key, where);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception &) {
    throw InvalidInput(where + ": field \"" + key + "\" has the wrong type");
  }
}

inline Eigen::VectorXd to_vector(const json & j, const std::string & where)
{
  if (!j.is_array()) { throw InvalidInput(where + ": expected an array of numbers"); }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) { throw InvalidInput(where + ": expected an array of numbers"); }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline json from_vector(const Eigen::VectorXd & v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) { out.push_back(v(i)); }
  return out;
}

}  // namespace detail

// Values ------------------------------------------------------------------------

inline json to_json(const AlgVec & x) { return detail::from_vector(x.coords()); }

inline AlgVec algvec_from_json(const json & j, ModelDim dim)
{
  Eigen::VectorXd v = detail::to_vector(j, "vector");
  if (v.size() != dim.real_dim()) {
    throw DimensionMismatch("vector: expected " + std::to_string(dim.real_dim()) + " entries, got "
                            + std::to_string(v.size()));
  }
  return AlgVec(dim, std::move(v));
}

inline json to_json(const GroupElement & g) { return json{{"xi", to_json(g.xi())}}; }

inline GroupElement group_element_from_json(const json & j, ModelDim dim)
{
  return GroupElement::exp(algvec_from_json(detail::field(j, "xi", "group element"), dim));
}

inline json to_json(const Subspace & V)
{
  json basis = json::array();
  for (Eigen::Index i = 0; i < V.dim(); ++i) { basis.push_back(detail::from_vector(V.basis().col(i))); }
  return json{{"basis", basis}};
}

/// Accepts any spanning list. An orthonormal list is kept as written so that
/// serialized subspaces read back unchanged; anything else is orthonormalized.
inline Subspace subspace_from_json(const json & j, ModelDim dim)
{
  const json & basis = detail::field(j, "basis", "subspace");
  if (!basis.is_array()) { throw InvalidInput("subspace: \"basis\" must be an array of vectors"); }
  std::vector<AlgVec> vs;
  for (const json & v : basis) { vs.push_back(algvec_from_json(v, dim)); }
  Eigen::MatrixXd m(dim.real_dim(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) { m.col(static_cast<Eigen::Index>(i)) = vs[i].coords(); }
  const Eigen::MatrixXd gram = m.transpose() * m;
  if (vs.empty() || (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= 1e-14) {
    return Subspace(dim, std::move(m));
  }
  return span_of(dim, vs);
}

inline json to_json(const SubalgebraSpec & s)
{
  return json{{"kind", to_string(s.kind)}, {"dim_c", s.dim_c}, {"dim_r", s.dim_r}, {"n", s.model.n()}};
}

inline SubalgebraSpec spec_from_json(const json & j, std::optional<int> n_hint = std::nullopt)
{
  const std::string where = "subalgebra spec";
  const Kind kind         = parse_kind(detail::get<std::string>(j, "kind", where));
  const int c             = detail::get<int>(j, "dim_c", where);
  const int r             = detail::get<int>(j, "dim_r", where);
  int n                   = 0;
  if (j.contains("n")) {
    n = detail::get<int>(j, "n", where);
    if (n_hint && *n_hint != n) { throw InvalidInput(where + ": \"n\" disagrees with the scenario's n"); }
  } else if (n_hint) {
    n = *n_hint;
  } else {
    throw InvalidInput(where + ": missing field \"n\"");
  }
  SubalgebraSpec spec{kind, c, r, ModelDim(n)};
  spec.validate();
  return spec;
}

inline json to_json(const ExtrinsicInvariants & inv)
{
  json out{{"mean_sq", inv.mean_sq}};
  out["second_fundamental_sq"] = inv.second_fundamental_sq ? json(*inv.second_fundamental_sq) : json(nullptr);
  out["mean_vector"]           = to_json(inv.mean_curvature_vector);
  return out;
}

inline ExtrinsicInvariants invariants_from_json(const json & j, ModelDim dim)
{
  const std::string where = "invariants";
  std::optional<double> ii;
  if (!detail::field(j, "second_fundamental_sq", where).is_null()) {
    ii = detail::get<double>(j, "second_fundamental_sq", where);
  }
  return {algvec_from_json(detail::field(j, "mean_vector", where), dim), detail::get<double>(j, "mean_sq", where), ii};
}

inline TypeTag parse_type_tag(const std::string & s)
{
  for (TypeTag t : {TypeTag::I, TypeTag::II, TypeTag::III, TypeTag::IV, TypeTag::NotCR}) {
    if (s == to_string(t)) { return t; }
  }
  throw InvalidInput("unknown orbit type '" + s + "'");
}

inline json to_json(const CongruenceKey & k)
{
  return json{{"kind", to_string(k.kind)}, {"dims", {k.dim_c, k.dim_r, k.n}}, {"scalars", k.scalars}};
}

inline CongruenceKey key_from_json(const json & j)
{
  const std::string where = "congruence key";
  const auto dims         = detail::get<std::vector<int>>(j, "dims", where);
  if (dims.size() != 3) { throw InvalidInput(where + ": \"dims\" must be [dim_c, dim_r, n]"); }
  return {parse_type_tag(detail::get<std::string>(j, "kind", where)), dims[0], dims[1], dims[2],
          detail::get<std::vector<double>>(j, "scalars", where)};
}

inline json to_json(const IndexSet & s)
{
  json out{{"type", s.type == IndexSet::Type::Ik ? "I_k" : "I_kl"}, {"k", s.k}};
  if (s.type == IndexSet::Type::Ikl) { out["l"] = s.l; }
  json elems = json::array();
  for (const auto & e : s.elements()) { elems.push_back(e.size() == 1 ? json(e[0]) : json(e)); }
  out["size"]     = elems.size();
  out["elements"] = elems;
  return out;
}

inline json to_json(const ModuliComponent & c)
{
  json pieces = json::array();
  for (const auto & p : c.pieces) {
    pieces.push_back(json{{"index_set", p.index_set ? to_json(*p.index_set) : json(nullptr)}, {"half_lines", p.half_lines}});
  }
  return json{{"kind", to_string(c.kind)}, {"pieces", pieces}};
}

inline json moduli_to_json(int n)
{
  json comps = json::array();
  for (const auto & c : moduli_space(n)) { comps.push_back(to_json(c)); }
  return json{{"n", n}, {"components", comps}};
}

// Scenarios ---------------------------------------------------------------------

struct Scenario
{
  ModelDim dim;
  std::variant<SubalgebraSpec, Subspace> subalgebra;
  std::variant<StructuredCoords, GroupElement> g;
  std::optional<std::uint64_t> seed;
};

inline json to_json(const StructuredCoords & s)
{
  return json{{"b", s.b}, {"T", detail::from_vector(s.T)}, {"W", detail::from_vector(s.W)}, {"y", s.y}};
}

inline Scenario scenario_from_json(const json & j)
{
  const std::string where = "scenario";
  if (!j.is_object()) { throw InvalidInput("scenario: top level must be an object"); }
  const ModelDim dim(detail::get<int>(j, "n", where));

  const json & sub = detail::field(j, "subalgebra", where);
  const bool has_kind  = sub.is_object() && sub.contains("kind");
  const bool has_basis = sub.is_object() && sub.contains("basis");
  if (has_kind == has_basis) { throw InvalidInput("scenario: \"subalgebra\" needs exactly one of a spec or a \"basis\""); }

  const bool has_ge = j.contains("group_element"), has_g = j.contains("g");
  if (has_ge == has_g) { throw InvalidInput("scenario: give exactly one of \"group_element\" or \"g\""); }
  const json & gj = has_ge ? j.at("group_element") : j.at("g");
  if (!gj.is_object()) { throw InvalidInput("scenario: group element must be an object"); }
  const bool raw        = gj.contains("xi");
  const bool structured = gj.contains("b") || gj.contains("T") || gj.contains("W") || gj.contains("y");
  if (raw == structured) {
    throw InvalidInput("scenario: group element needs exactly one of {\"xi\"} or {\"b\",\"T\",\"W\",\"y\"}");
  }

  Scenario sc{dim, SubalgebraSpec{Kind::R, 0, 1, dim}, GroupElement::identity(dim), std::nullopt};
  if (has_kind) {
    sc.subalgebra = spec_from_json(sub, dim.n());
  } else {
    sc.subalgebra = subspace_from_json(sub, dim);
  }
  if (raw) {
    sc.g = group_element_from_json(gj, dim);
  } else {
    if (has_basis) { throw InvalidInput("scenario: structured coordinates need a subalgebra spec, not a basis"); }
    StructuredCoords s;
    const std::string gw = "structured coordinates";
    s.b = gj.contains("b") ? detail::get<double>(gj, "b", gw) : 0.0;
    s.y = gj.contains("y") ? detail::get<double>(gj, "y", gw) : 0.0;
    const SubalgebraSpec & spec = std::get<SubalgebraSpec>(sc.subalgebra);
    const Eigen::Index nw       = 2 * (dim.alpha_dim() - spec.dim_c - spec.dim_r);
    s.T = gj.contains("T") ? detail::to_vector(gj.at("T"), gw + " T") : Eigen::VectorXd::Zero(spec.dim_r);
    s.W = gj.contains("W") ? detail::to_vector(gj.at("W"), gw + " W") : Eigen::VectorXd::Zero(nw);
    sc.g = s;
  }
  if (j.contains("seed")) { sc.seed = detail::get<std::uint64_t>(j, "seed", where); }
  return sc;
}

inline json to_json(const Scenario & sc)
{
  json out{{"n", sc.dim.n()}};
  out["subalgebra"] = std::visit([](const auto & s) { return to_json(s); }, sc.subalgebra);
  out["group_element"] = std::visit([](const auto & g) { return to_json(g); }, sc.g);
  if (sc.seed) { out["seed"] = *sc.seed; }
  return out;
}

inline OrbitQuery scenario_query(const Scenario & sc)
{
  if (const auto * spec = std::get_if<SubalgebraSpec>(&sc.subalgebra)) {
    const GroupElement g = std::holds_alternative<GroupElement>(sc.g)
                             ? std::get<GroupElement>(sc.g)
                             : from_structured(*spec, std::get<StructuredCoords>(sc.g));
    return make_query(*spec, g);
  }
  return make_query(std::get<Subspace>(sc.subalgebra), std::get<GroupElement>(sc.g));
}

// Reports -----------------------------------------------------------------------

struct Report
{
  OrbitReport orbit;
  ExtrinsicInvariants invariants;
  std::optional<CongruenceKey> key;
  std::vector<std::string> diagnostics;
};

inline Report build_report(const Scenario & sc)
{
  const OrbitQuery q = scenario_query(sc);
  OrbitReport orbit  = analyze_orbit(q);
  ExtrinsicInvariants inv = orbit_invariants(orbit.tangent_at_o);
  std::vector<std::string> diag;
  if (q.raw) {
    diag.push_back(std::string("subalgebra normalized to kind ") + to_string(q.form.spec.kind) + " (dim_c "
                   + std::to_string(q.form.spec.dim_c) + ", dim_r " + std::to_string(q.form.spec.dim_r) + ")");
  }
  if (orbit.is_cr) {
    const ExtrinsicInvariants closed = closed_form_invariants(q.form, q.g);
    std::ostringstream msg;
    msg << "closed-form mean_sq " << std::setprecision(12) << closed.mean_sq << ", residual " << std::scientific
        << std::setprecision(2) << std::abs(closed.mean_sq - inv.mean_sq);
    diag.push_back(msg.str());
  } else {
    diag.push_back(orbit.spec.kind == Kind::AR ? "slice point has a non-zero J r component"
                                               : "slice point has a non-zero c' component");
  }
  Report out{std::move(orbit), std::move(inv), std::nullopt, std::move(diag)};
  out.key = out.orbit.congruence_key;
  return out;
}

inline json to_json(const OrbitReport & r)
{
  json out{{"is_cr", r.is_cr}, {"type", to_string(r.type_tag)}, {"spec", to_json(r.spec)}};
  out["tangent_at_o"]  = to_json(r.tangent_at_o);
  out["decomposition"] = json{{"complex_part", to_json(r.decomposition.complex_part)},
                              {"real_part", to_json(r.decomposition.real_part)},
                              {"is_cr", r.decomposition.is_cr}};
  out["membership"]    = json{{"is_cr", r.membership.is_cr},
                              {"slice", to_json(r.membership.slice)},
                              {"jr_component", r.membership.jr_component},
                              {"cprime_component", r.membership.cprime_component}};
  out["congruence_key"] = r.congruence_key ? to_json(*r.congruence_key) : json(nullptr);
  return out;
}

inline OrbitReport orbit_report_from_json(const json & j)
{
  const std::string where   = "orbit report";
  const SubalgebraSpec spec = spec_from_json(detail::field(j, "spec", where));
  const ModelDim dim        = spec.model;
  const json & d            = detail::field(j, "decomposition", where);
  const json & m            = detail::field(j, "membership", where);
  const json & kj = detail::field(j, "congruence_key", where);
  std::optional<CongruenceKey> key = kj.is_null() ? std::nullopt : std::make_optional(key_from_json(kj));
  return {detail::get<bool>(j, "is_cr", where),
          parse_type_tag(detail::get<std::string>(j, "type", where)),
          spec,
          subspace_from_json(detail::field(j, "tangent_at_o", where), dim),
          {subspace_from_json(detail::field(d, "complex_part", where), dim),
           subspace_from_json(detail::field(d, "real_part", where), dim), detail::get<bool>(d, "is_cr", where)},
          {detail::get<bool>(m, "is_cr", where), algvec_from_json(detail::field(m, "slice", where), dim),
           detail::get<double>(m, "jr_component", where), detail::get<double>(m, "cprime_component", where)},
          std::move(key)};
}

inline json to_json(const Report & r)
{
  json out{{"orbit", to_json(r.orbit)}, {"invariants", to_json(r.invariants)}};
  out["key"]         = r.key ? to_json(*r.key) : json(nullptr);
  out["diagnostics"] = r.diagnostics;
  return out;
}

inline Report report_from_json(const json & j)
{
  const std::string where = "report";
  OrbitReport orbit       = orbit_report_from_json(detail::field(j, "orbit", where));
  const ModelDim dim      = orbit.spec.model;
  const json & kj = detail::field(j, "key", where);
  std::optional<CongruenceKey> key = kj.is_null() ? std::nullopt : std::make_optional(key_from_json(kj));
  return {std::move(orbit), invariants_from_json(detail::field(j, "invariants", where), dim), std::move(key),
          detail::get<std::vector<std::string>>(j, "diagnostics", where)};
}

inline json to_json(const CongruenceDecision & d)
{
  return json{{"congruent", d.congruent}, {"reason", d.reason}, {"keys", {to_json(d.key1), to_json(d.key2)}}};
}

// Verification ------------------------------------------------------------------

inline json to_json(const PropertyResult & p)
{
  json out{{"name", p.name},           {"passed", p.passed()},       {"trials", p.trials},
           {"failures", p.failures},   {"max_residual", p.max_residual}, {"tolerance", p.tolerance}};
  if (!p.first_error.empty()) { out["first_error"] = p.first_error; }
  return out;
}

inline json to_json(const DisplacementSweep & s)
{
  json cands = json::array();
  for (const auto & e : s.entries) {
    cands.push_back(json{{"form", to_string(e.form)}, {"max_mean_sq_residual", e.max_mean_sq_residual}, {"consistent", e.consistent}});
  }
  json selected = json::array();
  for (auto f : s.consistent_forms()) { selected.push_back(to_string(f)); }
  return json{{"samples", s.samples}, {"candidates", cands}, {"selected", selected}};
}

inline json to_json(const SuiteReport & r)
{
  json props = json::array();
  for (const auto & p : r.properties) { props.push_back(to_json(p)); }
  json out{{"suite", r.suite}, {"seed", r.seed}, {"passed", r.passed()}, {"properties", props}};
  if (r.displacement_sweep) { out["kind_I_displacement"] = to_json(*r.displacement_sweep); }
  return out;
}

}  // namespace cr::io
