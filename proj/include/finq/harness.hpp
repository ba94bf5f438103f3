#pragma once

// Config-driven orchestration: strict JSON parsing of run configurations,
// check dispatch, and canonical (byte-stable) report serialization.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "finq/catalog.hpp"
#include "finq/liegroup.hpp"
#include "finq/minkowski.hpp"
#include "finq/quotient.hpp"

namespace finq {

inline constexpr const char* kArtifactVersion = "0.1.0";

using json = nlohmann::json;

// Configuration or construction failure; the message carries the key path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CheckKind {
  axioms,
  ideal,
  well_defined,
  invariance_left,
  invariance_right,
  riemann_compat,
  bi_invariance,
};

inline const std::vector<std::pair<std::string, CheckKind>>& check_name_table() {
  static const std::vector<std::pair<std::string, CheckKind>> table = {
      {"axioms", CheckKind::axioms},
      {"ideal", CheckKind::ideal},
      {"well_defined", CheckKind::well_defined},
      {"invariance_left", CheckKind::invariance_left},
      {"invariance_right", CheckKind::invariance_right},
      {"riemann_compat", CheckKind::riemann_compat},
      {"bi_invariance", CheckKind::bi_invariance},
  };
  return table;
}

inline std::string check_name(CheckKind k) {
  for (const auto& [name, kind] : check_name_table())
    if (kind == k) return name;
  return "?";
}

inline CheckKind check_kind(const std::string& name) {
  for (const auto& [n, kind] : check_name_table())
    if (n == name) return kind;
  throw ConfigError("unknown check '" + name + "'");
}

inline double default_tolerance(CheckKind k) {
  return k == CheckKind::bi_invariance ? 1e-10 : 1e-9;
}

struct NormConfig {
  std::string type;           // euclidean | randers | quartic
  std::optional<Matrix> a;
  std::optional<Vector> b;
};

struct SubgroupConfig {
  bool present = false;
  std::string named;                                  // nonempty for catalog names
  std::optional<std::vector<int>> basis_indices;      // or
  std::optional<std::vector<Vector>> basis_coords;    // rows of algebra coordinates
};

struct ComplementConfig {
  bool orthogonal = true;
  std::optional<std::vector<Vector>> basis_coords;
};

struct RunConfig {
  std::string group;
  int rn_dim = 3;
  SubgroupConfig subgroup;
  ComplementConfig complement;
  NormConfig norm;
  Side metric_side = Side::right;
  std::vector<CheckKind> checks;
  int samples = 1000;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;  // explicit overrides only
};

// ---------------------------------------------------------------------------
// Strict JSON -> RunConfig

namespace detail {

inline void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

inline const json& require_key(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

inline double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  return j.get<double>();
}

inline Vector get_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const json& x : j) v[i++] = get_number(x, where + " entry");
  return v;
}

inline Matrix get_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ConfigError(where + " must be a nonempty array of rows");
  std::vector<Vector> rows;
  rows.reserve(j.size());
  for (const json& r : j) rows.push_back(get_vector(r, where + " row"));
  const Eigen::Index cols = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ConfigError(where + " rows have unequal length");
    m.row(static_cast<Eigen::Index>(i)) = rows[i];
  }
  return m;
}

inline std::vector<Vector> get_vector_rows(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ConfigError(where + " must be a nonempty array of coordinate rows");
  std::vector<Vector> rows;
  rows.reserve(j.size());
  for (const json& r : j) rows.push_back(get_vector(r, where + " row"));
  return rows;
}

}  // namespace detail

inline NormConfig parse_norm(const json& j) {
  detail::require_object(j, "$.norm");
  const json& type = detail::require_key(j, "type", "$.norm");
  if (!type.is_string()) throw ConfigError("$.norm.type must be a string");
  NormConfig out;
  out.type = type.get<std::string>();
  if (out.type == "euclidean") {
    detail::reject_unknown_keys(j, {"type", "a"}, "$.norm");
    out.a = detail::get_matrix(detail::require_key(j, "a", "$.norm"), "$.norm.a");
  } else if (out.type == "randers") {
    detail::reject_unknown_keys(j, {"type", "a", "b"}, "$.norm");
    out.a = detail::get_matrix(detail::require_key(j, "a", "$.norm"), "$.norm.a");
    out.b = detail::get_vector(detail::require_key(j, "b", "$.norm"), "$.norm.b");
  } else if (out.type == "quartic") {
    detail::reject_unknown_keys(j, {"type"}, "$.norm");
  } else {
    throw ConfigError("unknown norm type '" + out.type + "'");
  }
  return out;
}

inline RunConfig parse_config(const json& j) {
  detail::require_object(j, "$");
  detail::reject_unknown_keys(j,
                              {"group", "group_params", "subgroup", "complement", "norm",
                               "metric_side", "checks", "samples", "seed", "tolerances"},
                              "$");
  RunConfig cfg;

  const json& group = detail::require_key(j, "group", "$");
  if (!group.is_string()) throw ConfigError("$.group must be a string");
  cfg.group = group.get<std::string>();
  const auto names = catalog_group_names();
  if (std::find(names.begin(), names.end(), cfg.group) == names.end())
    throw ConfigError("unknown group '" + cfg.group + "'");

  if (auto it = j.find("group_params"); it != j.end()) {
    if (cfg.group != "rn") throw ConfigError("group_params only applies to group 'rn'");
    detail::require_object(*it, "$.group_params");
    detail::reject_unknown_keys(*it, {"n"}, "$.group_params");
    const json& n = detail::require_key(*it, "n", "$.group_params");
    if (!n.is_number_integer() || n.get<int>() < 1)
      throw ConfigError("$.group_params.n must be a positive integer");
    cfg.rn_dim = n.get<int>();
  }

  if (auto it = j.find("subgroup"); it != j.end()) {
    cfg.subgroup.present = true;
    if (it->is_string()) {
      cfg.subgroup.named = it->get<std::string>();
    } else {
      detail::require_object(*it, "$.subgroup");
      detail::reject_unknown_keys(*it, {"basis_indices", "basis"}, "$.subgroup");
      const bool has_idx = it->contains("basis_indices");
      const bool has_basis = it->contains("basis");
      if (has_idx == has_basis)
        throw ConfigError("$.subgroup needs exactly one of 'basis_indices' or 'basis'");
      if (has_idx) {
        const json& arr = (*it)["basis_indices"];
        if (!arr.is_array() || arr.empty())
          throw ConfigError("$.subgroup.basis_indices must be a nonempty array");
        std::vector<int> idx;
        for (const json& x : arr) {
          if (!x.is_number_integer())
            throw ConfigError("$.subgroup.basis_indices entries must be integers");
          idx.push_back(x.get<int>());
        }
        cfg.subgroup.basis_indices = std::move(idx);
      } else {
        cfg.subgroup.basis_coords = detail::get_vector_rows((*it)["basis"], "$.subgroup.basis");
      }
    }
  }

  if (auto it = j.find("complement"); it != j.end()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "orthogonal")
        throw ConfigError("$.complement string form must be \"orthogonal\"");
    } else {
      detail::require_object(*it, "$.complement");
      detail::reject_unknown_keys(*it, {"basis"}, "$.complement");
      cfg.complement.orthogonal = false;
      cfg.complement.basis_coords =
          detail::get_vector_rows(detail::require_key(*it, "basis", "$.complement"),
                                  "$.complement.basis");
    }
  }

  cfg.norm = parse_norm(detail::require_key(j, "norm", "$"));

  const json& side = detail::require_key(j, "metric_side", "$");
  if (!side.is_string()) throw ConfigError("$.metric_side must be a string");
  const std::string side_s = side.get<std::string>();
  if (side_s == "left") cfg.metric_side = Side::left;
  else if (side_s == "right") cfg.metric_side = Side::right;
  else if (side_s == "bi") cfg.metric_side = Side::bi;
  else throw ConfigError("$.metric_side must be one of left, right, bi");

  if (auto it = j.find("checks"); it != j.end()) {
    if (!it->is_array()) throw ConfigError("$.checks must be an array of check names");
    for (const json& c : *it) {
      if (!c.is_string()) throw ConfigError("$.checks entries must be strings");
      const CheckKind kind = check_kind(c.get<std::string>());
      if (std::find(cfg.checks.begin(), cfg.checks.end(), kind) == cfg.checks.end())
        cfg.checks.push_back(kind);
    }
  }

  if (auto it = j.find("samples"); it != j.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 1)
      throw ConfigError("$.samples must be a positive integer");
    if (it->get<long long>() > 10'000'000) throw ConfigError("$.samples is too large");
    cfg.samples = it->get<int>();
  }

  if (auto it = j.find("seed"); it != j.end()) {
    if (it->is_number_unsigned()) cfg.seed = it->get<std::uint64_t>();
    else if (it->is_number_integer() && it->get<long long>() >= 0)
      cfg.seed = static_cast<std::uint64_t>(it->get<long long>());
    else throw ConfigError("$.seed must be a nonnegative integer");
  }

  if (auto it = j.find("tolerances"); it != j.end()) {
    detail::require_object(*it, "$.tolerances");
    for (auto t = it->begin(); t != it->end(); ++t) {
      check_kind(t.key());  // validates the name
      const double v = detail::get_number(t.value(), "$.tolerances." + t.key());
      if (!(v > 0.0)) throw ConfigError("$.tolerances." + t.key() + " must be positive");
      cfg.tolerances[t.key()] = v;
    }
  }

  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------
// Construction

struct BuiltRun {
  GroupPtr group;
  std::optional<InvariantMetric> metric;
  std::optional<SubgroupSplit> split;
};

namespace detail {

template <class Fn>
auto with_path(const char* path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string(path) + ": " + e.what());
  }
}

}  // namespace detail

inline BuiltRun build_run(const RunConfig& cfg) {
  BuiltRun out;
  out.group = detail::with_path("$.group", [&] {
    return make_catalog_group(cfg.group, cfg.rn_dim);
  });
  const int n = out.group->dim();

  MinkowskiNorm norm = detail::with_path("$.norm", [&]() -> MinkowskiNorm {
    if (cfg.norm.type == "euclidean") return MinkowskiNorm::euclidean(*cfg.norm.a);
    if (cfg.norm.type == "randers") return MinkowskiNorm::randers(*cfg.norm.a, *cfg.norm.b);
    return MinkowskiNorm::quartic(n);
  });
  out.metric = detail::with_path("$.norm", [&] {
    return make_invariant_metric(out.group, std::move(norm), cfg.metric_side);
  });

  if (cfg.subgroup.present) {
    std::vector<Matrix> h_basis;
    std::function<bool(const Matrix&)> membership;
    if (!cfg.subgroup.named.empty()) {
      const auto defs = named_subgroups(out.group);
      const auto it = std::find_if(defs.begin(), defs.end(), [&](const SubgroupDef& d) {
        return d.name == cfg.subgroup.named;
      });
      if (it == defs.end())
        throw ConfigError("unknown subgroup '" + cfg.subgroup.named + "' for group '" +
                          cfg.group + "'");
      for (int i : it->basis_indices)
        h_basis.push_back(out.group->algebra_basis()[static_cast<std::size_t>(i)]);
      membership = it->membership;
    } else if (cfg.subgroup.basis_indices) {
      std::vector<int> idx = *cfg.subgroup.basis_indices;
      std::vector<int> seen;
      for (int i : idx) {
        if (i < 0 || i >= n) throw ConfigError("$.subgroup.basis_indices out of range");
        if (std::find(seen.begin(), seen.end(), i) != seen.end())
          throw ConfigError("$.subgroup.basis_indices has duplicates");
        seen.push_back(i);
        h_basis.push_back(out.group->algebra_basis()[static_cast<std::size_t>(i)]);
      }
      membership = span_membership(out.group, h_basis);
    } else {
      for (const Vector& c : *cfg.subgroup.basis_coords) {
        if (c.size() != n) throw ConfigError("$.subgroup.basis rows must have length n");
        h_basis.push_back(out.group->basis().combine(c));
      }
      membership = span_membership(out.group, h_basis);
    }

    out.split = detail::with_path("$.subgroup", [&]() -> SubgroupSplit {
      if (cfg.complement.orthogonal) {
        const Matrix form = out.metric->norm0.a().size() > 0
                                ? out.metric->norm0.a()
                                : Matrix(Matrix::Identity(n, n));
        return make_orthogonal_split(out.group, std::move(h_basis), std::move(membership),
                                     form);
      }
      std::vector<Matrix> v_basis;
      for (const Vector& c : *cfg.complement.basis_coords) {
        if (c.size() != n) throw ConfigError("$.complement.basis rows must have length n");
        v_basis.push_back(out.group->basis().combine(c));
      }
      return SubgroupSplit(out.group, std::move(h_basis), std::move(v_basis),
                           std::move(membership));
    });
  }

  return out;
}

// ---------------------------------------------------------------------------
// Canonical JSON

namespace detail {

inline std::string canonical_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in report");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void canonical_write(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // keys iterate sorted
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        canonical_write(out, it.value());
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const json& x : j) {
        if (!first) out += ',';
        first = false;
        canonical_write(out, x);
      }
      out += ']';
      break;
    }
    case json::value_t::string:
      out += j.dump();
      break;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      break;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case json::value_t::number_float:
      out += canonical_double(j.get<double>());
      break;
    case json::value_t::null:
    default:
      out += "null";
      break;
  }
}

inline json vector_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

inline std::string canonical_dump(const json& j) {
  std::string out;
  detail::canonical_write(out, j);
  return out;
}

inline json config_echo(const RunConfig& cfg) {
  json j;
  j["group"] = cfg.group;
  if (cfg.group == "rn") j["group_params"] = json{{"n", cfg.rn_dim}};
  if (cfg.subgroup.present) {
    if (!cfg.subgroup.named.empty()) {
      j["subgroup"] = cfg.subgroup.named;
    } else if (cfg.subgroup.basis_indices) {
      j["subgroup"] = json{{"basis_indices", *cfg.subgroup.basis_indices}};
    } else {
      json rows = json::array();
      for (const Vector& r : *cfg.subgroup.basis_coords) rows.push_back(detail::vector_json(r));
      j["subgroup"] = json{{"basis", rows}};
    }
    if (cfg.complement.orthogonal) {
      j["complement"] = "orthogonal";
    } else {
      json rows = json::array();
      for (const Vector& r : *cfg.complement.basis_coords)
        rows.push_back(detail::vector_json(r));
      j["complement"] = json{{"basis", rows}};
    }
  }
  json norm;
  norm["type"] = cfg.norm.type;
  if (cfg.norm.a) norm["a"] = detail::matrix_json(*cfg.norm.a);
  if (cfg.norm.b) norm["b"] = detail::vector_json(*cfg.norm.b);
  j["norm"] = norm;
  j["metric_side"] = side_name(cfg.metric_side);
  json checks = json::array();
  for (CheckKind k : cfg.checks) checks.push_back(check_name(k));
  j["checks"] = checks;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["tolerances"] = json(cfg.tolerances);
  return j;
}

// ---------------------------------------------------------------------------
// Check dispatch

struct CheckRecord {
  CheckKind kind = CheckKind::axioms;
  int samples_run = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  json worst_case;  // null unless the check failed
};

struct VerificationReport {
  std::vector<CheckRecord> checks;
  bool overall = true;
  json config;
};

namespace detail {

inline json worst_json(const WorstCase& w) {
  json j;
  j["deviation"] = w.deviation;
  if (w.z_coords.size() > 0) j["z_coords"] = vector_json(w.z_coords);
  if (w.h_coords.size() > 0) j["h_coords"] = vector_json(w.h_coords);
  if (w.g_coords.size() > 0) j["g_coords"] = vector_json(w.g_coords);
  if (w.mu.size() > 0) j["mu"] = vector_json(w.mu);
  return j;
}

inline CheckRecord record_from(CheckKind kind, const DeviationReport& rep, double tol) {
  CheckRecord rec;
  rec.kind = kind;
  rec.samples_run = rep.samples;
  rec.max_deviation = rep.max_deviation;
  rec.tolerance = tol;
  rec.pass = rep.max_deviation <= tol;
  if (!rec.pass && rep.worst) rec.worst_case = worst_json(*rep.worst);
  return rec;
}

}  // namespace detail

inline VerificationReport run(const RunConfig& cfg, int workers = 1) {
  const BuiltRun built = build_run(cfg);
  const InvariantMetric& metric = *built.metric;

  auto tolerance_for = [&](CheckKind k) {
    const auto it = cfg.tolerances.find(check_name(k));
    return it != cfg.tolerances.end() ? it->second : default_tolerance(k);
  };
  auto require_split = [&](CheckKind k) -> const SubgroupSplit& {
    if (!built.split)
      throw ConfigError("check '" + check_name(k) + "' requires a subgroup");
    return *built.split;
  };

  VerificationReport report;
  for (CheckKind k : cfg.checks) {
    const double tol = tolerance_for(k);
    CheckRecord rec;
    switch (k) {
      case CheckKind::axioms: {
        const AxiomReport ar =
            check_minkowski_axioms(metric.norm0, cfg.samples, cfg.seed, workers);
        rec.kind = k;
        rec.samples_run = ar.samples;
        rec.max_deviation = ar.max_homogeneity_deviation;
        rec.tolerance = tol;
        const bool fd_ok =
            !metric.norm0.has_analytic_tensor() || ar.max_fd_deviation <= 1e-5;
        rec.pass = ar.max_homogeneity_deviation <= tol &&
                   ar.min_tensor_eigenvalue > 0.0 && ar.max_tensor_asymmetry <= 1e-10 &&
                   ar.max_euler_deviation <= 1e-8 && fd_ok;
        if (!rec.pass) {
          rec.worst_case = json{{"y", detail::vector_json(ar.worst_direction)},
                                {"lambda", ar.worst_lambda},
                                {"min_tensor_eigenvalue", ar.min_tensor_eigenvalue},
                                {"max_euler_deviation", ar.max_euler_deviation},
                                {"max_fd_deviation", ar.max_fd_deviation}};
        }
        break;
      }
      case CheckKind::ideal: {
        const SubgroupSplit& split = require_split(k);
        const IdealReport ir = check_ideal(*built.group, split.h_basis());
        rec.kind = k;
        rec.samples_run = 0;  // exhaustive over basis commutators
        rec.max_deviation = ir.max_residual;
        rec.tolerance = tol;
        rec.pass = ir.is_ideal;
        if (!rec.pass)
          rec.worst_case = json{{"is_subalgebra", ir.is_subalgebra},
                                {"max_residual", ir.max_residual}};
        break;
      }
      case CheckKind::well_defined: {
        const SubgroupSplit& split = require_split(k);
        rec = detail::record_from(
            k, verify_well_defined(metric, split, cfg.samples, cfg.seed, workers), tol);
        break;
      }
      case CheckKind::invariance_left:
      case CheckKind::invariance_right: {
        const SubgroupSplit& split = require_split(k);
        if (!split.is_ideal())
          throw ConfigError("check '" + check_name(k) +
                            "' requires an ideal subgroup algebra");
        const Side action =
            k == CheckKind::invariance_left ? Side::left : Side::right;
        rec = detail::record_from(
            k,
            verify_induced_invariance(metric, split, action, cfg.samples, cfg.seed, workers),
            tol);
        break;
      }
      case CheckKind::riemann_compat: {
        const SubgroupSplit& split = require_split(k);
        if (metric.norm0.kind() != MinkowskiNorm::Kind::euclidean)
          throw ConfigError("check 'riemann_compat' requires a euclidean norm");
        rec = detail::record_from(
            k,
            verify_riemannian_compatibility(split, metric.norm0.a(), cfg.samples, cfg.seed,
                                            workers),
            tol);
        break;
      }
      case CheckKind::bi_invariance: {
        const InvarianceReport vr =
            verify_bi_invariance(metric, cfg.samples, cfg.seed, workers);
        // judged on the side the metric claims; bi claims both
        double dev = 0.0;
        if (cfg.metric_side == Side::left) dev = vr.max_left_deviation;
        else if (cfg.metric_side == Side::right) dev = vr.max_right_deviation;
        else dev = std::max(vr.max_left_deviation, vr.max_right_deviation);
        rec.kind = k;
        rec.samples_run = vr.samples;
        rec.max_deviation = dev;
        rec.tolerance = tol;
        rec.pass = dev <= tol;
        if (!rec.pass)
          rec.worst_case = json{{"max_left_deviation", vr.max_left_deviation},
                                {"max_right_deviation", vr.max_right_deviation}};
        break;
      }
    }
    report.overall = report.overall && rec.pass;
    report.checks.push_back(std::move(rec));
  }
  report.config = config_echo(cfg);
  return report;
}

inline json report_json(const VerificationReport& report) {
  json checks = json::array();
  for (const CheckRecord& rec : report.checks) {
    json c;
    c["name"] = check_name(rec.kind);
    c["samples_run"] = rec.samples_run;
    c["max_deviation"] = rec.max_deviation;
    c["tolerance"] = rec.tolerance;
    c["pass"] = rec.pass;
    if (!rec.worst_case.is_null()) c["worst_case"] = rec.worst_case;
    checks.push_back(c);
  }
  json j;
  j["artifact_version"] = kArtifactVersion;
  j["config_echo"] = report.config;
  j["checks"] = checks;
  j["overall"] = report.overall;
  return j;
}

// Induced-metric value at exp(base_coords) with V-frame coordinates mu.
inline double eval_point(const RunConfig& cfg, const Vector& base_coords, const Vector& mu) {
  BuiltRun built = build_run(cfg);
  if (!built.split) throw ConfigError("eval requires a subgroup");
  InducedMetric im = detail::with_path("$.subgroup", [&] {
    return make_induced_metric(*built.metric, *built.split);
  });
  const GroupElement z = detail::with_path("base_coords", [&] {
    return exp_element(built.group, base_coords);
  });
  return detail::with_path("mu", [&] {
    return induced_eval(im, QuotientTangent{z, mu, frame_side(cfg.metric_side)});
  });
}

}  // namespace finq
