#pragma once

// JSON run configuration and report encoding.  Complex numbers are [re, im]
// pairs (a bare number is read as real); matrices are row-major nested arrays.

#include "dhs/halfline.hpp"
#include "dhs/random.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dhs {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Decoding

inline cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError(where + ": expected a number or a [re, im] pair");
}

inline Mat matrix_from_json(const json& j, Eigen::Index n, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
    throw InputError(where + ": expected " + std::to_string(n) + " rows");
  Mat m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw InputError(where + ": row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    for (Eigen::Index c = 0; c < n; ++c)
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], where + "[" + std::to_string(r) + "][" +
                                                                        std::to_string(c) + "]");
  }
  return m;
}

/// Columns of a rows x k matrix given row-major.
inline Mat rect_from_json(const json& j, Eigen::Index rows, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw InputError(where + ": expected " + std::to_string(rows) + " rows");
  const std::size_t k = j.empty() || !j[0].is_array() ? 0 : j[0].size();
  Mat m(rows, static_cast<Eigen::Index>(k));
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != k) throw InputError(where + ": ragged rows");
    for (std::size_t c = 0; c < k; ++c) m(r, static_cast<Eigen::Index>(c)) = complex_from_json(row[c], where);
  }
  return m;
}

inline Vec vector_from_json(const json& j, Eigen::Index len, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != len)
    throw InputError(where + ": expected " + std::to_string(len) + " entries");
  Vec v(len);
  for (Eigen::Index k = 0; k < len; ++k) v(k) = complex_from_json(j[static_cast<std::size_t>(k)], where);
  return v;
}

inline SiteBlocks blocks_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object of blocks");
  auto get = [&](const char* key) {
    if (!j.contains(key)) throw InputError(where + ": missing block " + key);
    return matrix_from_json(j.at(key), n, where + "." + key);
  };
  return SiteBlocks{get("A"), get("B"), get("C"), get("D"), get("W1"), get("W2")};
}

/// Every overridable tolerance by name.
inline std::map<std::string, double Tolerances::*> tolerance_fields() {
  return {{"rank_rel", &Tolerances::rank_rel},
          {"rank_abs", &Tolerances::rank_abs},
          {"cond_ceiling", &Tolerances::cond_ceiling},
          {"subspace_angle", &Tolerances::subspace_angle},
          {"residual", &Tolerances::residual},
          {"boundary_residual", &Tolerances::boundary_residual},
          {"voc_rel", &Tolerances::voc_rel},
          {"identity_gap", &Tolerances::identity_gap},
          {"isometry", &Tolerances::isometry},
          {"hermitian", &Tolerances::hermitian},
          {"stabilize_ratio", &Tolerances::stabilize_ratio},
          {"criterion_value", &Tolerances::criterion_value}};
}

inline void set_tolerance(Tolerances& tol, const std::string& key, double value) {
  const auto fields = tolerance_fields();
  const auto it = fields.find(key);
  if (it == fields.end()) throw InputError("unknown tolerance '" + key + "'");
  if (!(value > 0.0)) throw InputError("tolerance '" + key + "' must be positive");
  tol.*(it->second) = value;
}

inline json tolerances_to_json(const Tolerances& tol) {
  json j = json::object();
  for (const auto& [k, p] : tolerance_fields()) j[k] = tol.*p;
  return j;
}

enum class Source { constant, per_site, random, free };

struct QSpec {
  std::vector<Mat> explicit_bases;
  bool coordinates = false;
  int random_per_dim = 0;
};

struct HalfLineSpec {
  std::string generator = "free";  ///< free | decaying_weight | constant
  std::optional<SiteBlocks> blocks;
  std::vector<long> horizons{20, 40, 60};
  long criterion_horizon = 60;
  int trials = 5;
};

struct RunConfig {
  int n = 1;
  long a = 0, b = 7;
  Source source = Source::free;
  std::optional<SiteBlocks> constant_blocks;
  std::vector<SiteBlocks> per_site;
  double free_weight = 1.0;
  RandomSystemOptions random;
  std::vector<int> n_values;
  int instances = 1;
  long sites_min = 4, sites_max = 20;
  bool require_definite = true;

  std::optional<HalfLineSpec> halfline;
  std::vector<cplx> lambdas{0.0, I_unit};
  std::optional<SiteRange> window;
  std::optional<long> c0;
  std::optional<Vec> alpha, beta;
  QSpec q;   ///< one-end subspaces of C^{2n}
  QSpec qc;  ///< two-end subspaces of C^{4n}
  Tolerances tol;
  std::uint64_t seed = 1;
  std::string out_json;
  std::string out_csv;
};

inline QSpec qspec_from_json(const json& j, Eigen::Index ambient, const std::string& where) {
  QSpec q;
  if (!j.is_object()) throw InputError(where + ": expected an object");
  if (j.contains("explicit")) {
    if (!j["explicit"].is_array()) throw InputError(where + ".explicit: expected a list of bases");
    for (const auto& m : j["explicit"]) q.explicit_bases.push_back(rect_from_json(m, ambient, where + ".explicit"));
  }
  q.coordinates = j.value("coordinates", false);
  q.random_per_dim = j.value("random_per_dim", 0);
  if (q.random_per_dim < 0) throw InputError(where + ".random_per_dim must be nonnegative");
  return q;
}

/// Parses a run configuration.  Throws InputError on malformed or
/// out-of-range input; nlohmann type errors are converted as well.
inline RunConfig parse_config(const json& j) {
  try {
    if (!j.is_object()) throw InputError("configuration must be a JSON object");
    RunConfig c;
    c.n = j.value("n", 1);
    if (c.n < 1) throw InputError("n must be positive");
    if (j.contains("interval")) {
      const auto& iv = j["interval"];
      c.a = iv.at("a").get<long>();
      c.b = iv.at("b").get<long>();
      if (c.b < c.a) throw InputError("interval needs b >= a");
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("lambdas")) {
      c.lambdas.clear();
      for (const auto& l : j["lambdas"]) c.lambdas.push_back(complex_from_json(l, "lambdas"));
    }
    if (j.contains("tolerances")) {
      for (const auto& [k, v] : j["tolerances"].items()) set_tolerance(c.tol, k, v.get<double>());
    }

    const json coeff = j.value("coefficients", json{{"source", "free"}});
    const std::string src = coeff.value("source", "free");
    if (src == "constant") {
      c.source = Source::constant;
      c.constant_blocks = blocks_from_json(coeff, c.n, "coefficients");
    } else if (src == "per_site") {
      c.source = Source::per_site;
      if (!coeff.contains("sites") || !coeff["sites"].is_array()) throw InputError("per_site source needs 'sites'");
      for (std::size_t k = 0; k < coeff["sites"].size(); ++k)
        c.per_site.push_back(blocks_from_json(coeff["sites"][k], c.n, "coefficients.sites[" + std::to_string(k) + "]"));
      if (static_cast<long>(c.per_site.size()) != c.b - c.a + 1)
        throw InputError("per_site source needs one block set per site of the interval");
    } else if (src == "random") {
      c.source = Source::random;
      c.random.rho = coeff.value("rho", 0.5);
      c.random.coupling = coeff.value("coupling", 0.5);
      c.random.singular_weight = coeff.value("singular_weight", 0.3);
      c.random.hermitian = coeff.value("hermitian", false);
      if (!(c.random.rho > 0.0 && c.random.rho < 1.0)) throw InputError("random source needs 0 < rho < 1");
      c.instances = coeff.value("instances", 1);
      if (c.instances < 1) throw InputError("instances must be positive");
      c.sites_min = coeff.value("sites_min", c.b - c.a + 1);
      c.sites_max = coeff.value("sites_max", c.sites_min);
      if (c.sites_min < 1 || c.sites_max < c.sites_min) throw InputError("random source needs 1 <= sites_min <= sites_max");
      if (coeff.contains("n_values")) c.n_values = coeff["n_values"].get<std::vector<int>>();
      for (int v : c.n_values)
        if (v < 1) throw InputError("n_values must be positive");
      c.require_definite = coeff.value("require_definite", true);
    } else if (src == "free") {
      c.source = Source::free;
      c.free_weight = coeff.value("weight", 1.0);
    } else {
      throw InputError("unknown coefficient source '" + src + "'");
    }

    if (j.contains("halfline")) {
      const auto& h = j["halfline"];
      HalfLineSpec s;
      s.generator = h.value("generator", "free");
      if (s.generator == "constant") s.blocks = blocks_from_json(h.at("blocks"), c.n, "halfline.blocks");
      else if (s.generator != "free" && s.generator != "decaying_weight")
        throw InputError("unknown half-line generator '" + s.generator + "'");
      if (h.contains("horizons")) s.horizons = h["horizons"].get<std::vector<long>>();
      s.criterion_horizon = h.value("criterion_horizon", s.horizons.empty() ? 60L : s.horizons.back());
      s.trials = h.value("trials", 5);
      c.halfline = s;
    }
    if (j.contains("window")) c.window = SiteRange(j["window"].at("first").get<long>(), j["window"].at("last").get<long>());
    if (j.contains("c0")) c.c0 = j["c0"].get<long>();
    if (j.contains("alpha")) c.alpha = vector_from_json(j["alpha"], 2 * c.n, "alpha");
    if (j.contains("beta")) c.beta = vector_from_json(j["beta"], 2 * c.n, "beta");
    if (j.contains("q")) c.q = qspec_from_json(j["q"], 2 * c.n, "q");
    if (j.contains("qc")) c.qc = qspec_from_json(j["qc"], 4 * c.n, "qc");
    if (j.contains("output")) {
      c.out_json = j["output"].value("json", "");
      c.out_csv = j["output"].value("csv", "");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed configuration: ") + e.what());
  }
}

/// Coefficient fields described by the configuration; random sources draw
/// `instances` fields with n cycling through n_values.
inline std::vector<CoefficientField> make_fields(const RunConfig& c, Rng& rng) {
  const IntegerInterval iv(c.a, c.b);
  switch (c.source) {
    case Source::constant:
      return {CoefficientField::constant(c.n, iv, *c.constant_blocks)};
    case Source::per_site:
      return {CoefficientField(c.n, iv, c.per_site)};
    case Source::free:
      return {CoefficientField::free_system(c.n, iv, c.free_weight)};
    case Source::random: {
      std::vector<CoefficientField> out;
      const std::vector<int> ns = c.n_values.empty() ? std::vector<int>{c.n} : c.n_values;
      for (int k = 0; k < c.instances; ++k) {
        RandomSystemOptions o = c.random;
        o.n = ns[static_cast<std::size_t>(k) % ns.size()];
        o.a = c.a;
        o.sites = rng.integer(static_cast<int>(c.sites_min), static_cast<int>(c.sites_max));
        out.push_back(c.require_definite ? random_definite_field(o, rng, {0.0}, c.tol) : random_field(o, rng));
      }
      return out;
    }
  }
  throw InputError("unknown coefficient source");
}

inline HalfLineSystem make_halfline(const RunConfig& c) {
  if (!c.halfline) throw InputError("command needs a 'halfline' section");
  const auto& h = *c.halfline;
  if (h.generator == "free") return HalfLineSystem::free_system(c.n, c.a);
  if (h.generator == "decaying_weight") return HalfLineSystem::decaying_weight(c.n, c.a);
  return HalfLineSystem::constant(c.n, c.a, *h.blocks);
}

// ---------------------------------------------------------------------------
// Encoding

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(to_json(v(k)));
  return a;
}

inline json to_json(const RealVec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

inline json to_json(const Trajectory& y) {
  json a = json::array();
  for (const auto& v : y.values) a.push_back(to_json(v));
  return a;
}

}  // namespace dhs
