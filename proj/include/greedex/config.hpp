#pragma once

// Experiment configuration documents (JSON). Schema:
//
//   {
//     "target":       {"coords": <vector>} | {"file": "path.json"}
//                   | {"counterexample": {"t": 0.5, "groups": 4, "k": 2}},
//     "dictionary":   <dictionary spec>,
//     "coefficients": {"kind": "harmonic", "scale": 1}
//                   | {"kind": "power", "alpha": 0.6, "scale": 1}
//                   | {"kind": "explicit", "values": [...]} | {"kind": "explicit", "csv": "c.csv"},
//     "weakening":    {"kind": "constant_t", "t": 1} | {"kind": "explicit", "values": [...]}
//                   | {"kind": "explicit", "csv": "t.csv"},
//     "policy":       "max_greedy" | "weakest_admissible"
//                   | {"kind": "scripted", "plan": ["+e1", "-e2", ...]},
//     "max_steps":    1000,
//     "early_exit":   1e-6,            (optional)
//     "seed":         0,               (GREEDY_SEED overrides)
//     "output":       {"trace": "trace.csv", "meta": "trace.meta.json", "json": "trace.json"}
//   }
//
// Dictionary specs:
//   {"kind": "onb"}
//   {"kind": "finite", "atoms": [<vector>, ...]}
//   {"kind": "random_finite", "dim": 3, "count": 8}          (uses the seed)
//   {"kind": "augmented_onb", "e_prime": [1, 2, 3], "extra": [<vector>, ...]}
//   {"kind": "direct_sum", "components": [<dictionary spec>, ...]}
//   {"kind": "pushforward", "base": <dictionary spec>, "matrix": [[row], ...]}
//   {"kind": "pushforward", "base": <dictionary spec>, "random_orthogonal": 4}
//
// A <vector> is either [[index, value], ...] with [block, index] pairs for
// direct-sum coordinates, or a dense array of numbers.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "greedex/counterexample.hpp"
#include "greedex/dictionary.hpp"
#include "greedex/error.hpp"
#include "greedex/greedy.hpp"
#include "greedex/io.hpp"
#include "greedex/sequences.hpp"

namespace greedex {

struct OutputPaths {
  std::filesystem::path trace;
  std::filesystem::path meta;
  std::optional<std::filesystem::path> json;
};

struct ExperimentConfig {
  SparseVector target;
  DictionaryPtr dictionary;
  CoefficientSequence coefficients = CoefficientSequence::harmonic();
  WeakeningSequence weakening = WeakeningSequence::constant(1.0);
  SelectionPolicy policy = MaxGreedy{};
  std::size_t max_steps = 1000;
  std::optional<double> early_exit;
  std::uint64_t seed = 0;
  OutputPaths output;
  json raw;  // echoed into the metadata sidecar
};

namespace detail {

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::ConfigInvalid, std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

inline std::string kind_of(const json& j) {
  const auto& k = require(j, "kind");
  if (!k.is_string()) throw Error(ErrorKind::ConfigInvalid, "'kind' must be a string");
  return k.get<std::string>();
}

inline double number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw Error(ErrorKind::ConfigInvalid, std::string("missing key '") + key + "'");
  }
  if (!j.at(key).is_number()) throw Error(ErrorKind::ConfigInvalid, std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline std::uint64_t count(const json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw Error(ErrorKind::ConfigInvalid, std::string("'") + key + "' must be a positive integer");
  }
  return v.get<std::uint64_t>();
}

inline std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace detail

/// One value per line; blank lines and lines starting with '#' are ignored.
inline std::vector<double> read_value_csv(const std::filesystem::path& p) {
  std::istringstream in(detail::slurp(p));
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == ',')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    try {
      out.push_back(parse_double(line));
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigInvalid, p.string() + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<double> values_or_csv(const json& j, const std::filesystem::path& base_dir) {
  if (j.contains("values")) {
    const auto& v = j.at("values");
    if (!v.is_array()) throw Error(ErrorKind::ConfigInvalid, "'values' must be an array");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw Error(ErrorKind::ConfigInvalid, "'values' entries must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  if (j.contains("csv")) return read_value_csv(detail::resolve(base_dir, detail::require(j, "csv").get<std::string>()));
  throw Error(ErrorKind::ConfigInvalid, "explicit sequence needs 'values' or 'csv'");
}

inline CoefficientSequence parse_coefficients(const json& j, const std::filesystem::path& base_dir = ".") {
  const auto kind = detail::kind_of(j);
  if (kind == "harmonic") return CoefficientSequence::harmonic(detail::number(j, "scale", 1.0));
  if (kind == "power") return CoefficientSequence::power(detail::number(j, "alpha"), detail::number(j, "scale", 1.0));
  if (kind == "explicit") return CoefficientSequence::explicit_values(values_or_csv(j, base_dir));
  throw Error(ErrorKind::ConfigInvalid, "unknown coefficient kind '" + kind + "'");
}

inline WeakeningSequence parse_weakening(const json& j, const std::filesystem::path& base_dir = ".") {
  const auto kind = detail::kind_of(j);
  if (kind == "constant_t" || kind == "constant") return WeakeningSequence::constant(detail::number(j, "t"));
  if (kind == "explicit" || kind == "explicit_t") return WeakeningSequence::explicit_values(values_or_csv(j, base_dir));
  throw Error(ErrorKind::ConfigInvalid, "unknown weakening kind '" + kind + "'");
}

inline std::vector<SparseVector> parse_atom_list(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ConfigInvalid, "atom list must be an array");
  std::vector<SparseVector> atoms;
  for (const auto& a : j) atoms.push_back(sparse_from_json(a));
  return atoms;
}

inline Eigen::MatrixXd parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::ConfigInvalid, "matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::ConfigInvalid, "matrix rows must have equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[static_cast<std::size_t>(c)].is_number()) throw Error(ErrorKind::ConfigInvalid, "matrix entries must be numbers");
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

inline Dictionary parse_dictionary(const json& j, std::uint64_t seed = 0) {
  const auto kind = detail::kind_of(j);
  if (kind == "onb" || kind == "symmetrized_onb") return make_symmetrized_onb();
  if (kind == "finite") return make_finite(parse_atom_list(detail::require(j, "atoms")));
  if (kind == "random_finite") {
    return make_finite(random_atoms(detail::count(j, "dim"), detail::count(j, "count"), seed));
  }
  if (kind == "augmented_onb") {
    std::vector<std::uint64_t> e_prime;
    const auto& ep = detail::require(j, "e_prime");
    if (!ep.is_array()) throw Error(ErrorKind::ConfigInvalid, "'e_prime' must be an array");
    for (const auto& i : ep) {
      if (!i.is_number_integer() || i.get<long long>() < 1) throw Error(ErrorKind::ConfigInvalid, "bad E' index");
      e_prime.push_back(i.get<std::uint64_t>());
    }
    std::vector<SparseVector> extra;
    if (j.contains("extra")) extra = parse_atom_list(j.at("extra"));
    return make_augmented_onb(std::move(e_prime), extra);
  }
  if (kind == "direct_sum") {
    const auto& comps = detail::require(j, "components");
    if (!comps.is_array()) throw Error(ErrorKind::ConfigInvalid, "'components' must be an array");
    std::vector<DictionaryPtr> parts;
    std::uint64_t sub_seed = seed;
    for (const auto& c : comps) parts.push_back(std::make_shared<const Dictionary>(parse_dictionary(c, sub_seed++)));
    return direct_sum(std::move(parts));
  }
  if (kind == "pushforward") {
    const auto base = parse_dictionary(detail::require(j, "base"), seed);
    if (j.contains("matrix")) return pushforward(base, parse_matrix(j.at("matrix")));
    if (j.contains("random_orthogonal")) {
      return pushforward(base, random_orthogonal(detail::count(j, "random_orthogonal"), seed + 1));
    }
    throw Error(ErrorKind::ConfigInvalid, "pushforward needs 'matrix' or 'random_orthogonal'");
  }
  throw Error(ErrorKind::ConfigInvalid, "unknown dictionary kind '" + kind + "'");
}

inline SelectionPolicy parse_policy(const json& j) {
  std::string kind;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else {
    kind = detail::kind_of(j);
  }
  if (kind == "max_greedy") return MaxGreedy{};
  if (kind == "weakest_admissible") return WeakestAdmissible{};
  if (kind == "scripted") {
    if (!j.is_object()) throw Error(ErrorKind::ConfigInvalid, "scripted policy needs a 'plan'");
    const auto& plan = detail::require(j, "plan");
    if (!plan.is_array()) throw Error(ErrorKind::ConfigInvalid, "'plan' must be an array of atom ids");
    Scripted s;
    for (const auto& id : plan) {
      if (!id.is_string()) throw Error(ErrorKind::ConfigInvalid, "atom ids must be strings");
      try {
        s.plan.push_back(AtomId::parse(id.get<std::string>()));
      } catch (const Error& e) {
        throw Error(ErrorKind::ConfigInvalid, e.what());
      }
    }
    return s;
  }
  throw Error(ErrorKind::ConfigInvalid, "unknown policy '" + kind + "'");
}

inline SparseVector parse_target(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigInvalid, "'target' must be an object");
  if (j.contains("coords")) return sparse_from_json(j.at("coords"));
  if (j.contains("file")) {
    const auto path = detail::resolve(base_dir, j.at("file").get<std::string>());
    json doc;
    try {
      doc = json::parse(detail::slurp(path));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ConfigInvalid, path.string() + ": " + e.what());
    }
    return sparse_from_json(doc.is_object() && doc.contains("coords") ? doc.at("coords") : doc);
  }
  if (j.contains("counterexample")) {
    const auto& ce = j.at("counterexample");
    std::optional<unsigned> k;
    if (ce.contains("k")) k = static_cast<unsigned>(detail::count(ce, "k"));
    return build_target(make_counterexample_config(detail::number(ce, "t"),
                                                   static_cast<unsigned>(detail::count(ce, "groups")), k));
  }
  throw Error(ErrorKind::ConfigInvalid, "target needs 'coords', 'file' or 'counterexample'");
}

/// Parses a config document; relative paths resolve against `base_dir`.
/// `seed_override` (from GREEDY_SEED) replaces the document's seed.
inline ExperimentConfig parse_experiment(const json& j, const std::filesystem::path& base_dir,
                                         std::optional<std::uint64_t> seed_override = std::nullopt) {
  try {
    if (!j.is_object()) throw Error(ErrorKind::ConfigInvalid, "config must be a JSON object");
    ExperimentConfig cfg;
    cfg.raw = j;
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_integer()) throw Error(ErrorKind::ConfigInvalid, "'seed' must be an integer");
      cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (seed_override) cfg.seed = *seed_override;
    cfg.target = parse_target(detail::require(j, "target"), base_dir);
    cfg.dictionary = std::make_shared<const Dictionary>(parse_dictionary(detail::require(j, "dictionary"), cfg.seed));
    cfg.coefficients = parse_coefficients(detail::require(j, "coefficients"), base_dir);
    if (j.contains("weakening")) cfg.weakening = parse_weakening(j.at("weakening"), base_dir);
    if (j.contains("policy")) cfg.policy = parse_policy(j.at("policy"));
    if (j.contains("max_steps")) {
      const auto& ms = j.at("max_steps");
      if (!ms.is_number_integer() || ms.get<long long>() < 0) {
        throw Error(ErrorKind::ConfigInvalid, "'max_steps' must be a non-negative integer");
      }
      cfg.max_steps = ms.get<std::size_t>();
    }
    if (j.contains("early_exit") && !j.at("early_exit").is_null()) cfg.early_exit = detail::number(j, "early_exit");
    cfg.output.trace = "trace.csv";
    if (j.contains("output")) {
      const auto& o = j.at("output");
      if (o.contains("trace")) cfg.output.trace = detail::resolve(base_dir, o.at("trace").get<std::string>());
      if (o.contains("meta")) cfg.output.meta = detail::resolve(base_dir, o.at("meta").get<std::string>());
      if (o.contains("json")) cfg.output.json = detail::resolve(base_dir, o.at("json").get<std::string>());
    }
    if (cfg.output.meta.empty()) cfg.output.meta = std::filesystem::path(cfg.output.trace.string() + ".meta.json");
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, e.what());
  }
}

inline ExperimentConfig load_experiment(const std::filesystem::path& path,
                                        std::optional<std::uint64_t> seed_override = std::nullopt) {
  json doc;
  try {
    doc = json::parse(detail::slurp(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, path.string() + ": " + e.what());
  }
  return parse_experiment(doc, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path(),
                          seed_override);
}

/// GREEDY_SEED, when set to an unsigned integer.
inline std::optional<std::uint64_t> seed_from_env() {
  const char* s = std::getenv("GREEDY_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const auto v = std::strtoull(s, &end, 10);
  if (*end != '\0') throw Error(ErrorKind::ConfigInvalid, "GREEDY_SEED must be an unsigned integer");
  return v;
}

}  // namespace greedex
