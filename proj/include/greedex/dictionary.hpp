#pragma once

// Symmetric dictionaries as selection oracles. A dictionary answers three
// questions about a remainder f: the value of sup_g <f, g>, which atom attains
// it, and which atoms pass the weakened selection rule
//
//     <f, phi> >= t * sup_g <f, g>.
//
// Five constructions are supported: the symmetrized canonical basis, finite
// symmetrized atom sets, the canonical basis augmented with atoms supported on
// a finite index set, direct sums, and pushforwards through orthogonal maps.

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "greedex/core.hpp"
#include "greedex/error.hpp"

namespace greedex {

/// Absolute slack on the selection rule. Equality steps must not fail on rounding.
inline constexpr double kAdmissibilityTol = 1e-12;

/// Identifier of a dictionary element.
///
/// Basis atoms are +-e_i, dense atoms are +-y_k (the k-th caller-supplied atom),
/// and a nonzero `block` wraps either into one summand of a direct sum.
/// The derived ordering (block, kind, index, sign with + first) is the
/// tie-breaking order used by every selection routine.
struct AtomId {
  enum class Kind : std::uint8_t { Basis = 0, Dense = 1 };

  std::uint32_t block = 0;
  Kind kind = Kind::Basis;
  std::uint64_t index = 1;
  bool negative = false;

  static constexpr AtomId basis(std::uint64_t i, bool neg = false) {
    return AtomId{0, Kind::Basis, i, neg};
  }
  static constexpr AtomId dense(std::uint64_t k, bool neg = false) {
    return AtomId{0, Kind::Dense, k, neg};
  }

  constexpr AtomId negated() const {
    AtomId id = *this;
    id.negative = !id.negative;
    return id;
  }
  constexpr AtomId unwrapped() const {
    AtomId id = *this;
    id.block = 0;
    return id;
  }
  constexpr AtomId in_block(std::uint32_t b) const {
    AtomId id = *this;
    id.block = b;
    return id;
  }

  constexpr auto operator<=>(const AtomId&) const = default;

  /// "+e12", "-e3", "+y4", "b2:+e1".
  std::string to_string() const {
    std::string s;
    if (block != 0) s += "b" + std::to_string(block) + ":";
    s += negative ? '-' : '+';
    s += kind == Kind::Basis ? 'e' : 'y';
    s += std::to_string(index);
    return s;
  }

  /// Accepts the format of to_string(); a missing sign means '+'.
  static AtomId parse(std::string_view text) {
    auto fail = [&] {
      return Error(ErrorKind::ParseError, "bad atom id '" + std::string(text) + "'");
    };
    AtomId id;
    std::string_view rest = text;
    if (!rest.empty() && rest.front() == 'b') {
      auto colon = rest.find(':');
      if (colon == std::string_view::npos) throw fail();
      std::uint32_t b = 0;
      auto num = rest.substr(1, colon - 1);
      auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), b);
      if (ec != std::errc{} || p != num.data() + num.size() || b == 0) throw fail();
      id.block = b;
      rest = rest.substr(colon + 1);
    }
    if (!rest.empty() && (rest.front() == '+' || rest.front() == '-')) {
      id.negative = rest.front() == '-';
      rest.remove_prefix(1);
    }
    if (rest.empty()) throw fail();
    if (rest.front() == 'e') {
      id.kind = Kind::Basis;
    } else if (rest.front() == 'y') {
      id.kind = Kind::Dense;
    } else {
      throw fail();
    }
    rest.remove_prefix(1);
    std::uint64_t i = 0;
    auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), i);
    if (ec != std::errc{} || p != rest.data() + rest.size() || i == 0) throw fail();
    id.index = i;
    return id;
  }
};

struct Atom {
  AtomId id;
  SparseVector vector;

  Atom negated() const { return Atom{id.negated(), -vector}; }
  Atom in_block(std::uint32_t b) const { return Atom{id.in_block(b), vector.lift_to_block(b)}; }

  bool operator==(const Atom&) const = default;
};

struct SupResult {
  double value = 0.0;
  Atom witness;
};

struct CoherenceEstimate {
  double value = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

class Dictionary;
using DictionaryPtr = std::shared_ptr<const Dictionary>;

/// Immutable after construction; all queries are const.
class Dictionary {
 public:
  enum class Kind { SymmetrizedOnb, Finite, AugmentedOnb, DirectSum, Pushforward };

  Kind kind() const { return kind_; }

  /// Positive-sign representatives for Finite and Pushforward; empty otherwise.
  const std::vector<Atom>& generators() const {
    static const std::vector<Atom> none;
    if (auto* g = std::get_if<Generators>(&data_)) return g->atoms;
    return none;
  }

  /// Extra atoms of an augmented basis; empty otherwise.
  const std::vector<Atom>& extra_atoms() const {
    static const std::vector<Atom> none;
    if (auto* a = std::get_if<Augmented>(&data_)) return a->extra;
    return none;
  }

  /// Declared finite index set of an augmented basis.
  const std::vector<std::uint64_t>& e_prime() const {
    static const std::vector<std::uint64_t> none;
    if (auto* a = std::get_if<Augmented>(&data_)) return a->e_prime;
    return none;
  }

  const std::vector<DictionaryPtr>& components() const {
    static const std::vector<DictionaryPtr> none;
    if (auto* s = std::get_if<Sum>(&data_)) return s->parts;
    return none;
  }

  /// Orthogonal matrix of a pushforward.
  const std::optional<Eigen::MatrixXd>& matrix() const { return matrix_; }

  std::string_view kind_name() const {
    switch (kind_) {
      case Kind::SymmetrizedOnb: return "symmetrized_onb";
      case Kind::Finite: return "finite";
      case Kind::AugmentedOnb: return "augmented_onb";
      case Kind::DirectSum: return "direct_sum";
      case Kind::Pushforward: return "pushforward";
    }
    return "unknown";
  }

 private:
  struct Onb {};
  struct Generators {
    std::vector<Atom> atoms;
  };
  struct Augmented {
    std::vector<std::uint64_t> e_prime;
    std::vector<Atom> extra;
  };
  struct Sum {
    std::vector<DictionaryPtr> parts;
  };

  Dictionary(Kind kind, std::variant<Onb, Generators, Augmented, Sum> data)
      : kind_(kind), data_(std::move(data)) {}

  Kind kind_;
  std::variant<Onb, Generators, Augmented, Sum> data_;
  std::optional<Eigen::MatrixXd> matrix_;

  friend Dictionary make_symmetrized_onb();
  friend Dictionary make_finite(const std::vector<SparseVector>& atoms);
  friend Dictionary make_augmented_onb(std::vector<std::uint64_t> e_prime,
                                       const std::vector<SparseVector>& extra);
  friend Dictionary direct_sum(std::vector<DictionaryPtr> components);
  friend Dictionary pushforward(const Dictionary& base, const Eigen::MatrixXd& q);
};

// ---------------------------------------------------------------------------

namespace detail {

inline SparseVector normalized(const SparseVector& v) {
  const double n = norm(v);
  if (n < 1e-12) throw Error(ErrorKind::ZeroAtom, "atom has (numerically) zero norm");
  if (n == 1.0) return v;
  std::vector<Entry> out(v.entries().begin(), v.entries().end());
  for (auto& e : out) e.value /= n;
  return SparseVector::from_sorted_unchecked(std::move(out));
}

inline void require_plain(const SparseVector& v) {
  for (const auto& e : v.entries()) {
    if (!e.id.is_plain()) {
      throw Error(ErrorKind::ConfigInvalid, "dictionary atoms must use plain coordinates");
    }
  }
}

// Best signed atom among +-g over generators; ties keep the smallest id.
inline std::optional<SupResult> best_over(const std::vector<Atom>& gens, const SparseVector& f) {
  std::optional<SupResult> best;
  for (const auto& g : gens) {
    const double ip = inner(f, g.vector);
    const double value = std::abs(ip);
    if (!best || value > best->value) {
      best = SupResult{value, ip >= 0.0 ? g : g.negated()};
    }
  }
  return best;
}

// max |x_i| over the plain support, smallest index on ties.
inline std::optional<SupResult> best_over_basis(const SparseVector& f) {
  const Entry* best = nullptr;
  for (const auto& e : f.entries()) {
    if (!e.id.is_plain()) continue;
    if (!best || std::abs(e.value) > std::abs(best->value)) best = &e;
  }
  if (!best) return std::nullopt;
  const bool neg = best->value < 0.0;
  return SupResult{std::abs(best->value),
                   Atom{AtomId::basis(best->id.index, neg), basis(best->id.index, neg ? -1.0 : 1.0)}};
}

inline void collect_basis(const SparseVector& f, double threshold, std::vector<Atom>& out) {
  for (const auto& e : f.entries()) {
    if (!e.id.is_plain()) continue;
    if (std::abs(e.value) >= threshold) {
      const bool neg = e.value < 0.0;
      out.push_back(Atom{AtomId::basis(e.id.index, neg), basis(e.id.index, neg ? -1.0 : 1.0)});
    }
  }
}

inline void collect_generators(const std::vector<Atom>& gens, const SparseVector& f,
                               double threshold, std::vector<Atom>& out) {
  for (const auto& g : gens) {
    const double ip = inner(f, g.vector);
    if (ip >= threshold) out.push_back(g);
    if (-ip >= threshold) out.push_back(g.negated());
  }
}

inline std::optional<Atom> find_generator(const std::vector<Atom>& gens, const AtomId& id) {
  const AtomId key = id.negative ? id.negated() : id;
  auto it = std::lower_bound(gens.begin(), gens.end(), key,
                             [](const Atom& a, const AtomId& k) { return a.id < k; });
  if (it == gens.end() || it->id != key) return std::nullopt;
  return id.negative ? it->negated() : *it;
}

inline std::vector<Atom> dense_generators(const std::vector<SparseVector>& atoms) {
  std::vector<Atom> gens;
  gens.reserve(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    require_plain(atoms[k]);
    gens.push_back(Atom{AtomId::dense(k + 1), normalized(atoms[k])});
  }
  return gens;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constructors

/// D = {e_i} U {-e_i} over the canonical basis. Nothing is materialized.
inline Dictionary make_symmetrized_onb() {
  return Dictionary(Dictionary::Kind::SymmetrizedOnb, Dictionary::Onb{});
}

/// Symmetrization of a caller-supplied atom list. Atoms are renormalized on
/// ingest; spanning the space is the caller's responsibility.
inline Dictionary make_finite(const std::vector<SparseVector>& atoms) {
  if (atoms.empty()) throw Error(ErrorKind::ConfigInvalid, "finite dictionary needs at least one atom");
  return Dictionary(Dictionary::Kind::Finite, Dictionary::Generators{detail::dense_generators(atoms)});
}

/// E^{+-} U Y^{+-} where every y in Y lies in the span of {e_i : i in E'}.
inline Dictionary make_augmented_onb(std::vector<std::uint64_t> e_prime,
                                     const std::vector<SparseVector>& extra) {
  std::sort(e_prime.begin(), e_prime.end());
  e_prime.erase(std::unique(e_prime.begin(), e_prime.end()), e_prime.end());
  for (const auto& y : extra) {
    for (const auto& e : y.entries()) {
      if (!e.id.is_plain() || !std::binary_search(e_prime.begin(), e_prime.end(), e.id.index)) {
        throw Error(ErrorKind::SupportOutsideEPrime,
                    "extra atom touches index " + std::to_string(e.id.index) + " outside E'");
      }
    }
  }
  return Dictionary(Dictionary::Kind::AugmentedOnb,
                    Dictionary::Augmented{std::move(e_prime), detail::dense_generators(extra)});
}

/// Blockwise union: component l contributes the atoms (0, ..., phi, ..., 0).
inline Dictionary direct_sum(std::vector<DictionaryPtr> components) {
  if (components.empty()) throw Error(ErrorKind::ConfigInvalid, "direct sum needs at least one component");
  for (const auto& c : components) {
    if (!c) throw Error(ErrorKind::ConfigInvalid, "null direct-sum component");
    if (c->kind() == Dictionary::Kind::DirectSum) {
      throw Error(ErrorKind::Unsupported, "nested direct sums");
    }
  }
  return Dictionary(Dictionary::Kind::DirectSum, Dictionary::Sum{std::move(components)});
}

/// Positive representatives of `d` restricted to indices 1..dim.
inline std::vector<Atom> materialize(const Dictionary& d, std::uint64_t dim) {
  std::vector<Atom> out;
  auto add_basis = [&] {
    for (std::uint64_t i = 1; i <= dim; ++i) out.push_back(Atom{AtomId::basis(i), basis(i)});
  };
  auto add_checked = [&](const std::vector<Atom>& atoms) {
    for (const auto& a : atoms) {
      if (a.vector.max_plain_index() > dim) {
        throw Error(ErrorKind::ConfigInvalid, "atom support exceeds the finite range");
      }
      out.push_back(a);
    }
  };
  switch (d.kind()) {
    case Dictionary::Kind::SymmetrizedOnb:
      add_basis();
      break;
    case Dictionary::Kind::AugmentedOnb:
      add_basis();
      add_checked(d.extra_atoms());
      break;
    case Dictionary::Kind::Finite:
    case Dictionary::Kind::Pushforward:
      add_checked(d.generators());
      break;
    case Dictionary::Kind::DirectSum:
      throw Error(ErrorKind::Unsupported, "cannot materialize a direct sum on a plain range");
  }
  return out;
}

inline void require_orthogonal(const Eigen::MatrixXd& q, double tol = 1e-9) {
  if (q.rows() != q.cols() || q.rows() == 0) {
    throw Error(ErrorKind::NotOrthogonal, "matrix must be square and nonempty");
  }
  const double dev = (q.transpose() * q - Eigen::MatrixXd::Identity(q.rows(), q.cols()))
                         .cwiseAbs()
                         .maxCoeff();
  if (!(dev <= tol)) {
    throw Error(ErrorKind::NotOrthogonal, "max |Q^T Q - I| = " + std::to_string(dev));
  }
}

/// Q x for x supported on plain indices 1..dim(Q).
inline SparseVector transform(const Eigen::MatrixXd& q, const SparseVector& x) {
  const auto dim = static_cast<std::size_t>(q.cols());
  const auto dense = to_dense(x, dim);
  Eigen::VectorXd y = q * Eigen::Map<const Eigen::VectorXd>(dense.data(), static_cast<Eigen::Index>(dim));
  return from_dense(std::span<const double>(y.data(), dim));
}

/// E = {Q phi : phi in D}. Atom ids are carried over unchanged, so selection
/// order on (Q f, E) mirrors selection order on (f, D).
inline Dictionary pushforward(const Dictionary& base, const Eigen::MatrixXd& q) {
  require_orthogonal(q);
  auto reps = materialize(base, static_cast<std::uint64_t>(q.rows()));
  for (auto& a : reps) a.vector = transform(q, a.vector);
  Dictionary d(Dictionary::Kind::Pushforward, Dictionary::Generators{std::move(reps)});
  d.matrix_ = q;
  return d;
}

// ---------------------------------------------------------------------------
// Queries

/// sup_g <f, g> and the smallest-id atom attaining it.
inline SupResult sup_inner(const Dictionary& d, const SparseVector& f) {
  auto empty = [] { return Error(ErrorKind::EmptyVector, "sup over an empty remainder has no witness"); };
  switch (d.kind()) {
    case Dictionary::Kind::SymmetrizedOnb: {
      auto best = detail::best_over_basis(f);
      if (!best) throw empty();
      return *best;
    }
    case Dictionary::Kind::Finite:
    case Dictionary::Kind::Pushforward: {
      if (f.empty()) throw empty();
      return *detail::best_over(d.generators(), f);
    }
    case Dictionary::Kind::AugmentedOnb: {
      if (f.empty()) throw empty();
      auto b = detail::best_over_basis(f);
      auto y = detail::best_over(d.extra_atoms(), f);
      if (b && (!y || b->value >= y->value)) return *b;
      if (y) return *y;
      throw empty();
    }
    case Dictionary::Kind::DirectSum: {
      std::optional<SupResult> best;
      const auto& parts = d.components();
      for (std::size_t l = 0; l < parts.size(); ++l) {
        auto part = f.restrict_block(static_cast<std::uint32_t>(l + 1));
        if (part.empty()) continue;
        auto r = sup_inner(*parts[l], part);
        if (!best || r.value > best->value) {
          best = SupResult{r.value, r.witness.in_block(static_cast<std::uint32_t>(l + 1))};
        }
      }
      if (!best) throw empty();
      return *best;
    }
  }
  throw empty();
}

namespace detail {

inline void collect_at_least(const Dictionary& d, const SparseVector& f, double threshold,
                             std::vector<Atom>& out) {
  switch (d.kind()) {
    case Dictionary::Kind::SymmetrizedOnb:
      collect_basis(f, threshold, out);
      break;
    case Dictionary::Kind::Finite:
    case Dictionary::Kind::Pushforward:
      collect_generators(d.generators(), f, threshold, out);
      break;
    case Dictionary::Kind::AugmentedOnb:
      collect_basis(f, threshold, out);
      collect_generators(d.extra_atoms(), f, threshold, out);
      break;
    case Dictionary::Kind::DirectSum: {
      const auto& parts = d.components();
      for (std::size_t l = 0; l < parts.size(); ++l) {
        const auto b = static_cast<std::uint32_t>(l + 1);
        auto part = f.restrict_block(b);
        if (part.empty()) continue;
        std::vector<Atom> inner_atoms;
        collect_at_least(*parts[l], part, threshold, inner_atoms);
        for (const auto& a : inner_atoms) out.push_back(a.in_block(b));
      }
      break;
    }
  }
}

}  // namespace detail

/// Atoms satisfying <f, a> >= t * sup - kAdmissibilityTol, sorted by id.
/// For the implicit basis dictionaries only atoms meeting the support of f
/// are enumerated (the others have zero inner product).
inline std::vector<Atom> admissible(const Dictionary& d, const SparseVector& f, double t) {
  const double threshold = t * sup_inner(d, f).value - kAdmissibilityTol;
  std::vector<Atom> out;
  detail::collect_at_least(d, f, threshold, out);
  std::sort(out.begin(), out.end(), [](const Atom& a, const Atom& b) { return a.id < b.id; });
  return out;
}

/// Realizes an atom id, or nullopt when `id` is not an element of `d`.
inline std::optional<Atom> find_atom(const Dictionary& d, const AtomId& id) {
  auto signed_basis = [&](const AtomId& i) {
    return Atom{i, basis(i.index, i.negative ? -1.0 : 1.0)};
  };
  switch (d.kind()) {
    case Dictionary::Kind::SymmetrizedOnb:
      if (id.block == 0 && id.kind == AtomId::Kind::Basis) return signed_basis(id);
      return std::nullopt;
    case Dictionary::Kind::Finite:
    case Dictionary::Kind::Pushforward:
      if (id.block != 0) return std::nullopt;
      return detail::find_generator(d.generators(), id);
    case Dictionary::Kind::AugmentedOnb:
      if (id.block != 0) return std::nullopt;
      if (id.kind == AtomId::Kind::Basis) return signed_basis(id);
      return detail::find_generator(d.extra_atoms(), id);
    case Dictionary::Kind::DirectSum: {
      const auto& parts = d.components();
      if (id.block == 0 || id.block > parts.size()) return std::nullopt;
      auto a = find_atom(*parts[id.block - 1], id.unwrapped());
      if (!a) return std::nullopt;
      return a->in_block(id.block);
    }
  }
  return std::nullopt;
}

inline bool contains(const Dictionary& d, const AtomId& id) { return find_atom(d, id).has_value(); }

// ---------------------------------------------------------------------------
// Selection

/// Returns the sup witness.
struct MaxGreedy {};
/// Returns the admissible atom with the smallest inner product: the weakest
/// choice the selection rule permits.
struct WeakestAdmissible {};
/// Returns plan[step - 1], validated against the selection rule.
struct Scripted {
  std::vector<AtomId> plan;
};

using SelectionPolicy = std::variant<MaxGreedy, WeakestAdmissible, Scripted>;

struct Selection {
  Atom atom;
  double ip = 0.0;
  double sup = 0.0;
};

inline Selection select(const Dictionary& d, const SparseVector& f, double t,
                        const SelectionPolicy& policy, std::size_t step = 1) {
  if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorKind::ConfigInvalid, "weakening factor must lie in (0, 1]");
  const SupResult sup = sup_inner(d, f);
  const double threshold = t * sup.value - kAdmissibilityTol;

  if (std::holds_alternative<MaxGreedy>(policy)) {
    return Selection{sup.witness, inner(f, sup.witness.vector), sup.value};
  }
  if (std::holds_alternative<WeakestAdmissible>(policy)) {
    std::vector<Atom> candidates;
    detail::collect_at_least(d, f, threshold, candidates);
    // The tolerance only guards scripted boundary steps; this policy stays
    // on the exact side of the inequality.
    std::optional<Selection> best;
    for (auto& a : candidates) {
      const double ip = inner(f, a.vector);
      if (ip < t * sup.value) continue;
      if (!best || ip < best->ip || (ip == best->ip && a.id < best->atom.id)) {
        best = Selection{std::move(a), ip, sup.value};
      }
    }
    return best ? *best : Selection{sup.witness, inner(f, sup.witness.vector), sup.value};
  }

  const auto& plan = std::get<Scripted>(policy).plan;
  if (step == 0 || step > plan.size()) {
    throw Error(ErrorKind::IndexPastEnd, "scripted plan has no entry for step " + std::to_string(step));
  }
  const AtomId& id = plan[step - 1];
  auto atom = find_atom(d, id);
  if (!atom) {
    throw Error(ErrorKind::NoAdmissibleAtom, "scripted atom " + id.to_string() + " is not in the dictionary");
  }
  const double ip = inner(f, atom->vector);
  if (ip < threshold) {
    throw Error(ErrorKind::NoAdmissibleAtom,
                "scripted atom " + id.to_string() + " at step " + std::to_string(step) +
                    " has <f, a> = " + std::to_string(ip) + " < t * sup = " + std::to_string(t * sup.value));
  }
  return Selection{std::move(*atom), ip, sup.value};
}

// ---------------------------------------------------------------------------
// Finite-range utilities

namespace detail {

inline Eigen::MatrixXd generator_matrix(const std::vector<Atom>& gens, std::uint64_t& dim) {
  dim = 0;
  for (const auto& g : gens) dim = std::max(dim, g.vector.max_plain_index());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(gens.size()));
  for (std::size_t k = 0; k < gens.size(); ++k) {
    for (const auto& e : gens[k].vector.entries()) {
      m(static_cast<Eigen::Index>(e.id.index - 1), static_cast<Eigen::Index>(k)) = e.value;
    }
  }
  return m;
}

inline const std::vector<Atom>& require_generators(const Dictionary& d) {
  if (d.kind() != Dictionary::Kind::Finite && d.kind() != Dictionary::Kind::Pushforward) {
    throw Error(ErrorKind::Unsupported, "operation needs a finite or pushforward dictionary");
  }
  return d.generators();
}

}  // namespace detail

/// Dimension of the span of a finite dictionary. Not enforced anywhere.
inline std::size_t span_rank(const Dictionary& d, double tol = 1e-10) {
  std::uint64_t dim = 0;
  Eigen::MatrixXd m = detail::generator_matrix(detail::require_generators(d), dim);
  if (m.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(tol);
  return static_cast<std::size_t>(qr.rank());
}

/// Sampled estimate of inf_{|f|=1} sup_g <f, g>: the minimum over `samples`
/// uniformly drawn unit vectors. Always an upper bound on the true constant.
inline CoherenceEstimate estimate_coherence(const Dictionary& d, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw Error(ErrorKind::ConfigInvalid, "samples must be >= 1");
  std::uint64_t dim = 0;
  const Eigen::MatrixXd g = detail::generator_matrix(detail::require_generators(d), dim);
  const Eigen::MatrixXd gt = g.transpose();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(dim));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    double n2 = 0.0;
    do {
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
      n2 = x.squaredNorm();
    } while (n2 == 0.0);
    x /= std::sqrt(n2);
    best = std::min(best, (gt * x).cwiseAbs().maxCoeff());
  }
  return CoherenceEstimate{best, samples, seed};
}

/// Haar-distributed orthogonal matrix: QR of a seeded Gaussian matrix with the
/// signs of diag(R) folded into Q.
inline Eigen::MatrixXd random_orthogonal(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

/// `count` Gaussian directions in R^dim, normalized.
inline std::vector<SparseVector> random_atoms(std::size_t dim, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<SparseVector> atoms;
  atoms.reserve(count);
  std::vector<double> x(dim);
  while (atoms.size() < count) {
    for (auto& v : x) v = normal(rng);
    auto v = from_dense(x);
    if (norm(v) < 1e-6) continue;
    atoms.push_back(detail::normalized(v));
  }
  return atoms;
}

}  // namespace greedex
