#pragma once

// Prescribed coefficient sequences C = {c_n} and weakening sequences
// tau = {t_n}, 1-indexed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "greedex/error.hpp"

namespace greedex {

class CoefficientSequence {
 public:
  enum class Kind { Harmonic, Power, Explicit, Adversarial };

  /// c_n = scale / n
  static CoefficientSequence harmonic(double scale = 1.0) {
    require_positive(scale, "scale");
    return CoefficientSequence(Kind::Harmonic, scale, 1.0, nullptr);
  }

  /// c_n = scale * n^(-alpha)
  static CoefficientSequence power(double alpha, double scale = 1.0) {
    require_positive(alpha, "alpha");
    require_positive(scale, "scale");
    return CoefficientSequence(Kind::Power, scale, alpha, nullptr);
  }

  static CoefficientSequence explicit_values(std::vector<double> values) {
    return CoefficientSequence(Kind::Explicit, 1.0, 0.0, checked(std::move(values)));
  }

  /// Explicit values produced by the divergence construction.
  static CoefficientSequence adversarial(std::vector<double> values) {
    return CoefficientSequence(Kind::Adversarial, 1.0, 0.0, checked(std::move(values)));
  }

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  double alpha() const { return alpha_; }

  /// Number of terms for Explicit/Adversarial; nullopt for infinite kinds.
  std::optional<std::size_t> length() const {
    if (values_) return values_->size();
    return std::nullopt;
  }

  const std::vector<double>* values() const { return values_.get(); }

  double operator()(std::size_t n) const {
    if (n == 0) throw Error(ErrorKind::ConfigInvalid, "sequences are indexed from 1");
    switch (kind_) {
      case Kind::Harmonic: return scale_ / static_cast<double>(n);
      case Kind::Power: return scale_ * std::pow(static_cast<double>(n), -alpha_);
      case Kind::Explicit:
      case Kind::Adversarial:
        if (n > values_->size()) {
          throw Error(ErrorKind::IndexPastEnd,
                      "coefficient " + std::to_string(n) + " requested from a sequence of length " +
                          std::to_string(values_->size()));
        }
        return (*values_)[n - 1];
    }
    return 0.0;
  }

  std::string_view kind_name() const {
    switch (kind_) {
      case Kind::Harmonic: return "harmonic";
      case Kind::Power: return "power";
      case Kind::Explicit: return "explicit";
      case Kind::Adversarial: return "adversarial";
    }
    return "unknown";
  }

 private:
  CoefficientSequence(Kind k, double scale, double alpha, std::shared_ptr<const std::vector<double>> v)
      : kind_(k), scale_(scale), alpha_(alpha), values_(std::move(v)) {}

  static void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorKind::ConfigInvalid, std::string(what) + " must be positive and finite");
    }
  }

  static std::shared_ptr<const std::vector<double>> checked(std::vector<double> v) {
    for (double x : v) require_positive(x, "coefficient");
    return std::make_shared<const std::vector<double>>(std::move(v));
  }

  Kind kind_;
  double scale_;
  double alpha_;
  std::shared_ptr<const std::vector<double>> values_;
};

class WeakeningSequence {
 public:
  enum class Kind { Constant, Explicit };

  static WeakeningSequence constant(double t) {
    require_unit(t);
    return WeakeningSequence(Kind::Constant, t, nullptr);
  }

  static WeakeningSequence explicit_values(std::vector<double> values) {
    for (double t : values) require_unit(t);
    return WeakeningSequence(Kind::Explicit, 0.0,
                             std::make_shared<const std::vector<double>>(std::move(values)));
  }

  Kind kind() const { return kind_; }
  double constant_value() const { return t_; }
  const std::vector<double>* values() const { return values_.get(); }

  std::optional<std::size_t> length() const {
    if (values_) return values_->size();
    return std::nullopt;
  }

  double operator()(std::size_t n) const {
    if (n == 0) throw Error(ErrorKind::ConfigInvalid, "sequences are indexed from 1");
    if (kind_ == Kind::Constant) return t_;
    if (n > values_->size()) {
      throw Error(ErrorKind::IndexPastEnd,
                  "weakening term " + std::to_string(n) + " requested from a sequence of length " +
                      std::to_string(values_->size()));
    }
    return (*values_)[n - 1];
  }

 private:
  WeakeningSequence(Kind k, double t, std::shared_ptr<const std::vector<double>> v)
      : kind_(k), t_(t), values_(std::move(v)) {}

  static void require_unit(double t) {
    if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorKind::ConfigInvalid, "weakening terms must lie in (0, 1]");
  }

  Kind kind_;
  double t_;
  std::shared_ptr<const std::vector<double>> values_;
};

inline double eval(const CoefficientSequence& c, std::size_t n) { return c(n); }
inline double eval(const WeakeningSequence& t, std::size_t n) { return t(n); }

/// Finite-prefix diagnostics for the conditions
///   sum c_n t_n = infinity   and   c_n / t_n -> 0.
/// Both flags are heuristics; nullopt means the horizon is too short to say.
struct ConditionReport {
  std::size_t horizon = 0;
  double partial_sum = 0.0;            // sum_{n <= horizon} c_n t_n
  double tail_max_ratio = 0.0;         // max c_n / t_n over the last 10% of the horizon
  double half_tail_max_ratio = 0.0;    // same, at half the horizon
  std::vector<std::pair<std::size_t, double>> checkpoints;  // (n, partial sum) at H/8, H/4, H/2, H
  std::optional<bool> divergence_plausible;
  std::optional<bool> ratio_vanishing;
  std::string note;
};

namespace detail {

inline double tail_max_ratio(const CoefficientSequence& c, const WeakeningSequence& t, std::size_t horizon) {
  const std::size_t width = std::max<std::size_t>(1, (horizon + 9) / 10);
  double m = 0.0;
  for (std::size_t n = horizon - width + 1; n <= horizon; ++n) m = std::max(m, c(n) / t(n));
  return m;
}

}  // namespace detail

inline ConditionReport check_conditions(const CoefficientSequence& c, const WeakeningSequence& t,
                                        std::size_t horizon) {
  if (horizon == 0) throw Error(ErrorKind::ConfigInvalid, "horizon must be >= 1");
  ConditionReport r;
  r.horizon = horizon;
  if (auto len = c.length()) r.horizon = std::min(r.horizon, *len);
  if (auto len = t.length()) r.horizon = std::min(r.horizon, *len);
  r.note =
      "heuristic finite-prefix diagnostics: divergence is judged from partial-sum growth over "
      "doubling windows, vanishing from the tail max of c_n/t_n at H versus H/2; neither is a proof";
  if (r.horizon == 0) return r;

  const std::size_t h = r.horizon;
  const std::size_t marks[] = {h / 8, h / 4, h / 2, h};
  double sum = 0.0;
  std::size_t next = 0;
  for (std::size_t n = 1; n <= h; ++n) {
    sum += c(n) * t(n);
    while (next < 4 && marks[next] == n) {
      r.checkpoints.emplace_back(n, sum);
      ++next;
    }
  }
  r.partial_sum = sum;
  r.tail_max_ratio = detail::tail_max_ratio(c, t, h);

  if (h < 16) {
    r.half_tail_max_ratio = h >= 2 ? detail::tail_max_ratio(c, t, h / 2) : r.tail_max_ratio;
    r.note += "; horizon < 16, flags indeterminate";
    return r;
  }
  r.half_tail_max_ratio = detail::tail_max_ratio(c, t, h / 2);

  // Window increments over (H/8, H/4], (H/4, H/2], (H/2, H]. A convergent
  // series shows geometrically shrinking increments; a divergent one like
  // sum 1/n shows roughly constant or growing increments.
  const double d3 = r.checkpoints[1].second - r.checkpoints[0].second;
  const double d2 = r.checkpoints[2].second - r.checkpoints[1].second;
  const double d1 = r.checkpoints[3].second - r.checkpoints[2].second;
  r.divergence_plausible = d1 >= 0.9 * d2 && d2 >= 0.9 * d3;
  r.ratio_vanishing = r.tail_max_ratio < r.half_tail_max_ratio;
  return r;
}

}  // namespace greedex
