#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace repsale {

// Restriction of a distribution to one side of a cut point.
struct Truncation {
  enum class Side { below, above };
  Side side;
  double x;

  static Truncation below(double x) { return {Side::below, x}; }
  static Truncation above(double x) { return {Side::above, x}; }
};

struct PriceRevenue {
  double price;
  double revenue;
};

struct RegularityReport {
  bool pass;
  double worst_second_difference;
  double worst_location;
  int grid_n;
};

// Atomless value distribution on [0,1]. Cheap to copy; immutable.
class Distribution {
 public:
  enum class Kind { uniform01, power, table };

  static Distribution uniform();
  // F(v) = v^c.
  static Distribution power(double c);
  // Monotone cubic interpolation through (value, cdf) knots.
  static Distribution table(std::vector<double> values, std::vector<double> cdf);
  static Distribution table_from_csv(const std::string& path);

  Kind kind() const;
  std::string describe() const;
  double exponent() const;  // power only

  double cdf(double v) const;
  double pdf(double v) const;
  // R'(p) = 1 - F(p) - p f(p).
  double marginal_revenue(double p) const;
  // Smallest v with F(v) >= q.
  double quantile(double q) const;
  // Integral of v dF over [a, b].
  double partial_mean(double a, double b) const;
  double mean() const;

  double revenue(double p, std::optional<Truncation> trunc = std::nullopt) const;
  PriceRevenue monopoly(std::optional<Truncation> trunc = std::nullopt) const;
  double p_star() const;
  double r_star() const;
  bool regular() const;

  // argmax of p (level - F(p)) over [lo, hi]; unique when the distribution is regular.
  double argmax_scaled(double level, double lo, double hi) const;

  RegularityReport validate_regularity(int grid_n) const;

 private:
  struct Impl;
  explicit Distribution(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// Parses "uniform", "power:<c>" or "table:<path>".
Distribution parse_distribution(const std::string& spec);

}  // namespace repsale
