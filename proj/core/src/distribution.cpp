#include "repsale/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "repsale/errors.hpp"

namespace repsale {

namespace {

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

constexpr int kRegularityGrid = 1024;

// Root of a function that changes sign on [lo, hi], to full double precision.
template <class F>
double solve_bracketed(F f, double lo, double hi, double f_lo, double f_hi) {
  boost::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (a + b);
}

}  // namespace

struct Distribution::Impl {
  Kind kind = Kind::uniform01;
  double c = 1.0;
  std::vector<double> knots_x;
  std::vector<double> knots_y;
  std::optional<Pchip> spline;
  double p_star = 0.5;
  double r_star = 0.25;
  double mean = 0.5;
  bool regular = true;

  double cdf(double v) const {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    switch (kind) {
      case Kind::uniform01:
        return v;
      case Kind::power:
        return std::pow(v, c);
      case Kind::table:
        return std::clamp((*spline)(v), 0.0, 1.0);
    }
    return 0.0;
  }

  double pdf(double v) const {
    if (v < 0.0 || v > 1.0) return 0.0;
    switch (kind) {
      case Kind::uniform01:
        return 1.0;
      case Kind::power:
        return c * std::pow(v, c - 1.0);
      case Kind::table:
        return std::max(0.0, spline->prime(v));
    }
    return 0.0;
  }

  double marginal_revenue(double p) const {
    if (p >= 1.0) return -p * pdf(1.0);
    if (p <= 0.0) return 1.0;
    switch (kind) {
      case Kind::uniform01:
        return 1.0 - 2.0 * p;
      case Kind::power:
        return 1.0 - (1.0 + c) * std::pow(p, c);
      case Kind::table:
        return 1.0 - cdf(p) - p * pdf(p);
    }
    return 0.0;
  }

  double argmax_scaled(double level, double lo, double hi) const {
    if (!(hi > lo)) return lo;
    // d/dp [p (level - F(p))] = level - 1 + R'(p), decreasing under regularity
    auto slope = [&](double p) { return level - 1.0 + marginal_revenue(p); };
    const double s_lo = slope(lo);
    if (s_lo <= 0.0) return lo;
    const double s_hi = slope(hi);
    if (s_hi >= 0.0) return hi;
    return solve_bracketed(slope, lo, hi, s_lo, s_hi);
  }

  double integral_of_cdf(double a, double b) const {
    switch (kind) {
      case Kind::uniform01:
        return 0.5 * (b * b - a * a);
      case Kind::power:
        return (std::pow(b, c + 1.0) - std::pow(a, c + 1.0)) / (c + 1.0);
      case Kind::table: {
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < knots_x.size(); ++i) {
          const double lo = std::max(a, knots_x[i]);
          const double hi = std::min(b, knots_x[i + 1]);
          if (hi <= lo) continue;
          total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
              [this](double v) { return cdf(v); }, lo, hi, 10, 1e-13);
        }
        return total;
      }
    }
    return 0.0;
  }

  void finish() {
    p_star = argmax_scaled(1.0, 0.0, 1.0);
    r_star = p_star * (1.0 - cdf(p_star));
    mean = partial_mean(0.0, 1.0);
  }

  double partial_mean(double a, double b) const {
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
    if (b <= a) return 0.0;
    return b * cdf(b) - a * cdf(a) - integral_of_cdf(a, b);
  }
};

Distribution::Distribution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Distribution Distribution::uniform() {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::uniform01;
  impl->finish();
  return Distribution(impl);
}

Distribution Distribution::power(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("power exponent must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::power;
  impl->c = c;
  impl->finish();
  return Distribution(impl);
}

Distribution Distribution::table(std::vector<double> values, std::vector<double> cdf) {
  if (values.size() != cdf.size() || values.size() < 3)
    throw ParseError("table needs at least three (value, cdf) rows");
  if (values.front() != 0.0 || cdf.front() != 0.0) throw ParseError("table must start at 0,0");
  if (values.back() != 1.0 || cdf.back() != 1.0) throw ParseError("table must end at 1,1");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1]) || !(cdf[i] > cdf[i - 1]))
      throw ParseError("table columns must be strictly increasing");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::table;
  impl->knots_x = values;
  impl->knots_y = cdf;
  impl->spline.emplace(std::move(values), std::move(cdf));
  impl->finish();
  Distribution d(impl);
  impl->regular = d.validate_regularity(kRegularityGrid).pass;
  return d;
}

Distribution Distribution::table_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open table file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty table file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "value,cdf") throw ParseError("table header must be 'value,cdf'");
  std::vector<double> xs, ys;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') || std::getline(fields, extra, ','))
      throw ParseError("table row " + std::to_string(row) + " must have two fields");
    try {
      std::size_t used_a = 0, used_b = 0;
      xs.push_back(std::stod(a, &used_a));
      ys.push_back(std::stod(b, &used_b));
      if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("table row " + std::to_string(row) + " is not numeric");
    }
  }
  return table(std::move(xs), std::move(ys));
}

Distribution::Kind Distribution::kind() const { return impl_->kind; }

std::string Distribution::describe() const {
  switch (impl_->kind) {
    case Kind::uniform01:
      return "uniform";
    case Kind::power: {
      std::ostringstream s;
      s.precision(17);
      s << "power:" << impl_->c;
      return s.str();
    }
    case Kind::table:
      return "table(" + std::to_string(impl_->knots_x.size()) + " knots)";
  }
  return "";
}

double Distribution::exponent() const { return impl_->c; }
double Distribution::cdf(double v) const { return impl_->cdf(v); }
double Distribution::pdf(double v) const { return impl_->pdf(v); }
double Distribution::marginal_revenue(double p) const { return impl_->marginal_revenue(p); }
double Distribution::partial_mean(double a, double b) const { return impl_->partial_mean(a, b); }
double Distribution::mean() const { return impl_->mean; }
double Distribution::p_star() const { return impl_->p_star; }
double Distribution::r_star() const { return impl_->r_star; }
bool Distribution::regular() const { return impl_->regular; }

double Distribution::quantile(double q) const {
  if (q <= 0.0) return 0.0;
  if (q >= 1.0) return 1.0;
  switch (impl_->kind) {
    case Kind::uniform01:
      return q;
    case Kind::power:
      return std::pow(q, 1.0 / impl_->c);
    case Kind::table: {
      auto gap = [&](double v) { return impl_->cdf(v) - q; };
      return solve_bracketed(gap, 0.0, 1.0, -q, 1.0 - q);
    }
  }
  return 0.0;
}

double Distribution::revenue(double p, std::optional<Truncation> trunc) const {
  if (!trunc) return p * (1.0 - cdf(p));
  const double x = trunc->x;
  if (trunc->side == Truncation::Side::below) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("below-truncation point must lie in (0,1]");
    if (p > x) return 0.0;
    return p * (1.0 - cdf(p) / cdf(x));
  }
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("above-truncation point must lie in [0,1)");
  if (p < x) return p;
  return p * (1.0 - cdf(p)) / (1.0 - cdf(x));
}

PriceRevenue Distribution::monopoly(std::optional<Truncation> trunc) const {
  if (!regular()) throw RegularityError("revenue curve of " + describe() + " is not strictly concave");
  if (!trunc) return {p_star(), r_star()};
  const double x = trunc->x;
  if (trunc->side == Truncation::Side::below) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("below-truncation point must lie in (0,1]");
    const double p = argmax_scaled(cdf(x), 0.0, x);
    return {p, revenue(p, trunc)};
  }
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("above-truncation point must lie in [0,1)");
  const double p = std::max(p_star(), x);
  return {p, revenue(p, trunc)};
}

double Distribution::argmax_scaled(double level, double lo, double hi) const {
  return impl_->argmax_scaled(level, lo, hi);
}

RegularityReport Distribution::validate_regularity(int grid_n) const {
  if (grid_n < 16) throw DomainError("regularity grid needs at least 16 points");
  const double h = 1.0 / grid_n;
  const double tolerance = 1e-9 * h * h;
  RegularityReport report{true, -std::numeric_limits<double>::infinity(), 0.0, grid_n};
  auto r = [&](int i) { return revenue(i * h); };
  for (int i = 2; i <= grid_n - 2; ++i) {
    const double second = r(i - 1) - 2.0 * r(i) + r(i + 1);
    if (second > report.worst_second_difference) {
      report.worst_second_difference = second;
      report.worst_location = i * h;
    }
  }
  report.pass = report.worst_second_difference <= -tolerance;
  return report;
}

Distribution parse_distribution(const std::string& spec) {
  if (spec == "uniform") return Distribution::uniform();
  if (spec.rfind("power:", 0) == 0) {
    const std::string arg = spec.substr(6);
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw ParseError("bad power exponent: " + arg);
    }
    if (used != arg.size()) throw ParseError("bad power exponent: " + arg);
    return Distribution::power(c);
  }
  if (spec.rfind("table:", 0) == 0) return Distribution::table_from_csv(spec.substr(6));
  throw ParseError("unknown distribution '" + spec + "' (expected uniform|power:<c>|table:<path>)");
}

}  // namespace repsale
