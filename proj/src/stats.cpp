#include "ara/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ara/error.hpp"

namespace ara {
namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw Error("incomplete beta needs a, b > 0");
  if (x < 0.0 || x > 1.0) throw Error("incomplete beta needs 0 <= x <= 1");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double df) {
  if (!(df > 0.0)) throw Error("degrees of freedom must be positive");
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  const double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
  return t >= 0.0 ? tail : 1.0 - tail;
}

std::string_view to_string(Tail tail) { return tail == Tail::One ? "one" : "two"; }

Tail parse_tail(std::string_view s) {
  if (s == "one") return Tail::One;
  if (s == "two") return Tail::Two;
  throw Error("tail must be 'one' or 'two', got '" + std::string(s) + "'");
}

nlohmann::ordered_json TTestResult::to_json() const {
  nlohmann::ordered_json j;
  j["t"] = t;
  j["df"] = df;
  j["p"] = p;
  j["tail"] = std::string(to_string(tail));
  return j;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b, Tail tail) {
  if (a.size() != b.size()) throw Error("paired t-test needs samples of equal length");
  if (a.size() < 2) throw Error("paired t-test needs at least two pairs");
  const auto n = static_cast<double>(a.size());

  double mean = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean += b[i] - a[i];
    scale = std::max({scale, std::fabs(a[i]), std::fabs(b[i])});
  }
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dev = (b[i] - a[i]) - mean;
    ss += dev * dev;
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  // Differences that agree up to rounding noise count as constant.
  if (sd <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300)) {
    throw Error("paired t-test undefined: differences have zero variance");
  }

  TTestResult r;
  r.t = mean / (sd / std::sqrt(n));
  r.df = static_cast<int>(a.size()) - 1;
  r.tail = tail;
  r.p = tail == Tail::One ? student_t_sf(r.t, r.df) : std::min(1.0, 2.0 * student_t_sf(std::fabs(r.t), r.df));
  return r;
}

}  // namespace ara
