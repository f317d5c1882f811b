#pragma once

#include <span>
#include <string_view>

#include "json.hpp"

namespace ara {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Upper tail P(T > t) of Student's t with `df` degrees of freedom.
double student_t_sf(double t, double df);

enum class Tail { One, Two };

std::string_view to_string(Tail tail);
Tail parse_tail(std::string_view s);

struct TTestResult {
  double t = 0.0;
  int df = 0;
  double p = 0.0;
  Tail tail = Tail::One;

  nlohmann::ordered_json to_json() const;
};

// Paired t-test on d = b - a. The one-tailed alternative is mean(b) > mean(a).
// Throws on length mismatch, fewer than two pairs, or zero variance of d.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b, Tail tail = Tail::One);

}  // namespace ara
