#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string_view>

#include <boost/math/distributions/students_t.hpp>

#include "recaudit/error.hpp"

namespace recaudit {

enum class TTestVariant { pooled, welch };

inline std::string_view to_string(TTestVariant v) {
  return v == TTestVariant::pooled ? "pooled" : "welch";
}

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_tailed = 1.0;
};

inline double mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
}

/// Unbiased sample variance (n - 1 denominator).
inline double sample_variance(std::span<const double> xs) {
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / double(xs.size() - 1);
}

/// Two-sided P(|T| >= |t|) for Student's t with df degrees of freedom.
inline double t_two_tailed_p(double t, double df) {
  if (t == 0.0) return 1.0;
  boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return std::min(p, 1.0);
}

/// Two-sample t-test of mean(a) - mean(b). Pooled assumes equal variances;
/// welch uses the Welch-Satterthwaite degrees of freedom.
inline TTestResult t_test_two_sample(std::span<const double> a, std::span<const double> b,
                                     TTestVariant variant) {
  if (a.size() < 2 || b.size() < 2) throw DomainError("t-test needs at least two observations per sample");
  const double na = double(a.size()), nb = double(b.size());
  const double ma = mean(a), mb = mean(b);
  const double va = sample_variance(a), vb = sample_variance(b);
  const double diff = ma - mb;

  TTestResult r;
  double se = 0.0;
  if (variant == TTestVariant::pooled) {
    r.df = na + nb - 2.0;
    const double sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / r.df;
    se = std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
  } else {
    const double qa = va / na, qb = vb / nb;
    se = std::sqrt(qa + qb);
    const double denom = qa * qa / (na - 1.0) + qb * qb / (nb - 1.0);
    r.df = denom > 0.0 ? (qa + qb) * (qa + qb) / denom : na + nb - 2.0;
  }
  if (se == 0.0) {
    if (diff == 0.0) return {0.0, r.df, 1.0};
    throw DomainError("zero variance");
  }
  r.t = diff / se;
  r.p_two_tailed = t_two_tailed_p(r.t, r.df);
  return r;
}

}  // namespace recaudit
