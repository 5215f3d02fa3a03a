#include "foldsim/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace foldsim {

namespace {

double log_likelihood(double q, double k, double n) {
  return k * std::log(q) + (n - k) * std::log1p(-q);
}

// Root of log_likelihood(q) == target on [a, b]; the function is monotone on
// either side of the maximum, so plain bisection suffices.
double bisect(double a, double b, double k, double n, double target, bool rising) {
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    const bool below = log_likelihood(m, k, n) < target;
    if (below == rising) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

LikelihoodInterval likelihood_interval(std::int64_t errors, std::int64_t shots, double ratio) {
  if (shots <= 0) throw std::invalid_argument("interval requires at least one shot");
  if (errors < 0 || errors > shots) throw std::invalid_argument("error count out of range");
  if (ratio <= 1.0) throw std::invalid_argument("likelihood ratio must exceed 1");
  const double k = double(errors);
  const double n = double(shots);
  const double drop = std::log(ratio);
  LikelihoodInterval out;
  out.mle = k / n;
  if (errors == 0) {
    out.lo = 0.0;
    out.hi = 1.0 - std::exp(-drop / n);
    return out;
  }
  if (errors == shots) {
    out.hi = 1.0;
    out.lo = std::exp(-drop / n);
    return out;
  }
  const double target = log_likelihood(out.mle, k, n) - drop;
  out.lo = bisect(1e-300, out.mle, k, n, target, /*rising=*/true);
  out.hi = bisect(out.mle, 1.0 - 1e-16, k, n, target, /*rising=*/false);
  return out;
}

double binomial_sigma(std::int64_t errors, std::int64_t shots) {
  if (shots <= 0) throw std::invalid_argument("sigma requires at least one shot");
  const double q = double(errors) / double(shots);
  return std::sqrt(q * (1.0 - q) / double(shots));
}

}  // namespace foldsim
