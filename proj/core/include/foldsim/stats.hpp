#pragma once

#include <cstdint>

namespace foldsim {

// Likelihood-ratio interval of a binomial rate: all q whose likelihood is
// within `ratio` of the maximum. With the default factor of 1000 this is a
// conservative ~99.98% interval that stays meaningful at zero counts.
struct LikelihoodInterval {
  double mle = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

LikelihoodInterval likelihood_interval(std::int64_t errors, std::int64_t shots,
                                       double ratio = 1000.0);

// Standard error of a binomial rate estimate.
double binomial_sigma(std::int64_t errors, std::int64_t shots);

}  // namespace foldsim
