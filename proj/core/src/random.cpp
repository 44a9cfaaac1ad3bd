#include "vqcount/random.hpp"

#include <cmath>
#include <limits>

namespace vqcount {

std::uint64_t Rng::geometric(double p) {
  if (p >= 1.0) return 1;
  if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
  // Inversion: P(G > t) = (1-p)^t.
  const double u = 1.0 - uniform();  // (0, 1]
  const double t = std::floor(std::log(u) / std::log1p(-p));
  if (t >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(t) + 1;
}

}  // namespace vqcount
