#include "omd/rng.hpp"

#include <cmath>
#include <numbers>

namespace omd {

double PortableSampler::normal() {
  // Box-Muller, cosine branch only; u1 is strictly positive so the log is
  // finite. Consumes exactly two engine draws per sample.
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double PortableSampler::exponential() {
  // -ln(1 - u); log1p keeps precision for small u.
  return -std::log1p(-uniform());
}

double PortableSampler::gumbel(double location, double scale) {
  const double u = uniform_open();
  return location - scale * std::log(-std::log(u));
}

}  // namespace omd
