#include "hignn/forces.hpp"

#include <cmath>
#include <stdexcept>

#include "hignn/text_io.hpp"

namespace hignn {

void MorseParams::validate() const {
  if (!(rho > 0.0 && depth > 0.0 && r_eq > 0.0))
    throw std::domain_error("Morse parameters must all be positive");
}

double morse_force(double r, const MorseParams& params) {
  if (!(r > 0.0)) throw std::domain_error("morse_force: separation must be positive");
  const double e1 = std::exp(-params.rho * (r - params.r_eq));
  const double e2 = std::exp(-2.0 * params.rho * (r - params.r_eq));
  return -2.0 * params.rho * params.depth * (e1 - e2);
}

std::vector<Vec3> total_external_force(std::span<const Vec3> positions, const Domain& domain,
                                       const std::optional<MorseParams>& morse,
                                       const std::optional<Vec3>& uniform) {
  const std::size_t n = positions.size();
  std::vector<Vec3> forces(n);
  if (uniform)
    for (Vec3& f : forces) f = *uniform;
  if (!morse) return forces;

  morse->validate();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      // rhat points from j to i; the same signed magnitude applied with the
      // flipped direction keeps the pair exactly antisymmetric
      const Vec3 rel = domain.displacement(positions[j], positions[i]);
      const double r = norm(rel);
      if (r == 0.0) throw std::invalid_argument("total_external_force: coincident particles");
      const double fm = morse_force(r, *morse);
      const Vec3 pair = (fm / r) * rel;
      forces[i] += pair;
      forces[j] -= pair;
    }
  return forces;
}

std::string ForceModel::describe() const {
  std::string s;
  if (uniform)
    s += "uniform(" + format_g17(uniform->x) + "," + format_g17(uniform->y) + "," +
         format_g17(uniform->z) + ")";
  if (morse) {
    if (!s.empty()) s += "+";
    s += "morse(rho=" + format_g17(morse->rho) + ",De=" + format_g17(morse->depth) +
         ",re=" + format_g17(morse->r_eq) + ")";
  }
  if (s.empty()) s = "none";
  return s;
}

}  // namespace hignn
