#include "hignn/geometry.hpp"

namespace hignn {

Vec3 apply_kernel(const Mat36& m, const std::array<double, 6>& f) {
  Vec3 out;
  double* o = &out.x;
  for (int r = 0; r < 3; ++r) {
    double acc = 0.0;
    for (int c = 0; c < 6; ++c) acc += m(r, c) * f[static_cast<std::size_t>(c)];
    o[r] = acc;
  }
  return out;
}

}  // namespace hignn
