#include <cstdio>

#include "spinnet/spinnet.hpp"

using namespace spinnet;

int main() {
  // A circle of three segments carrying loops of spin 1/2 and 1.
  auto reg = circle_registry(3);
  const Word circle{{0, false}, {1, false}, {2, false}};
  const SpinNetwork half = loop_network(reg, circle, Spin::half());
  const SpinNetwork one = loop_network(reg, circle, Spin::one());

  HolonomyAssignment h;
  for (SegmentId s = 0; s < 3; ++s) h.set(s, GroupElement{0.6, 0.8, 0.0, 0.0});
  const cplx value = evaluate(half, h);
  std::printf("loop(1/2) on a rotation: %.6f%+.6fi\n", value.real(), value.imag());

  std::printf("<loop(1/2), loop(1/2)> = %.6f\n", exact_inner_product(half, half).real());
  std::printf("<loop(1/2), loop(1)>   = %.6f\n", exact_inner_product(half, one).real());
  const McEstimate mc = mc_inner_product(half, half, 100'000, 1);
  std::printf("Monte Carlo estimate   = %.4f +- %.4f\n", mc.mean.real(), mc.stderr());

  const auto avg = averaged_inner_product_detailed(half, half);
  std::printf("averaged norm = %.6f over %zu correspondences\n", avg.value.real(), avg.correspondences);

  const auto obs = blips::observation_one(2, 1);
  std::printf("blip overlap at N = 2: %.12f (N = 4: %.12f)\n", obs.value.real(), obs.value_extended.real());

  std::printf("%s\n", io::dump(io::to_document(half)).c_str());
}
