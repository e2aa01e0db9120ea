// Charge in a monopole field: conservation along an RK4 orbit and the
// Kustaanheimo-Stiefel lift of the symplectic form.

#include <cstdio>
#include <random>

#include "hjt/hjt.hpp"

int main() {
  using namespace hjt;
  auto d = make_system("monopole");
  auto tr = integrate(*d.flow, d.x0, 1e-3, 10000);
  for (const auto& c : d.conserved) std::printf("drift %-6s %.3g\n", c.name.c_str(), max_drift(tr, c.f));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    Vec y(4), w(4);
    for (int i = 0; i < 4; ++i) y[i] = u(rng), w[i] = u(rng);
    worst = std::max(worst, monopole_ks_lagrangian_check(d.params.at("n"), y, w));
  }
  std::printf("max |(T pi)* omega - omega_L| over 20 KS points: %.3g\n", worst);
}
