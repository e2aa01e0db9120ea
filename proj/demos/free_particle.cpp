// The two-parameter family X = (k, (k q2 - l)/q1) for the free particle:
// a generalized solution everywhere, a standard one only when k q2 = l.

#include <cstdio>

#include "hjt/hjt.hpp"

int main() {
  using namespace hjt;
  for (auto [k, l] : {std::pair{1.0, 0.0}, std::pair{0.0, 0.0}, std::pair{2.0, 0.5}}) {
    auto d = make_system("free2d", {{"k", k}, {"l", l}});
    auto x = d.candidate("X1");
    auto grid = lattice(d.grid, candidate_domain(*d.lagrangian, x));
    auto gen = verify(*d.lagrangian, x, grid, 1e-8, VerifyMode::generalized);
    auto st = verify(*d.lagrangian, x, grid, 1e-8, VerifyMode::standard);
    double c12 = standard_checks(*d.lagrangian, x, to_vec({1, 1})).pullback_omega(0, 1);
    std::printf("k=%g l=%g  generalized %-4s standard %-4s  (X*omega)_12 at (1,1) = %+.6f\n", k, l,
                gen.pass ? "pass" : "fail", st.pass ? "pass" : "fail", c12);
  }
}
