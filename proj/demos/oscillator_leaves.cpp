// Complete solutions of the planar oscillator built from two first integrals.
// {f2, f3} is involutive and its leaves give standard solutions; {f1, f4} is
// not, and its leaves only solve the generalized equation.

#include <cstdio>

#include "hjt/hjt.hpp"

int main() {
  using namespace hjt;
  auto d = make_system("ho2d");
  for (const char* name : {"f2f3", "f1f4"}) {
    const FamilySpec& spec = d.families.at(name);
    IntegralFamily fam = d.integrals->subset(spec.indices);
    Vec lambda = spec.to_lambda(to_vec({spec.param_box[0].at(1), spec.param_box[1].at(1)}));
    auto built = build_complete_solution(fam, lambda, spec.seed, spec.working_grid);
    auto grid = lattice(spec.working_grid, candidate_domain(*d.lagrangian, built.X));
    auto gen = verify(*d.lagrangian, built.X, grid, 1e-8, VerifyMode::generalized);
    auto st = verify(*d.lagrangian, built.X, grid, 1e-8, VerifyMode::standard);
    std::printf("%s at lambda = (%g, %g): %zu points, generalized %s, standard %s (max |X*omega| %.3g)\n", name,
                lambda[0], lambda[1], grid.size(), gen.pass ? "pass" : "fail", st.pass ? "pass" : "fail",
                st.max("pullback_omega"));
  }
}
