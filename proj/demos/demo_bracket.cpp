// Walkthrough of the core library: parse vector fields, take brackets,
// check a structure table, and verify invariance of a simple equation.
//
// Build target: demo_bracket.  Run it with no arguments.

#include <iostream>

#include "evosym/algebra.hpp"
#include "evosym/detsys.hpp"

int main() {
  using namespace evosym;
  Context ctx;

  // Lie brackets of point-symmetry generators a(t)Dt + b(t,x,u)Dx + c(t,x,u)Du.
  VectorField X = parse_vf("Dt", ctx);
  VectorField Y = parse_vf("3*t*Dt + x*Dx", ctx);
  std::cout << "[" << print_vf(X) << ", " << print_vf(Y)
            << "] = " << print_vf(bracket(X, Y)) << "\n";

  // A realization of the solvable algebra A3.5: [e1,e3]=e1, [e2,e3]=e2.
  std::vector<VectorField> basis = parse_basis("Dx ; Du ; x*Dx + u*Du", ctx);
  AlgebraReport alg = check_realization(basis, builtin_table("A3.5"), ctx, 0);
  std::cout << "A3.5 realization <Dx, Du, x*Dx + u*Du>: "
            << (alg.ok() ? "verified" : "failed") << "\n";

  // Invariance of u_t = u3 under its five-dimensional point symmetry algebra.
  EvolutionEquation eq{parse_expr("1", ctx), parse_expr("0", ctx)};
  std::vector<VectorField> gens =
      parse_basis("Dt ; Dx ; Du ; x*Du ; 3*t*Dt + x*Dx", ctx);
  InvarianceReport inv = check_invariance(eq, gens, ctx, 0);
  for (const auto& g : inv.gens)
    std::cout << "  generator " << g.index << ": d1 " << verdict_name(g.d1.verdict)
              << ", d2 " << verdict_name(g.d2.verdict) << "\n";
  std::cout << "u_t = u3 invariance: " << (inv.ok() ? "verified" : "failed")
            << "\n";
  return 0;
}
