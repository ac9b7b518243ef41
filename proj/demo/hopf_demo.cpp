// Walks through the Hopf fibration: the structure equation terms at one point,
// then the O'Neill A tensor on a phi-pair.
#include <cstdio>
#include <numbers>

#include "ccsub/ccsub.hpp"

using namespace ccsub;

int main() {
  const SubmersionInstance sub = build_hopf_s3();
  const std::vector<double> p{std::numbers::pi / 4, 0.3, -0.2};
  const OrthoFrame f = submersion_frame(sub, p);

  std::printf("%-8s %10s %10s %10s %10s %10s\n", "vector", "lhs", "base", "fibre", "H", "TrB/2");
  const char* labels[] = {"X", "phiX", "xi"};
  for (int a = 0; a < f.size(); ++a) {
    const StructureTerms t = structure_terms(sub, p, f, f.vectors[a]);
    std::printf("%-8s %10.6f %10.6f %10.6f %10.6f %10.6f\n", labels[a], t.lhs, t.base, t.fibre, t.mean_curv,
                t.half_trace);
  }

  const Vec<double> A = oneill_A(sub, p, f.vectors[0], f.vectors[1]);
  std::printf("A_X phiX = (%.6f, %.6f, %.6f), xi = (0, 1, 1)\n", A[0], A[1], A[2]);
  return 0;
}
