// Per-outcome phase information of a weak-field homodyne detector with four
// bins per arm, for a coherent probe whose amplitude matches the local
// oscillator.

#include <cstdio>

#include "dfpfisher/wfh.hpp"

int main() {
  using namespace dfpfisher::wfh;
  const Model model(Detector(1.0, 4));
  const auto b = total_fisher(model, dfpfisher::cplx{1.0}, 0.1);
  std::printf("outcome  probability  information\n");
  for (const auto& f : b.outcomes)
    if (f.value > 1e-3 * b.total) std::printf("(%d, %d)   %.6f     %.6f\n", f.outcome.x1, f.outcome.x2, f.probability, f.value);
  std::printf("total information %.6f\n", b.total);
}
