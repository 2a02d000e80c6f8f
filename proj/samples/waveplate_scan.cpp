// Best single-parameter phase information of a polariser behind a half-wave
// plate, as a function of the plate angle.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "dfpfisher/dfpfisher.hpp"

int main() {
  using namespace dfpfisher;
  const ChannelParams origin(0.0, 0.0, ChannelOrder::PhaseThenRotation);
  std::printf("theta_deg  F_best   probe (x, y, z)\n");
  for (int deg = 0; deg <= 45; deg += 5) {
    const double theta = deg * std::numbers::pi / 180.0;
    const DfpTable table = synth_dfp(waveplate_povm(theta));
    const auto r = optimize_single(table, origin);
    const Vec3 b = r.best_probe.bloch();
    std::printf("%9d  %.5f  (%+.3f, %+.3f, %+.3f)\n", deg, r.best_value, b.x, b.y, b.z);
  }
}
