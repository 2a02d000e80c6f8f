// Glue between the oracles and library value types.

#pragma once

#include <string>
#include <vector>

#include "dfpfisher/fisher.hpp"
#include "oracles.hpp"

namespace support {

/// Exact Born-rule DFP table of an oracle POVM on the six Pauli fiducials.
inline dfpfisher::DfpTable born_table(const std::vector<oracle::M2>& povm) {
  std::vector<std::vector<double>> q;
  for (auto f : dfpfisher::kFiducials) {
    std::vector<double> row;
    for (const auto& e : povm) row.push_back(oracle::born(e, dfpfisher::fiducial_bloch(f)));
    q.push_back(row);
  }
  std::vector<std::string> labels;
  for (std::size_t m = 0; m < povm.size(); ++m) labels.push_back("m" + std::to_string(m));
  return dfpfisher::DfpTable(dfpfisher::DfpTable::pauli_fiducials(), labels, q);
}

inline dfpfisher::ChannelOrder order(bool vu) {
  return vu ? dfpfisher::ChannelOrder::PhaseThenRotation : dfpfisher::ChannelOrder::RotationThenPhase;
}

/// Projective measurement along unit axis n as oracle matrices.
inline std::vector<oracle::M2> projective(dfpfisher::Vec3 n) {
  using oracle::cplx;
  oracle::M2 p{{{(1 + n.z) / 2, cplx{n.x, -n.y} / 2.0}, {cplx{n.x, n.y} / 2.0, (1 - n.z) / 2}}};
  oracle::M2 m{{{(1 - n.z) / 2, -cplx{n.x, -n.y} / 2.0}, {-cplx{n.x, n.y} / 2.0, (1 + n.z) / 2}}};
  return {p, m};
}

}  // namespace support
