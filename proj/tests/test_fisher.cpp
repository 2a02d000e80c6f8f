#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "dfpfisher/fisher.hpp"
#include "support.hpp"

using namespace dfpfisher;

namespace {

constexpr double kSixth = 1.0 / 6.0;
const CoefficientMap kMixed{kSixth, kSixth, kSixth, kSixth, kSixth, kSixth};
const CoefficientMap kH{2.0 / 3, -1.0 / 3, kSixth, kSixth, kSixth, kSixth};
const CoefficientMap kD{kSixth, kSixth, 2.0 / 3, -1.0 / 3, kSixth, kSixth};

DfpTable hv_table() { return support::born_table(support::projective({0, 0, 1})); }

ProbabilityVector born_vector(const oracle::BornData& b) { return {b.p, {b.dphi, b.dchi}}; }

}  // namespace

TEST(DfpTable, ValidatesShapeAndNormalisation) {
  const std::vector<Fiducial> f{Fiducial::H, Fiducial::V};
  EXPECT_THROW(DfpTable(f, {"a"}, {{1}, {1}}), std::invalid_argument);
  EXPECT_THROW(DfpTable(f, {"a", "b"}, {{0.5, 0.4}, {0.5, 0.5}}), std::invalid_argument);
  EXPECT_THROW(DfpTable({Fiducial::H, Fiducial::H}, {"a", "b"}, {{1, 0}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(DfpTable(f, {"a", "b"}, {{NAN, 1}, {0, 1}}), std::invalid_argument);
  EXPECT_NO_THROW(DfpTable(f, {"a", "b"}, {{0.5, 0.5 + 5e-7}, {0, 1}}));
  EXPECT_NO_THROW(DfpTable(f, {"a", "b"}, {{0.5, 0.6}, {0, 1}}, 0.2));
}

TEST(DfpTable, ClampKeepsAuditTrail) {
  const DfpTable t({Fiducial::H, Fiducial::V}, {"a", "b"}, {{1.0004, -0.0004}, {0.25, 0.75}});
  const auto c = t.clamped();
  EXPECT_EQ(c(Fiducial::H, 0), 1.0);
  EXPECT_EQ(c(Fiducial::H, 1), 0.0);
  EXPECT_EQ(c.raw()[0][1], -0.0004);
  EXPECT_NEAR(c.residuals()[0], 0.0, 1e-15);
  EXPECT_EQ(c(Fiducial::V, 1), 0.75);
}

TEST(PredictProbabilities, Examples) {
  const auto t = hv_table();
  auto near = [](const std::vector<double>& p, double a, double b) {
    EXPECT_NEAR(p[0], a, 1e-15);
    EXPECT_NEAR(p[1], b, 1e-15);
  };
  near(predict_probabilities(kMixed, t), 0.5, 0.5);
  near(predict_probabilities(kH, t), 1, 0);
  near(predict_probabilities(kD, t), 0.5, 0.5);
}

TEST(PredictProbabilities, LabelMismatch) {
  const DfpTable partial({Fiducial::H, Fiducial::V, Fiducial::D, Fiducial::A}, {"+", "-"},
                         {{1, 0}, {0, 1}, {0.5, 0.5}, {0.5, 0.5}});
  EXPECT_THROW(predict_probabilities(kMixed, partial), std::invalid_argument);
  const CoefficientMap no_y{0.5, 0.5, 0, 0, 0, 0};
  EXPECT_NO_THROW(predict_probabilities(no_y, partial));
}

TEST(PositivityFilter, Examples) {
  const auto t = hv_table();
  EXPECT_TRUE(positivity_filter(kMixed, t, 0));
  EXPECT_FALSE(positivity_filter({2, -1, 0, 0, 0, 0}, t, 0));
  EXPECT_THROW(positivity_filter(kMixed, t, -1e-3), std::invalid_argument);

  // q_H(1) = -4.5e-4 gives p(1) = 2/3 q_H(1) = -3e-4 for |H>.
  const DfpTable perturbed(DfpTable::pauli_fiducials(), {"H", "V"},
                           {{1.00045, -0.00045}, {0, 1}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}});
  EXPECT_NEAR(predict_probabilities(kH, perturbed)[1], -3e-4, 1e-15);
  EXPECT_FALSE(positivity_filter(kH, perturbed, 0));
  EXPECT_TRUE(positivity_filter(kH, perturbed.clamped(), 0));
}

TEST(FisherFromProbabilities, Examples) {
  const double phi = std::numbers::pi / 2;
  const ProbabilityVector pv{{std::pow(std::cos(phi / 2), 2), std::pow(std::sin(phi / 2), 2)}, {{-0.5, 0.5}}};
  EXPECT_NEAR(fisher_from_probabilities(pv)(0, 0), 1.0, 1e-15);
  const ProbabilityVector flat{{0.3, 0.7}, {{0, 0}}};
  EXPECT_EQ(fisher_from_probabilities(flat)(0, 0), 0.0);
}

TEST(FisherFromProbabilities, AnalyticPhaseCurveIsFlat) {
  for (double phi = 0.1; phi < 3.0; phi += 0.1) {
    const ProbabilityVector pv{{std::pow(std::cos(phi / 2), 2), std::pow(std::sin(phi / 2), 2)},
                               {{-std::sin(phi) / 2, std::sin(phi) / 2}}};
    EXPECT_NEAR(fisher_from_probabilities(pv)(0, 0), 1.0, 1e-12);
  }
}

TEST(FisherFromProbabilities, FloorRule) {
  const ProbabilityVector vanishing{{1, 0}, {{0, 0}}};
  const auto a = fisher_from_probabilities(vanishing);
  EXPECT_FALSE(a.divergent());
  EXPECT_EQ(a(0, 0), 0.0);
  const ProbabilityVector divergent{{1, 0}, {{-0.1, 0.1}}};
  EXPECT_TRUE(fisher_from_probabilities(divergent).divergent());
}

TEST(FisherFromProbabilities, ValidatesInput) {
  EXPECT_THROW(fisher_from_probabilities({{0.5, 0.4}, {{0, 0}}}), std::invalid_argument);
  EXPECT_THROW(fisher_from_probabilities({{1.1, -0.1}, {{0, 0}}}), std::invalid_argument);
  EXPECT_THROW(fisher_from_probabilities({{0.5, 0.5}, {{0.1, 0}}}), std::invalid_argument);
  EXPECT_THROW(fisher_from_probabilities({{0.5, 0.5}, {{0, 0}, {0, 0}, {0, 0}}}), std::invalid_argument);
}

TEST(FisherFromProbabilities, ZxPovmClosedForms) {
  const auto psi = oracle::ket_of({0, 1, 0});
  for (double phi : {-0.3, 0.0, 0.2})
    for (double chi : {-0.3, 0.0, 0.25}) {
      const auto f = fisher_from_probabilities(born_vector(oracle::born_data(oracle::zx_povm(), psi, phi, chi, true)));
      const auto e = effective_fisher(f);
      EXPECT_NEAR(e.values[0], oracle::zx_effective_phi(phi, chi), 1e-12);
      EXPECT_NEAR(e.values[1], oracle::zx_effective_chi(phi, chi), 1e-12);
    }
}

TEST(FisherFromDfp, ZeroDerivativesGiveZero) {
  const std::array<CoefficientMap, 2> dc{};
  const auto f = fisher_from_dfp(kD, dc, hv_table());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(f(i, j), 0.0);
}

TEST(FisherFromDfp, EquatorialProbeOnDaTable) {
  const auto t = support::born_table(support::projective({1, 0, 0}));
  const auto probe = PureQubit::from_bloch({0, 1, 0});
  const ChannelParams p(0, 0, ChannelOrder::PhaseThenRotation);
  const std::array<CoefficientMap, 1> dc{coefficient_derivatives(probe, p).d_phi};
  EXPECT_NEAR(fisher_from_dfp(evolved_coefficients(probe, p), dc, t)(0, 0), 1.0, 1e-14);
}

TEST(FisherFromDfp, FilterIsAPrecondition) {
  const std::array<CoefficientMap, 1> dc{};
  EXPECT_THROW(fisher_from_dfp({2, -1, 0, 0, 0, 0}, dc, hv_table()), PreconditionError);
}

TEST(FisherFromDfp, AgreesWithBornRouteOnRandomPovms) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ang(-1.0, 1.0);
  for (int i = 0; i < 150; ++i) {
    const auto povm = oracle::random_povm(2 + i % 3, rng);
    const Vec3 r0 = oracle::random_unit(rng);
    const double phi = ang(rng), chi = ang(rng);
    const bool vu = i % 2 == 0;
    const auto ref = fisher_from_probabilities(born_vector(oracle::born_data(povm, oracle::ket_of(r0), phi, chi, vu)));
    const auto probe = PureQubit::from_bloch(r0);
    const ChannelParams p(phi, chi, support::order(vu));
    const auto got = fisher_from_dfp(evolved_coefficients(probe, p), coefficient_derivatives(probe, p),
                                     support::born_table(povm));
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) EXPECT_NEAR(got(a, b), ref(a, b), 1e-10);
  }
}

TEST(FisherFromDfp, CoarseGrainingNeverAddsInformation) {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 100; ++i) {
    const auto table = support::born_table(oracle::random_povm(3 + i % 2, rng));
    const auto probe = PureQubit::from_bloch(oracle::random_unit(rng));
    const ChannelParams p(0.1, -0.2, ChannelOrder::PhaseThenRotation);
    const auto c = evolved_coefficients(probe, p);
    const auto dc = coefficient_derivatives(probe, p);
    const auto fine = fisher_from_dfp(c, dc, table);
    const auto coarse = fisher_from_dfp(c, dc, table.merged(0, 1 + i % 2));
    EXPECT_LE(coarse(0, 0), fine(0, 0) + 1e-10);
    EXPECT_LE(coarse(1, 1), fine(1, 1) + 1e-10);
  }
}

TEST(EffectiveFisher, Examples) {
  const auto d = effective_fisher(FisherMatrix::diagonal({3, 4}, {"phi", "chi"}));
  EXPECT_EQ(d.values, (std::vector<double>{3, 4}));
  FisherMatrix f({"phi", "chi"});
  f.set(0, 0, 2);
  f.set(1, 1, 2);
  f.set(0, 1, 1);
  const auto e = effective_fisher(f);
  EXPECT_NEAR(e.values[0], 1.5, 1e-15);
  EXPECT_NEAR(e.values[1], 1.5, 1e-15);
  EXPECT_FALSE(e.singular);
}

TEST(EffectiveFisher, SingularFlag) {
  FisherMatrix f({"phi", "chi"});
  f.set(0, 0, 1);
  f.set(1, 1, 4);
  f.set(0, 1, 2);
  const auto e = effective_fisher(f);
  EXPECT_TRUE(e.singular);
  EXPECT_NEAR(e.values[0], 0.0, 1e-15);
}

TEST(EffectiveFisher, DuplicatedOutcomeIsSingular) {
  // A two-outcome measurement split into three columns still carries rank-one information.
  const double k = 1 / std::sqrt(3.0);
  const auto da = support::projective({k, k, k});
  std::vector<oracle::M2> povm{da[0], da[1], da[1]};
  for (auto& row : povm[1])
    for (auto& v : row) v *= 0.5;
  for (auto& row : povm[2])
    for (auto& v : row) v *= 0.5;
  const auto probe = PureQubit::from_bloch({0, 0.6, 0.8});
  const ChannelParams p(0.2, 0.3, ChannelOrder::PhaseThenRotation);
  const auto f = fisher_from_dfp(evolved_coefficients(probe, p), coefficient_derivatives(probe, p),
                                 support::born_table(povm));
  ASSERT_FALSE(f.is_diagonal());
  EXPECT_TRUE(effective_fisher(f).singular);
}

TEST(EffectiveFisher, SchurComplementBound) {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 500; ++i) {
    const double a = std::abs(u(rng)) + 1e-3, d = std::abs(u(rng)) + 1e-3;
    FisherMatrix f({"phi", "chi"});
    f.set(0, 0, a);
    f.set(1, 1, d);
    f.set(0, 1, u(rng) * std::sqrt(a * d));
    const auto e = effective_fisher(f);
    if (e.singular) continue;
    EXPECT_LE(e.values[0], a + 1e-12);
    EXPECT_LE(e.values[1], d + 1e-12);
    EXPECT_NEAR(e.values[0], 1.0 / ((f(1, 1)) / f.determinant()), 1e-9 * a);
  }
}

TEST(MassarRatio, Examples) {
  const auto psi = oracle::ket_of({0, 1, 0});
  const auto f = fisher_from_probabilities(born_vector(oracle::born_data(oracle::zx_povm(), psi, 0, 0, true)));
  const auto h = FisherMatrix::diagonal({1, 1}, {"phi", "chi"});
  EXPECT_NEAR(massar_ratio(f, h), 1.0, 1e-12);
  EXPECT_EQ(massar_ratio(FisherMatrix({"phi", "chi"}), h), 0.0);
  EXPECT_THROW(massar_ratio(f, FisherMatrix::diagonal({1, 0}, {"phi", "chi"})), std::domain_error);
}

TEST(MassarRatio, BoundHoldsForRandomMeasurements) {
  std::mt19937_64 rng(109);
  const auto psi = oracle::ket_of({0, 1, 0});
  const auto h = FisherMatrix::diagonal({1, 1}, {"phi", "chi"});
  for (int i = 0; i < 1000; ++i) {
    const auto povm = oracle::random_povm(2 + i % 5, rng);
    const auto f = fisher_from_probabilities(born_vector(oracle::born_data(povm, psi, 0, 0, true)));
    EXPECT_LE(massar_ratio(f, h), 1.0 + 1e-9);
  }
}

TEST(MassarRatio, RawDiagonalsExceedOneForCorrelatedGenerators) {
  // Both generators move this probe along y, so the QFI matrix is rank one
  // and a y measurement scores 1/2 + 1/2 on each diagonal ratio.
  const double k = 1 / std::sqrt(2.0);
  const auto probe = PureQubit::from_bloch({k, 0, k});
  const ChannelParams origin(0, 0, ChannelOrder::PhaseThenRotation);
  const auto h = qfi_matrix(probe, origin);
  EXPECT_NEAR(h(0, 1), -0.5, 1e-15);
  const auto f = fisher_from_dfp(evolved_coefficients(probe, origin), coefficient_derivatives(probe, origin),
                                 support::born_table(support::projective({0, 1, 0})));
  EXPECT_NEAR(massar_ratio(f, h), 2.0, 1e-12);
}
