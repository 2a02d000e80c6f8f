// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dfpfisher/dfpfisher.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dfpfisher;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;  // <= 0: no runtime bound
  std::function<void(Verdict&)> body;
};

ProbabilityVector born_vector(const oracle::BornData& b) { return {b.p, {b.dphi, b.dchi}}; }

std::vector<Mat2> to_lib(const std::vector<oracle::M2>& povm) {
  std::vector<Mat2> out;
  for (const auto& m : povm) out.push_back(oracle::to_lib(m));
  return out;
}

std::vector<std::string> labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("m" + std::to_string(i));
  return out;
}

// 1 -----------------------------------------------------------------------

void closed_forms(Verdict& v) {
  const std::vector<double> grid{-0.3, 0.0, 0.1, 0.3};
  const auto probe = PureQubit::from_bloch({0, 1, 0});
  double qfi_err = 0, zx_err = 0;
  const auto table = support::born_table(oracle::zx_povm());
  for (double phi : grid)
    for (double chi : grid) {
      const auto hv = qfi_matrix(probe, {phi, chi, ChannelOrder::PhaseThenRotation});
      const auto hu = qfi_matrix(probe, {phi, chi, ChannelOrder::RotationThenPhase});
      qfi_err = std::max({qfi_err, std::abs(hv(0, 0) - 1), std::abs(hv(1, 1) - std::pow(std::cos(phi), 2)),
                          std::abs(hv(0, 1)), std::abs(hu(0, 0) - std::pow(std::cos(chi), 2)),
                          std::abs(hu(1, 1) - 1), std::abs(hu(0, 1))});
      const ChannelParams p(phi, chi, ChannelOrder::PhaseThenRotation);
      const auto e = effective_fisher(fisher_from_dfp(evolved_coefficients(probe, p), coefficient_derivatives(probe, p), table));
      const double c = std::cos(phi) * std::cos(chi);
      zx_err = std::max({zx_err, std::abs(e.values[0] - 0.5),
                         std::abs(e.values[1] - c * c / (2 - 2 * std::cos(2 * phi) * std::pow(std::sin(chi), 2)))});
    }
  const ChannelParams origin(0, 0, ChannelOrder::PhaseThenRotation);
  const double ratio = massar_ratio(
      fisher_from_dfp(evolved_coefficients(probe, origin), coefficient_derivatives(probe, origin), table),
      qfi_matrix(probe, origin));
  v.detail << "qfi max err " << qfi_err << ", Z/X F' max err " << zx_err << ", Massar ratio " << ratio;
  v.require(qfi_err <= 1e-9, "qfi");
  v.require(zx_err <= 1e-9, "effective FI");
  v.require(std::abs(ratio - 1) <= 1e-9, "Massar ratio");
}

// 2 -----------------------------------------------------------------------

void dfp_equals_born(Verdict& v) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto povm = oracle::random_povm(2 + i % 3, rng);
    const Vec3 r0 = oracle::random_unit(rng);
    const double phi = ang(rng), chi = ang(rng);
    const bool vu = i % 2 == 0;
    const auto probe = PureQubit::from_bloch(r0);
    const ChannelParams p(phi, chi, support::order(vu));
    const auto a = fisher_from_dfp(evolved_coefficients(probe, p), coefficient_derivatives(probe, p),
                                   support::born_table(povm));
    const auto b = fisher_from_probabilities(born_vector(oracle::born_data(povm, oracle::ket_of(r0), phi, chi, vu)));
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t y = 0; y < 2; ++y) worst = std::max(worst, std::abs(a(x, y) - b(x, y)));
  }
  v.detail << "100 draws, max elementwise difference " << worst;
  v.require(worst <= 1e-10, "elementwise agreement");
}

// 3 -----------------------------------------------------------------------

void massar_bound(Verdict& v) {
  std::mt19937_64 rng(77);
  const ChannelParams origin(0, 0, ChannelOrder::PhaseThenRotation);
  double worst = -1, saturation = 0, worst_trace = -1;
  int skipped = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<oracle::M2> povm = i == 0 ? oracle::zx_povm() : oracle::random_povm(2 + i % 3, rng);
    const auto probe = i == 0 ? PureQubit::from_bloch({0, 1, 0}) : PureQubit::from_bloch(oracle::random_unit(rng));
    const auto f = fisher_from_povm(Povm(to_lib(povm), labels(povm.size())), probe, origin);
    const auto h = qfi_matrix(probe, origin);
    if (!(h(0, 0) > 1e-9 && h(1, 1) > 1e-9)) {
      ++skipped;
      continue;
    }
    const double r = massar_ratio(f, h);
    worst = std::max(worst, r);
    if (i == 0) saturation = r;
    // diagnostic: the same ratio with the full inverse QFI matrix
    const double det = h.determinant();
    if (det > 1e-9)
      worst_trace = std::max(worst_trace, (h(1, 1) * f(0, 0) + h(0, 0) * f(1, 1) - 2 * h(0, 1) * f(0, 1)) / det);
  }
  // same POVMs against the probe (0,1,0)
  std::mt19937_64 rng2(78);
  const auto y = PureQubit::from_bloch({0, 1, 0});
  double worst_y = -1;
  for (int i = 0; i < 1000; ++i) {
    const auto povm = oracle::random_povm(2 + i % 3, rng2);
    worst_y = std::max(worst_y, massar_ratio(fisher_from_povm(Povm(to_lib(povm), labels(povm.size())), y, origin),
                                             qfi_matrix(y, origin)));
  }
  v.detail << "max ratio " << worst << " over 1000 random POVM/probe draws (" << skipped
           << " with vanishing QFI), Z/X draw " << saturation << "; diagnostics: max tr(H^-1 F) " << worst_trace
           << ", max ratio with probe (0,1,0) " << worst_y;
  v.require(worst <= 1 + 1e-9, "bound");
  v.require(saturation >= 1 - 1e-9, "saturation");
}

// 4 -----------------------------------------------------------------------

void waveplate_curve(Verdict& v) {
  const ChannelParams origin(0, 0, ChannelOrder::PhaseThenRotation);
  double best = -1, best_theta = 0, ratio = 0;
  for (int i = 0; i <= 180; ++i) {
    const double deg = 0.5 * i;
    const auto r = optimize_single(synth_dfp(waveplate_povm(deg * kPi / 180)), origin);
    if (r.best_value > best) {
      best = r.best_value;
      best_theta = deg;
      ratio = r.best_value / qfi_matrix(r.best_probe, origin)(0, 0);
    }
  }
  v.detail << "max F " << best << " at theta " << best_theta << " deg, F/H " << ratio;
  v.require(std::abs(best - 1) <= 1e-4, "peak value");
  v.require(std::abs(ratio - 1) <= 1e-4, "F/H at peak");
}

// 5 -----------------------------------------------------------------------

void wfh_normalisation(Verdict& v) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  double norm_err = 0, oracle_err = 0;
  for (int n : {1, 2, 4, 8})
    for (int k = 0; k < 20; ++k) {
      const cplx alpha{u(rng), u(rng)}, gamma{u(rng), u(rng)};
      const wfh::Detector d(gamma, n);
      double sum = 0;
      for (auto x : wfh::all_outcomes(d)) {
        const double q = wfh::dfp_probability(d, x, alpha);
        sum += q;
        oracle_err = std::max(oracle_err, std::abs(q - oracle::click_probability(n, x.x1, x.x2, alpha, gamma)));
      }
      norm_err = std::max(norm_err, std::abs(sum - 1));
    }
  v.detail << "max |sum - 1| " << norm_err << ", max oracle difference " << oracle_err;
  v.require(norm_err <= 1e-10, "normalisation");
  v.require(oracle_err <= 1e-12, "binomial oracle");
}

// 6 -----------------------------------------------------------------------

void coherent_consistency(Verdict& v) {
  const wfh::Model m(wfh::Detector(1.0, 4));
  double closed = 0, quad = 0;
  for (cplx a0 : {cplx{0}, cplx{0.5}, cplx{1, 0.3}}) {
    const auto w = wfh::GaussianWigner::coherent(a0);
    for (const auto& k : m.kernels()) {
      const double want = wfh::dfp_probability(m.detector(), k.outcome(), a0);
      closed = std::max(closed, std::abs(wfh::probability_wigner(k, w) - want));
      const double q = oracle::integrate_2d([&](double x, double p) { return w({x, p}) * k.zeta({x, p}); }, w.mean,
                                            std::abs(w.mean) + 3.0);
      quad = std::max(quad, std::abs(q - want));
    }
  }
  v.detail << "closed form max err " << closed << ", quadrature max err " << quad;
  v.require(closed <= 1e-8, "closed form");
  v.require(quad <= 1e-6, "quadrature");
}

// 7 -----------------------------------------------------------------------

void homodyne_peak(Verdict& v) {
  const wfh::Model m(wfh::Detector(1.0, 4));
  double best = -1, best_alpha = -1;
  for (int i = 0; i <= 100; ++i) {
    const double a = 0.02 * i;
    const double t = wfh::total_fisher(m, cplx{a}, 0.1).total;
    if (t > best) best = t, best_alpha = a;
  }
  const auto b = wfh::total_fisher(m, cplx{1.0}, 0.1);
  double listed = 0;
  std::ostringstream each;
  for (const auto& f : b.outcomes) {
    const auto x = f.outcome;
    if ((x.x2 == 1 && x.x1 <= 4) || (x.x1 == 1 && x.x2 == 0)) {
      listed += f.value;
      each << " (" << x.x1 << "," << x.x2 << ")=" << f.value;
    }
  }
  const double share = listed / b.total;
  v.detail << "argmax alpha " << best_alpha << " (F " << best << "), share at alpha=1 " << share << ";" << each.str();
  v.require(std::abs(best_alpha - 1) <= 0.02 + 1e-12, "argmax");
  v.require(share > 0.5, "dominant share");
}

// 8 -----------------------------------------------------------------------

void squeezing_monotone(Verdict& v) {
  const wfh::Model m(wfh::Detector(1.0, 4));
  std::vector<double> alphas;
  for (int i = 0; i <= 70; ++i) alphas.push_back(0.2 + 0.02 * i);
  const std::vector<double> rds{1.0, 0.95, 0.9};
  const auto rows = wfh::squeeze_tradeoff_scan(m, alphas, rds, 0.1);
  double residual = 0;
  int violations = 0;
  std::ostringstream first;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto& a = rows[3 * i];
    const auto& b = rows[3 * i + 1];
    const auto& c = rows[3 * i + 2];
    for (const auto* r : {&a, &b, &c}) residual = std::max(residual, std::abs(r->mean_photon - r->energy));
    if (!(a.fisher > b.fisher && b.fisher > c.fisher)) {
      if (violations++ < 3)
        first << " alpha=" << alphas[i] << ": " << a.fisher << ", " << b.fisher << ", " << c.fisher << ";";
    }
  }
  const auto unit = wfh::squeeze_tradeoff_scan(m, {1.0}, rds, 0.1);
  v.detail << "non-monotone at " << violations << "/" << alphas.size() << " alphas;" << first.str()
           << " at alpha=1: " << unit[0].fisher << " > " << unit[1].fisher << " > " << unit[2].fisher
           << "; photon residual " << residual;
  v.require(violations == 0, "monotone in r_d at every alpha");
  v.require(residual <= 1e-10, "mean-photon identity");
}

// 9 -----------------------------------------------------------------------

void tomography_round_trip(Verdict& v) {
  std::mt19937_64 rng(99);
  double noiseless = 0;
  for (int i = 0; i < 50; ++i) {
    const auto truth = random_povm(2 + i % 3, rng, i % 2 == 0);
    noiseless = std::max(noiseless, max_element_deviation(reconstruct_povm(synth_dfp(truth)).povm, truth));
  }

  const auto probe = PureQubit::from_bloch({0, 1, 0});
  double worst = 0;
  int filtered = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto table = synth_dfp(zx_povm(), 1e-3, seed);
    const auto rec = reconstruct_povm(table);
    for (int i = 0; i <= 10; ++i) {
      const ChannelParams p(0.05 * i, 0.0, ChannelOrder::PhaseThenRotation);
      const auto c = evolved_coefficients(probe, p);
      if (!positivity_filter(c, table, 0.0)) {
        ++filtered;
        continue;
      }
      const auto fd = fisher_from_dfp(c, coefficient_derivatives(probe, p), table);
      const auto ft = fisher_from_povm(rec.povm, probe, p);
      for (std::size_t k = 0; k < 2; ++k)
        worst = std::max(worst, std::abs(fd(k, k) - ft(k, k)) / std::max(std::abs(fd(k, k)), std::abs(ft(k, k))));
    }
  }
  v.detail << "noiseless max err " << noiseless << "; noise 1e-3, 20 seeds x 11 phases: max relative FI deviation "
           << worst << " (" << filtered << " points filtered)";
  v.require(noiseless <= 1e-6, "noiseless reconstruction");
  v.require(worst <= 0.05, "5% agreement");
}

// 10 ----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void determinism(Verdict& v) {
  const auto dir = fs::temp_directory_path() / "dfpfisher_acceptance";
  fs::create_directories(dir);
  const std::vector<std::string> cmds{
      "fisher-scan --model waveplate --theta 0:90:15 --noise 1e-3 --seed 42",
      "fisher-scan --model zx --noise 1e-3 --seed 7 --params phi,chi --phi 0:0.5:0.1 --threads 2",
      "optimize-probe --model random --seed 3 --noise 1e-3",
      "tomo-compare --povm zx --noise 1e-3 --seed 7",
      "synth-dfp --model random --noise 1e-2 --seed 9",
      "wfh-scan --alpha 0:2:0.25",
      "wfh-squeeze --alpha 0.4:1.6:0.4"};
  int identical = 0;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    std::string out[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto path = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep) + ".csv");
      fs::remove(path);
      const std::string cmd = std::string(DFPFISHER_CLI_PATH) + " " + cmds[i] + " -o " + path.string();
      const int status = std::system(cmd.c_str());
      v.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "exit status of '" + cmds[i] + "'");
      out[rep] = slurp(path);
    }
    if (!out[0].empty() && out[0] == out[1]) ++identical;
  }
  v.detail << identical << "/" << cmds.size() << " commands byte-identical across two runs";
  v.require(identical == static_cast<int>(cmds.size()), "byte-identical outputs");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed forms (qfi, Z/X effective FI, Massar saturation)", 1, closed_forms},
      {2, "DFP route equals Born route", 5, dfp_equals_born},
      {3, "Massar bound over random measurements", 10, massar_bound},
      {4, "waveplate optimum reaches the phase QFI", 30, waveplate_curve},
      {5, "click statistics normalisation and binomial oracle", 5, wfh_normalisation},
      {6, "coherent consistency of the phase-space kernel", 60, coherent_consistency},
      {7, "weak-field homodyne FI peak and dominant outcomes", 60, homodyne_peak},
      {8, "squeezing degrades phase information", 120, squeezing_monotone},
      {9, "tomography round trip", 60, tomography_round_trip},
      {10, "CLI determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0) v.require(secs < c.limit_s, "runtime limit " + std::to_string(static_cast<int>(c.limit_s)) + " s");
    if (!v.pass) ++failed;
    std::printf("%s criterion %d: %s (%.2f s): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
