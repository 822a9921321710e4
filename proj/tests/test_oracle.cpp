#include "fixtures.hpp"

#include "geim/analysis.hpp"

#include <doctest.h>

#include <cmath>

// Reference values from tests/oracles/geim_oracle.py (dense solves, plain SVD,
// LP distances). Rerun the script to regenerate.

using namespace geim;

namespace {

const std::vector<std::size_t> kHilbertPhi = {19, 31, 7, 25, 13, 37, 1, 34, 4, 22, 10, 28};
const std::vector<std::size_t> kHilbertSigma = {49, 79, 20, 64, 35, 95, 4, 87, 12, 57, 28, 72};
const std::vector<double> kHilbertEps = {0.9999999999999998, 0.9995084256362292, 0.9994424698677025, 0.812272944814419, 0.7910138469717398, 0.7845752513064695, 0.7845071053685373, 0.1871568789979665, 0.18680516191855706, 0.1646590052431821, 0.09405268801384466, 0.05044020357615761};
const std::vector<double> kHilbertTau = {0.9999999999999996, 0.9981351147496871, 0.9981332850038516, 0.7489871451869282, 0.748842454364973, 0.7138607717474017, 0.7137532118963139, 0.16442114492423784, 0.16159562202011726, 0.12768913246728178, 0.06274608059981548, 0.040431334371987565, 0.024068071864856905};
const std::vector<double> kHilbertLambda = {2.80193032659816, 2.8687561545057396, 2.895116034017144, 2.834437005315566, 2.750754399647189, 2.748434815856999, 2.735298146156921, 3.03806943077826, 3.0435221926552467, 3.623446751020669, 3.5779444089276646, 3.562198354321107};
const std::vector<double> kHilbertPod = {0.9999999999999996, 0.9279535237899871, 0.7998261429454798, 0.6537759200179827, 0.5176562699725294, 0.3870657100619313, 0.26823024875063034, 0.17244076404597744, 0.10297319625697199, 0.057188365396517504, 0.029651482964598557, 0.014585954900381068, 0.006694157345553662};

const std::vector<std::size_t> kSupPhi = {0, 39, 14, 4, 27, 2, 9, 34, 20, 1, 6, 37};
const std::vector<std::size_t> kSupSigma = {82, 119, 96, 190, 74, 16, 57, 132, 86, 199, 101, 165};
const std::vector<double> kSupEps = {1.0, 0.8181589625330367, 0.19714464286637656, 0.12733281596620272, 0.014990991281429222, 0.007275539896957284, 0.0014834326357098249, 0.00028213148173335256, 0.00011702740240049359, 6.506459589666891e-05, 7.43692448346156e-06, 1.2200060371149457e-06};
const std::vector<double> kSupTau = {1.0, 0.4317667260851861, 0.15495844218206004, 0.04643568407957438, 0.009488016231849772, 0.0025557144080492144, 0.0005618908064948922};
const std::vector<double> kSupLambda = {1.0, 1.0525861423455904, 2.1135985922336067, 1.5196617701788564, 2.8631539449819754, 2.9843726985088095, 2.7655435248199423, 4.734691864893675, 3.763336021306208, 4.479012002867082, 5.678371416155857, 7.126127930827062};

void close(const std::vector<double>& got, const std::vector<double>& want, double tol,
           std::size_t offset = 0) {
  for (std::size_t i = 0; i < want.size(); ++i) {
    INFO("index ", i + offset);
    CHECK(std::abs(got[i + offset] - want[i]) <= tol * std::max(1.0, std::abs(want[i])));
  }
}

struct Setup {
  GridPtr grid;
  FunctionSet F;
  std::vector<Functional> sigmas;
};

Setup make_setup(NormMode mode) {
  FamilySpec f;
  f.norm = mode;
  if (mode == NormMode::Hilbert) {
    f.grid = Grid::uniform(-1.0, 1.0, 200);
    f.kind = FamilyKind::GaussianBump;
    f.params = uniform_params(-0.95, 1.0, 40);
  } else {
    f.grid = Grid::uniform(-0.7, 1.0, 200);
    f.kind = FamilyKind::RationalPeak;
    f.params = uniform_params(1.0, 10.0, 40);
  }
  return {f.grid, build_family(f), test::GaussianSetup::make_dictionary(f.grid, mode)};
}

}  // namespace

TEST_CASE("oracle: Gaussian family, Hilbert mode, asymmetric parameters") {
  const Setup s = make_setup(NormMode::Hilbert);
  GreedyConfig cfg;
  cfg.n_max = kHilbertPhi.size();
  const GreedyResult r = run_geim(s.F, s.sigmas, cfg);
  CHECK(r.phi_index == kHilbertPhi);
  CHECK(r.sigma_index == kHilbertSigma);
  close(r.eps_history, kHilbertEps, 1e-10);
  close(compute_tau(s.F, r, NormMode::Hilbert), kHilbertTau, 1e-10);
  std::vector<double> lam;
  for (std::size_t n = 1; n <= r.size(); ++n) lam.push_back(lebesgue_hilbert(r, n).lambda);
  close(lam, kHilbertLambda, 1e-9);
  WidthOptions plain;
  plain.polish = false;
  close(compute_widths(s.F, r.size(), NormMode::Hilbert, plain).d_pod, kHilbertPod, 1e-10);
}

TEST_CASE("oracle: rational family, sup mode, asymmetric grid") {
  const Setup s = make_setup(NormMode::Sup);
  GreedyConfig cfg;
  cfg.n_max = kSupPhi.size();
  cfg.mode = NormMode::Sup;
  const GreedyResult r = run_geim(s.F, s.sigmas, cfg);
  CHECK(r.phi_index == kSupPhi);
  CHECK(r.sigma_index == kSupSigma);
  close(r.eps_history, kSupEps, 1e-10);
  const std::vector<double> tau = compute_tau(s.F, r, NormMode::Sup);
  close(tau, kSupTau, 1e-7);
  std::vector<double> lam;
  for (std::size_t n = 1; n <= r.size(); ++n) lam.push_back(lebesgue_sup(r, n));
  close(lam, kSupLambda, 1e-9);
}
