#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specdisc/continuous.hpp"
#include "specdisc/criteria.hpp"
#include "specdisc/model.hpp"

namespace specdisc {

/// b_n = n^4 (b_0 = 1) with invariant measure mu_n = n^-2 (mu_0 = 1).
DiscreteModel quartic_birth_model();
/// b_n = a_{n+1} = n^g, with b_0 = a_1 = 1 and no killing.
DiscreteModel shifted_power_model(double g);
/// a_n = b_n = n^g, with b_0 = 1 and no killing.
DiscreteModel equal_power_model(double g);
/// shifted_power_model(g) with unit killing on {0, ..., 4}.
DiscreteModel shifted_power_local_killing_model(double g);
/// a_n = b_n = 1, c_n = 1/(n+1).
DiscreteModel unit_rates_decaying_killing_model();
/// a_n = b_n = (n+1)/4, c_n = 9(n+1)/16.
DiscreteModel linear_rates_linear_killing_model();
/// a_n = b_n = (n+1)^2, c_n = 5 + 10/(5n - 12).
DiscreteModel quadratic_rates_model();

/// a = 1, b = 0, c = x^(2p-2)/4 + (p-1)/2 x^(p-2) on (0, inf), harmonic for psi = x^p/(2p).
DiffusionModel power_potential_model(double p);
ScalarFunction power_potential_psi(double p);
/// a = 1, b = 0, c = x^2 on the whole line.
DiffusionModel oscillator_model();
/// The oscillator with c = x^2 + 1, harmonic for psi = x^2/2.
DiffusionModel shifted_oscillator_model();
ScalarFunction shifted_oscillator_psi();
/// a = (1+x)^g, b = (4g/5)(1+x)^(g-1), c = g(9g-10)/100 (1+x)^(g-2) on (0, inf).
DiffusionModel power_diffusion_model(double g);
/// psi = (g/10) log(1+x).
ScalarFunction power_diffusion_psi(double g);
/// a = 1, b = -x^(p-1), c = 0 on (0, inf); h = 1.
DiffusionModel drift_family_model(double p);

struct GalleryEntry {
  std::string name;
  std::string expectation;            // the statement being reproduced
  std::vector<Verdict> accepted;      // verdicts that count as a pass
  Mode mode = Mode::Both;
  std::optional<DiscreteModel> discrete;
  std::optional<DiffusionModel> diffusion;
  ScalarFunction psi;                 // continuous entries: h = e^psi
  std::size_t n_max = 20000;
  double x_max = 100.0;
};

std::vector<GalleryEntry> gallery();

struct GalleryRow {
  std::string name;
  std::string expected;
  std::string got;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

GalleryRow run_gallery_entry(const GalleryEntry& e);

}  // namespace specdisc
