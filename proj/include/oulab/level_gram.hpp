#pragma once

#include "oulab/domain.hpp"
#include "oulab/multi_index.hpp"
#include "oulab/spectral_model.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace oulab {

// Weight w(g(x)) of the level function, with the levels where w has kinks.
struct LevelWeight {
  std::function<double(double)> w;
  std::vector<double> kinks;
};

LevelWeight penalty_weight(const DomainSpec& domain);  // V = min(cap, (g-1)_+)
LevelWeight inside_weight();                           // 1{g <= 1}
LevelWeight outside_weight();                          // 1{g > 1}

struct GramOptions {
  int panel_order = 20;         // Gauss-Legendre nodes per panel (one active coordinate)
  double panel_width = 0.25;    // in standardized units
  double refine_tol = 1e-6;     // quadrature vs refined quadrature (several active coordinates)
  double quadrature_budget = 4e9;
  std::size_t mc_samples = 200000;
  std::uint64_t mc_seed = 0x5eed;
  int jobs = 1;
};

struct AssemblyInfo {
  std::string method;          // "exact" | "piecewise-gauss-legendre" | "tensor-gauss-hermite" | "monte-carlo"
  double refinement_gap = 0.0; // max |G_q - G_2q| when tensor quadrature was tried
  double std_error = 0.0;      // max entry standard error for Monte Carlo
  std::size_t samples = 0;
};

// G_{gamma,delta} = int w(g) H_gamma H_delta dmu over the basis, symmetrized.
Mat level_weighted_gram(const HermiteBasis& basis, const SpectralModel& model, const DomainSpec& domain,
                        const LevelWeight& weight, const GramOptions& opt = {}, AssemblyInfo* info = nullptr);

}  // namespace oulab
