#pragma once

#include "oulab/chaos.hpp"

namespace oulab {

// sum_gamma phi_gamma^2 sum_h gamma_h lambda_h^{-alpha}  (= int |Q^{(1-a)/2} D phi|^2 dmu)
double gradient_energy(const ChaosVector& phi, const SpectralModel& model);

// sum_gamma phi_gamma^2 sum_{h,k} lambda_h^{-a} lambda_k^{-a} gamma_h (gamma_k - delta_hk)
// (= sum_{h,k} lambda_h^{1-a} lambda_k^{1-a} int (D_hk phi)^2 dmu)
double second_order_energy(const ChaosVector& phi, const SpectralModel& model);

// Squared W^{1,2}_alpha (order 1) or W^{2,2}_alpha (order 2) norm.
double sobolev_norm(const ChaosVector& phi, int order, const SpectralModel& model);

// |int D_k phi psi - (-int phi D_k psi + lambda_k^{-1} int x_k phi psi)| by quadrature.
double gauss_ibp_check(const ChaosVector& phi, const ChaosVector& psi, int k, const SpectralModel& model);

}  // namespace oulab
