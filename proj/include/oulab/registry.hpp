#pragma once

#include "oulab/domain.hpp"
#include "oulab/spectral_model.hpp"
#include "oulab/types.hpp"

#include <string>
#include <vector>

namespace oulab {

struct TestFunctionInfo {
  std::string name;
  std::string role;  // "phi" (also usable as f) or "rho"
  std::string description;
  bool nonnegative = false;
  bool bounded = false;
};

// Named phi, f and rho: Hermite elements, capped exponentials, indicators.
std::vector<TestFunctionInfo> list_testfunctions();

bool has_testfunction(const std::string& name);
const TestFunctionInfo& testfunction_info(const std::string& name);

// Gradients of the indicators are the a.e. value 0. sin_g uses the level function of the domain.
SmoothField make_testfunction(const std::string& name, const SpectralModel& model, const DomainSpec& domain);

}  // namespace oulab
