#pragma once

#include <cstdint>

namespace zubov {

/// Central-difference validation of the two differentiation paths. Relative
/// error is measured in the max norm: |analytic - fd|_inf / max(|analytic|_inf,
/// |fd|_inf, 1e-12), maximized over cases.
struct GradCheckReport {
  double max_input_grad_rel_err = 0.0;  // forward_with_input_grad vs h = 1e-5
  double max_param_grad_rel_err = 0.0;  // loss_gradient vs h = 1e-6
  int input_cases = 0;
  int param_cases = 0;
};

GradCheckReport run_gradcheck(std::uint64_t seed, int input_cases,
                              int param_cases);

inline constexpr double kInputGradTolerance = 1e-5;
inline constexpr double kParamGradTolerance = 1e-4;

}  // namespace zubov
