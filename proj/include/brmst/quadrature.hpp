#pragma once

#include <functional>
#include <stdexcept>

namespace brmst {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimpsonOptions {
  double abs_tol = 1e-10;
  int max_depth = 60;
  int initial_panels = 8;
};

/// Adaptive Simpson quadrature with interval bisection and Richardson
/// correction. Throws QuadratureError if a panel is still unresolved at
/// max_depth.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const SimpsonOptions& options = {});

}  // namespace brmst
