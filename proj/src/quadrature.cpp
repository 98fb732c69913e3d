#include "brmst/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace brmst {

namespace {

struct Panel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

class Simpson {
 public:
  Simpson(const std::function<double(double)>& f, int max_depth) : f_(f), max_depth_(max_depth) {}

  double integrate(const Panel& p, double tol, int depth) const {
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = f_(lm);
    const double frm = f_(rm);
    const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (!std::isfinite(delta)) throw QuadratureError("adaptive_simpson: non-finite integrand");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth_) throw QuadratureError("adaptive_simpson: no convergence at maximum depth");
    // Tolerance is split between halves but floored near machine precision
    // so endpoint singularities in the derivative stay resolvable.
    const double child_tol = std::max(0.5 * tol, kTolFloor);
    return integrate({p.a, lm, p.m, p.fa, flm, p.fm, left}, child_tol, depth + 1) +
           integrate({p.m, rm, p.b, p.fm, frm, p.fb, right}, child_tol, depth + 1);
  }

 private:
  static constexpr double kTolFloor = 1e-17;
  const std::function<double(double)>& f_;
  int max_depth_;
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, const SimpsonOptions& options) {
  if (a == b) return 0.0;
  if (!(options.abs_tol > 0.0) || options.initial_panels < 1)
    throw std::invalid_argument("adaptive_simpson: invalid options");
  const Simpson simpson(f, options.max_depth);
  const int panels = options.initial_panels;
  const double width = (b - a) / panels;
  double total = 0.0;
  double fa = f(a);
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * width;
    const double hi = i + 1 == panels ? b : a + (i + 1) * width;
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    const double fb = f(hi);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson.integrate({lo, mid, hi, fa, fm, fb, whole}, options.abs_tol / panels, 0);
    fa = fb;
  }
  return total;
}

}  // namespace brmst
