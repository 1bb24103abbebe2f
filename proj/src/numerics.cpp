#include "latarb/numerics.hpp"

#include <cmath>
#include <utility>

#include "latarb/error.hpp"

namespace latarb {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InadmissibleParameters: return "inadmissible-parameters";
    case ErrorCode::OrderTooLarge: return "order-too-large";
    case ErrorCode::DominanceViolated: return "dominance-violated";
    case ErrorCode::InvalidStats: return "invalid-stats";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::WrongDistributionKind: return "wrong-distribution-kind";
    case ErrorCode::InvalidRatio: return "invalid-ratio";
    case ErrorCode::UnreachableTarget: return "unreachable-target";
    case ErrorCode::InvalidConfig: return "invalid-config";
  }
  return "unknown";
}

namespace numerics {
namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const std::function<double(double)>& f, const Panel& p, double tol,
              int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.fa, flm, p.m, p.fm);
  const double right = simpson(p.m, p.fm, frm, p.b, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return refine(f, {p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * tol, depth - 1) +
         refine(f, {p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 QuadratureOptions options) {
  if (lo == hi) return 0.0;
  if (hi < lo) return -integrate(f, hi, lo, options);
  const double mid = 0.5 * (lo + hi);
  const double flo = f(lo);
  const double fmid = f(mid);
  const double fhi = f(hi);
  const Panel whole{lo, flo, mid, fmid, hi, fhi, simpson(lo, flo, fmid, hi, fhi)};
  return refine(f, whole, options.abs_tol, options.max_depth);
}

Minimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                double hi, double tol) {
  if (hi < lo) std::swap(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

}  // namespace numerics
}  // namespace latarb
