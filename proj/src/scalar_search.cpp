#include "gsense/scalar_search.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "gsense/errors.hpp"

namespace gsense {

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol) {
  if (!(hi >= lo)) throw InvalidArgument("golden section: empty bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  int evals = 0;
  auto eval = [&](double x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? INFINITY : v;
  };

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  ScalarMinimum best{fc <= fd ? c : d, fc <= fd ? fc : fd, 0};
  for (double edge : {lo, hi}) {
    const double fe = eval(edge);
    if (fe < best.value) best = {edge, fe, 0};
  }
  best.evaluations = evals;
  return best;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                   int max_iter) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    std::ostringstream msg;
    msg << "bisection bracket [" << lo << ", " << hi << "] has no sign change";
    throw NumericFailure(msg.str());
  }
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  auto tol = [rel_tol](double a, double b) {
    return std::abs(b - a) <= rel_tol * std::max(std::abs(a), std::abs(b));
  };
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol, iters);
  if (iters >= static_cast<std::uintmax_t>(max_iter) && !tol(a, b)) {
    throw NumericFailure("bisection did not converge within the iteration cap");
  }
  return 0.5 * (a + b);
}

}  // namespace gsense
