#include "tri/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tri::specfun {
namespace {

constexpr double pi = std::numbers::pi;

[[noreturn]] void domain_failure(const char* fn, double arg) {
  throw std::domain_error(std::string(fn) + ": argument out of domain (" + std::to_string(arg) + ")");
}

// Complete R_F(0, y, z): the duplication step degenerates into the AGM.
double carlson_rf_complete(double y, double z) {
  static const double tol = 2.7 * std::sqrt(std::numeric_limits<double>::epsilon() * 0.01);
  double xn = std::sqrt(y);
  double yn = std::sqrt(z);
  if (xn < yn) std::swap(xn, yn);
  while (std::abs(xn - yn) > tol * xn) {
    const double t = 0.5 * (xn + yn);
    yn = std::sqrt(xn * yn);
    xn = t;
  }
  return pi / (xn + yn);
}

// Complete R_G(0, y, z) (Carlson 1995, eqs 2.36-2.39).
double carlson_rg_complete(double y, double z) {
  static const double tol = 2.7 * std::sqrt(std::numeric_limits<double>::epsilon() * 0.01);
  const double x0 = std::sqrt(std::max(y, z));
  const double y0 = std::sqrt(std::min(y, z));
  double xn = x0;
  double yn = y0;
  double s = 0.0;
  double mul = 0.25;
  while (std::abs(xn - yn) > tol * xn) {
    double t = 0.5 * (xn + yn);
    yn = std::sqrt(xn * yn);
    xn = t;
    mul *= 2;
    t = xn - yn;
    s += mul * t * t;
  }
  const double h = 0.5 * (x0 + y0);
  return (h * h - s) * pi / (2 * (xn + yn));
}

double dilog_core(double x);

}  // namespace

double carlson_rf(double x, double y, double z) {
  if (!(x >= 0 && y >= 0 && z >= 0) || !std::isfinite(x + y + z)) domain_failure("carlson_rf", std::min({x, y, z}));
  if ((x == 0) + (y == 0) + (z == 0) > 1) domain_failure("carlson_rf", 0.0);

  static const double tol = std::pow(3 * std::numeric_limits<double>::epsilon() * 0.01, 1.0 / 8);
  const double a0 = (x + y + z) / 3;
  double an = a0;
  const double q = std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)}) / tol;
  double x0 = x, y0 = y, z0 = z;
  double mul = 1;
  while (q >= mul * std::abs(an)) {
    const double sx = std::sqrt(x0), sy = std::sqrt(y0), sz = std::sqrt(z0);
    const double lam = sx * sy + sy * sz + sz * sx;
    an = 0.25 * (an + lam);
    x0 = 0.25 * (x0 + lam);
    y0 = 0.25 * (y0 + lam);
    z0 = 0.25 * (z0 + lam);
    mul *= 4;
  }
  const double xx = (a0 - x) / (mul * an);
  const double yy = (a0 - y) / (mul * an);
  const double zz = -(xx + yy);
  const double e2 = xx * yy - zz * zz;
  const double e3 = xx * yy * zz;
  // DLMF 19.36.1 in Horner form.
  return (e3 * (6930 * e3 + e2 * (15015 * e2 - 16380) + 17160) + e2 * ((10010 - 5775 * e2) * e2 - 24024) + 240240) /
         (240240 * std::sqrt(an));
}

double ellip_k(double k) {
  if (!(k >= 0 && k < 1)) domain_failure("ellip_k", k);
  return carlson_rf_complete((1 - k) * (1 + k), 1.0);
}

double ellip_kc(double kc) {
  if (!(kc > 0 && kc <= 1)) domain_failure("ellip_kc", kc);
  return carlson_rf_complete(kc * kc, 1.0);
}

double ellip_e(double k) {
  if (!(k >= 0 && k <= 1)) domain_failure("ellip_e", k);
  if (k == 1) return 1.0;
  return 2 * carlson_rg_complete((1 - k) * (1 + k), 1.0);
}

double ellip_ec(double kc) {
  if (!(kc >= 0 && kc <= 1)) domain_failure("ellip_ec", kc);
  if (kc == 0) return 1.0;
  return 2 * carlson_rg_complete(kc * kc, 1.0);
}

double ellip_f(double phi, double k) {
  if (!(phi >= 0 && phi <= pi / 2)) domain_failure("ellip_f", phi);
  if (!(k >= 0 && k <= 1)) domain_failure("ellip_f", k);
  if (phi == 0) return 0.0;
  if (k == 1 && phi == pi / 2) domain_failure("ellip_f", k);
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double kc2 = (1 - k) * (1 + k);
  // 1 - k^2 sin^2 written as cos^2 + kc^2 sin^2 to stay accurate for k near 1.
  const double delta2 = c * c + kc2 * s * s;
  if (delta2 == 0) domain_failure("ellip_f", k);
  if (phi == pi / 2 && k < 1) return ellip_k(k);
  return s * carlson_rf(c * c, delta2, 1.0);
}

namespace {

double dilog_core(double x) {
  // Li2(x) = sum_n B_n u^(n+1)/(n+1)!, u = -ln(1-x), for -1 <= x <= 1/2.
  // Coefficients B_2k / (2k+1)!.
  static constexpr std::array<double, 11> coef = {
      1.0 / 36,
      -1.0 / 3600,
      1.0 / 211680,
      -1.0 / 10886400,
      1.0 / 526901760,
      -4.0647616451442255e-11,
      8.9216910204564526e-13,
      -1.9939295860721076e-14,
      4.5189800296199182e-16,
      -1.0356517612181247e-17,
      2.3952186210261867e-19,
  };
  const double u = -std::log1p(-x);
  const double u2 = u * u;
  double sum = 0.0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) sum = sum * u2 + *it;
  return u - 0.25 * u2 + u * u2 * sum;
}

}  // namespace

double dilog(double x) {
  if (!std::isfinite(x) || x > 1) domain_failure("dilog", x);
  constexpr double zeta2 = pi * pi / 6;
  if (x == 1) return zeta2;
  if (x < -1) {
    const double l = std::log(-x);
    return -zeta2 - 0.5 * l * l - dilog_core(1 / x);
  }
  if (x > 0.5) return zeta2 - std::log(x) * std::log1p(-x) - dilog_core(1 - x);
  return dilog_core(x);
}

double gamma_fn(double x) {
  if (!(x > 0) || !std::isfinite(x)) domain_failure("gamma_fn", x);
  if (x < 0.5) return pi / (std::sin(pi * x) * gamma_fn(1 - x));

  // Lanczos, g = 7, n = 9.
  static constexpr double g = 7.0;
  static constexpr std::array<double, 9> p = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
  };
  const double z = x - 1;
  double a = p[0];
  for (std::size_t i = 1; i < p.size(); ++i) a += p[i] / (z + static_cast<double>(i));
  const double t = z + g + 0.5;
  // t^(z+1/2) e^-t split in two halves to delay overflow.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2 * pi) * half * (half * std::exp(-t)) * a;
}

SeriesResult hyp3f2_halves(double x, const SeriesOptions& options) {
  if (!(x >= 0 && x <= 1)) domain_failure("hyp3f2_halves", x);
  if (options.max_terms < 64 || !(options.tolerance > 0)) throw std::invalid_argument("hyp3f2_halves: bad options");

  const double lead = 3 / (4 * std::sqrt(2 * pi)) * gamma_fn(0.5) * gamma_fn(0.5) * gamma_fn(1.5) /
                      (gamma_fn(1.25) * gamma_fn(1.75));
  auto ratio = [](long double n) {
    return (n + 0.5L) * (n + 0.5L) * (n + 1.5L) / ((n + 1.25L) * (n + 1.75L) * (n + 1.0L));
  };

  SeriesResult out;
  if (x < 1) {
    long double term = lead;
    long double sum = 0, comp = 0;
    const long double xl = x;
    for (std::size_t n = 0; n < options.max_terms; ++n) {
      // Kahan summation.
      const long double y = term - comp;
      const long double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      out.terms = n + 1;
      // ratio(n) < x for every n, so the remaining tail is below term*x/(1-x).
      const long double next = term * ratio(static_cast<long double>(n)) * xl;
      const long double bound = next / (1 - xl);
      if (bound <= options.tolerance) {
        out.tail_estimate = static_cast<double>(bound);
        out.converged = true;
        break;
      }
      term = next;
      out.tail_estimate = static_cast<double>(bound);
    }
    out.value = static_cast<double>(sum);
    return out;
  }

  // x = 1: S - S_N ~ sum_j d_j N^(-1/2-j). Richardson over N_j = base * 2^j.
  constexpr int levels = 10;
  const std::size_t base = std::max<std::size_t>(options.max_terms >> levels, 16);
  std::vector<std::vector<long double>> table;
  long double term = lead, sum = 0, comp = 0;
  std::size_t n = 0;
  long double previous = 0;
  for (int j = 0; j <= levels; ++j) {
    const std::size_t cut = base << j;
    if (cut > options.max_terms && j > 0) break;
    for (; n < cut; ++n) {
      const long double y = term - comp;
      const long double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      term *= ratio(static_cast<long double>(n));
    }
    std::vector<long double> row{sum};
    for (int m = 1; m <= j; ++m) {
      const long double f = std::pow(2.0L, static_cast<long double>(m) - 0.5L);
      row.push_back((f * row[m - 1] - table[j - 1][m - 1]) / (f - 1));
    }
    const long double diag = row.back();
    table.push_back(std::move(row));
    out.terms = n;
    out.value = static_cast<double>(diag);
    if (j >= 3) {
      out.tail_estimate = static_cast<double>(std::abs(diag - previous));
      if (out.tail_estimate <= options.tolerance) {
        out.converged = true;
        break;
      }
    } else {
      out.tail_estimate = std::numeric_limits<double>::infinity();
    }
    previous = diag;
  }
  return out;
}

}  // namespace tri::specfun
