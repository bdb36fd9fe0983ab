#include "tri/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>

namespace tri::quad {

void IntegrationSpec::validate() const {
  if (!(absolute_tolerance > 0) || !(relative_tolerance > 0))
    throw std::invalid_argument("IntegrationSpec: tolerances must be positive");
  if (max_evaluations < 100) throw std::invalid_argument("IntegrationSpec: max_evaluations must be >= 100");
}

double distance_to(const Abscissa& x, double point) {
  if (point == x.upper) return x.upper_gap;
  if (point == x.lower) return x.lower_gap;
  return std::abs(x.value - point);
}

namespace {

// 21-point Kronrod rule and its embedded 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452, 0.930157491355708226001207180059508,
    0.865063366688984510732096688423493, 0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784, 0.294392862701460198131126603103866,
    0.148874338981631210884826001129720, 0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390, 0.054755896574351996031381300244580,
    0.075039674810919952767043140916190, 0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707, 0.142775938577060080797094273138717,
    0.147739104901338491374841515972068, 0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                                       0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                                       0.295524224714752870173892994651338};

// Tanh-sinh nodes for t >= 0 on [-1, 1]: offset of the node from the nearer
// end (1 - tanh(pi/2 sinh t)) and the weight (pi/2) cosh t / cosh^2(pi/2 sinh t).
struct TanhSinhNode {
  double offset;
  double weight;
};

constexpr double kTsFirstStep = 0.5;
constexpr double kTsMaxT = 4.5;
constexpr int kTsMaxLevel = 8;

// Level 0 holds t = 0, h, 2h, ...; level k >= 1 holds the odd multiples of h/2^k.
const std::vector<std::vector<TanhSinhNode>>& tanh_sinh_table() {
  static const auto table = [] {
    std::vector<std::vector<TanhSinhNode>> levels(kTsMaxLevel + 1);
    auto node = [](double t) {
      const double u = 0.5 * std::numbers::pi * std::sinh(t);
      const double e = std::exp(-2 * u);
      const double offset = 2 * e / (1 + e);
      // 1/cosh^2(u) = 4 e / (1 + e)^2
      const double weight = 0.5 * std::numbers::pi * std::cosh(t) * 4 * e / ((1 + e) * (1 + e));
      return TanhSinhNode{offset, weight};
    };
    for (double t = 0; t <= kTsMaxT; t += kTsFirstStep) levels[0].push_back(node(t));
    for (int k = 1; k <= kTsMaxLevel; ++k) {
      const double h = kTsFirstStep / static_cast<double>(1 << k);
      for (double t = h; t <= kTsMaxT; t += 2 * h) levels[k].push_back(node(t));
    }
    return levels;
  }();
  return table;
}

enum class Rule { kronrod, tanh_sinh };

struct Segment {
  double lower;
  double upper;
  Rule rule;
  Endpoint singular;  // which ends of this segment are singular
  double value = 0;
  double error = 0;
  std::size_t order = 0;  // creation order, breaks ties deterministically
};

struct ByError {
  bool operator()(const Segment& a, const Segment& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.order > b.order;
  }
};

class PieceIntegrator {
 public:
  PieceIntegrator(const GapIntegrand& f, double lower, double upper, std::size_t& evaluations)
      : f_(f), lower_(lower), upper_(upper), evaluations_(evaluations) {}

  // Node located by its exact offset from either end of segment [s, t].
  double eval_from_lower(double s, double t, double offset) {
    const Abscissa x{s + offset, lower_, upper_, s == lower_ ? offset : (s - lower_) + offset,
                     t == upper_ ? (t - s) - offset : upper_ - (s + offset)};
    return call(x);
  }
  double eval_from_upper(double s, double t, double offset) {
    const Abscissa x{t - offset, lower_, upper_, s == lower_ ? (t - s) - offset : (t - offset) - lower_,
                     t == upper_ ? offset : (upper_ - t) + offset};
    return call(x);
  }

  void kronrod(Segment& seg) {
    const double s = seg.lower, t = seg.upper;
    const double half = 0.5 * (t - s);
    const double centre = kWgk[10] * eval_from_lower(s, t, half);
    double resk = centre;
    double resg = 0;
    for (std::size_t j = 0; j < 10; ++j) {
      const double off = half * (1 - kXgk[j]);
      const double pair = eval_from_lower(s, t, off) + eval_from_upper(s, t, off);
      resk += kWgk[j] * pair;
      if (j % 2 == 1) resg += kWg[j / 2] * pair;
    }
    seg.value = resk * half;
    seg.error = std::abs((resk - resg) * half);
  }

  void tanh_sinh(Segment& seg, double abs_tol, double rel_tol) {
    const auto& table = tanh_sinh_table();
    const double s = seg.lower, t = seg.upper;
    const double half = 0.5 * (t - s);
    auto pair_sum = [&](const TanhSinhNode& n) {
      const double off = half * n.offset;
      if (!(off > 0)) return 0.0;
      if (n.offset == 1) return eval_from_lower(s, t, half);  // centre
      return eval_from_lower(s, t, off) + eval_from_upper(s, t, off);
    };
    double sum = 0;
    for (const auto& n : table[0]) sum += n.weight * pair_sum(n);
    double h = kTsFirstStep;
    double estimate = h * half * sum;
    double error = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kTsMaxLevel; ++k) {
      for (const auto& n : table[k]) sum += n.weight * pair_sum(n);
      h *= 0.5;
      const double next = h * half * sum;
      error = std::abs(next - estimate);
      estimate = next;
      if (k >= 3 && error <= std::max(abs_tol, rel_tol * std::abs(estimate))) break;
    }
    seg.value = estimate;
    seg.error = error;
  }

 private:
  double call(const Abscissa& x) {
    ++evaluations_;
    const double v = f_(x);
    if (!std::isfinite(v))
      throw std::domain_error("integrate: non-finite integrand value at x = " + std::to_string(x.value));
    return v;
  }

  const GapIntegrand& f_;
  double lower_;
  double upper_;
  std::size_t& evaluations_;
};

// Global adaptive integration over [lower, upper] with the given singular ends.
QuadratureResult integrate_piece(const GapIntegrand& f, double lower, double upper, Endpoint singular,
                                 const IntegrationSpec& spec, std::size_t budget) {
  QuadratureResult result;
  std::size_t evaluations = 0;
  PieceIntegrator integrator(f, lower, upper, evaluations);
  std::size_t order = 0;

  const double ts_abs = 0.25 * spec.absolute_tolerance;
  const double ts_rel = 0.25 * spec.relative_tolerance;
  auto evaluate = [&](Segment& seg) {
    if (seg.rule == Rule::kronrod)
      integrator.kronrod(seg);
    else
      integrator.tanh_sinh(seg, ts_abs, ts_rel);
  };

  std::priority_queue<Segment, std::vector<Segment>, ByError> queue;
  std::vector<Segment> done;  // segments too narrow to split further
  auto push = [&](Segment& seg) {
    seg.order = order++;
    evaluate(seg);
    queue.push(seg);
  };

  const double mid = 0.5 * (lower + upper);
  std::vector<Segment> initial;
  if (singular == Endpoint::none) {
    initial.push_back({lower, upper, Rule::kronrod, Endpoint::none});
  } else if (singular == Endpoint::both) {
    initial.push_back({lower, upper, Rule::tanh_sinh, Endpoint::both});
  } else if (singular == Endpoint::lower) {
    initial.push_back({lower, mid, Rule::tanh_sinh, Endpoint::lower});
    initial.push_back({mid, upper, Rule::kronrod, Endpoint::none});
  } else {
    initial.push_back({lower, mid, Rule::kronrod, Endpoint::none});
    initial.push_back({mid, upper, Rule::tanh_sinh, Endpoint::upper});
  }
  for (auto& seg : initial) push(seg);

  auto totals = [&](double& value, double& error) {
    std::vector<const Segment*> all;
    all.reserve(queue.size() + done.size());
    auto copy = queue;
    std::vector<Segment> items;
    items.reserve(queue.size());
    while (!copy.empty()) {
      items.push_back(copy.top());
      copy.pop();
    }
    for (const auto& s : items) all.push_back(&s);
    for (const auto& s : done) all.push_back(&s);
    std::sort(all.begin(), all.end(), [](const Segment* a, const Segment* b) { return a->lower < b->lower; });
    value = 0;
    error = 0;
    double comp = 0;
    for (const Segment* s : all) {
      const double y = s->value - comp;
      const double t = value + y;
      comp = (t - value) - y;
      value = t;
      error += s->error;
    }
  };

  // Running totals are kept incrementally and re-summed in abscissa order now and then.
  double value = 0, error = 0;
  totals(value, error);
  while (true) {
    const double tolerance = std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(value));
    if (error <= tolerance) break;
    if (queue.empty() || evaluations >= budget) {
      result.converged = false;
      break;
    }
    Segment worst = queue.top();
    queue.pop();
    const double m = 0.5 * (worst.lower + worst.upper);
    const double scale = std::max({std::abs(worst.lower), std::abs(worst.upper), std::numeric_limits<double>::min()});
    if (!(m > worst.lower && m < worst.upper) || worst.upper - worst.lower < 64 * std::numeric_limits<double>::epsilon() * scale) {
      done.push_back(worst);
      continue;
    }
    value -= worst.value;
    error -= worst.error;
    Segment left{worst.lower, m, Rule::kronrod, Endpoint::none};
    Segment right{m, worst.upper, Rule::kronrod, Endpoint::none};
    if (worst.rule == Rule::tanh_sinh) {
      if (has(worst.singular, Endpoint::lower)) {
        left.rule = Rule::tanh_sinh;
        left.singular = Endpoint::lower;
      }
      if (has(worst.singular, Endpoint::upper)) {
        right.rule = Rule::tanh_sinh;
        right.singular = Endpoint::upper;
      }
    }
    push(left);
    push(right);
    value += left.value + right.value;
    error += left.error + right.error;
    // Guard against drift of the incremental totals.
    if (order % 64 == 0) totals(value, error);
  }
  totals(value, error);
  result.value = value;
  result.error_estimate = error;
  result.evaluations = evaluations;
  if (result.converged) {
    const double tolerance = std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(value));
    result.converged = error <= tolerance;
  }
  return result;
}

void check_limits(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper))
    throw std::invalid_argument("integrate: limits must be finite with lower < upper");
}

}  // namespace

QuadratureResult integrate_1d(const GapIntegrand& f, double lower, double upper, const IntegrationSpec& spec) {
  spec.validate();
  check_limits(lower, upper);

  std::vector<double> cuts{lower};
  std::vector<double> splits = spec.split_points;
  std::sort(splits.begin(), splits.end());
  for (double p : splits)
    if (p > cuts.back() && p < upper) cuts.push_back(p);
  cuts.push_back(upper);

  const std::size_t pieces = cuts.size() - 1;
  QuadratureResult total;
  double comp = 0;
  for (std::size_t i = 0; i < pieces; ++i) {
    Endpoint singular = Endpoint::none;
    if (i > 0 || has(spec.singular_endpoints, Endpoint::lower)) singular = singular | Endpoint::lower;
    if (i + 1 < pieces || has(spec.singular_endpoints, Endpoint::upper)) singular = singular | Endpoint::upper;
    IntegrationSpec piece_spec = spec;
    piece_spec.absolute_tolerance = spec.absolute_tolerance / static_cast<double>(pieces);
    const std::size_t budget = spec.max_evaluations > total.evaluations ? spec.max_evaluations - total.evaluations : 0;
    const auto r = integrate_piece(f, cuts[i], cuts[i + 1], singular, piece_spec, budget);
    const double y = r.value - comp;
    const double t = total.value + y;
    comp = (t - total.value) - y;
    total.value = t;
    total.error_estimate += r.error_estimate;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  }
  return total;
}

QuadratureResult integrate_1d(const Integrand& f, double lower, double upper, const IntegrationSpec& spec) {
  // Nodes that round onto an end point carry negligible weight; skip them
  // rather than evaluate a plain integrand at its (possibly singular) end.
  const GapIntegrand g = [&f](const Abscissa& x) {
    if (x.value <= x.lower || x.value >= x.upper) return 0.0;
    return f(x.value);
  };
  return integrate_1d(g, lower, upper, spec);
}

QuadratureResult integrate_2d(const GapIntegrand2D& f, const Region& region, const IntegrationSpec& spec) {
  spec.validate();
  check_limits(region.lower, region.upper);
  if (!region.section) throw std::invalid_argument("integrate_2d: region has no section function");

  IntegrationSpec inner_spec;
  inner_spec.absolute_tolerance = 0.1 * spec.absolute_tolerance / (region.upper - region.lower);
  inner_spec.relative_tolerance = 0.1 * spec.relative_tolerance;
  inner_spec.max_evaluations = std::max<std::size_t>(100'000, spec.max_evaluations / 100);

  std::size_t inner_evaluations = 0;
  bool inner_converged = true;
  const GapIntegrand outer = [&](const Abscissa& x) {
    const auto sec = region.section(x);
    if (!sec || !(sec->lower < sec->upper)) return 0.0;
    IntegrationSpec s = inner_spec;
    s.singular_endpoints = sec->singular;
    s.split_points = sec->split_points;
    const GapIntegrand inner = [&](const Abscissa& y) { return f(x, y); };
    const auto r = integrate_1d(inner, sec->lower, sec->upper, s);
    inner_evaluations += r.evaluations;
    if (!r.converged) {
      // Tanh-sinh weights near a singular end are bounded by a small multiple
      // of the distance to it, so a failed inner integral there is harmless
      // when its weighted error stays below the tolerance.
      double reach = x.upper - x.lower;
      if (has(region.singular, Endpoint::lower) || !region.split_points.empty()) reach = std::min(reach, x.lower_gap);
      if (has(region.singular, Endpoint::upper) || !region.split_points.empty()) reach = std::min(reach, x.upper_gap);
      if (!(64 * reach * r.error_estimate <= 0.1 * spec.absolute_tolerance)) inner_converged = false;
    }
    return r.value;
  };

  IntegrationSpec outer_spec = spec;
  outer_spec.singular_endpoints = region.singular;
  outer_spec.split_points = region.split_points;
  auto result = integrate_1d(outer, region.lower, region.upper, outer_spec);
  result.evaluations += inner_evaluations;
  result.converged = result.converged && inner_converged;
  return result;
}

QuadratureResult integrate_2d(const Integrand2D& f, const Region& region, const IntegrationSpec& spec) {
  const GapIntegrand2D g = [&f](const Abscissa& x, const Abscissa& y) {
    if (y.value <= y.lower || y.value >= y.upper) return 0.0;
    return f(x.value, y.value);
  };
  return integrate_2d(g, region, spec);
}

QuadratureResult integrate_2d(const Integrand2D& f, const std::function<bool(double, double)>& inside, const Box& box,
                              const IntegrationSpec& spec) {
  if (!(box.x_lower < box.x_upper) || !(box.y_lower < box.y_upper))
    throw std::invalid_argument("integrate_2d: empty bounding box");

  // Sections thinner than the coarse scan spacing are searched for on finer scans.
  constexpr std::array<int, 3> scans = {256, 4096, 65536};
  auto boundary = [&](double x, double out, double in) {
    // Bisection to adjacent doubles between an outside and an inside ordinate.
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (out + in);
      if (mid == out || mid == in) break;
      (inside(x, mid) ? in : out) = mid;
    }
    return in;
  };

  Region region;
  region.lower = box.x_lower;
  region.upper = box.x_upper;
  region.singular = Endpoint::both;
  region.section = [&](const Abscissa& outer) -> std::optional<Section> {
    const double x = outer.value;
    int first = -1, last = -1, scan = 0;
    double dy = 0;
    for (int level : scans) {
      scan = level;
      dy = (box.y_upper - box.y_lower) / scan;
      for (int i = 0; i < scan; ++i) {
        const double y = box.y_lower + (i + 0.5) * dy;
        if (inside(x, y)) {
          if (first < 0) first = i;
          last = i;
        } else if (first >= 0) {
          break;
        }
      }
      if (first >= 0) break;
    }
    if (first < 0) return std::nullopt;
    const double y_in_lo = box.y_lower + (first + 0.5) * dy;
    const double y_in_hi = box.y_lower + (last + 0.5) * dy;
    const double lo = boundary(x, first == 0 ? box.y_lower : y_in_lo - dy, y_in_lo);
    const double hi = boundary(x, last == scan - 1 ? box.y_upper : y_in_hi + dy, y_in_hi);
    if (!(lo < hi)) return std::nullopt;
    return Section{lo, hi, Endpoint::both};
  };
  return integrate_2d(f, region, spec);
}

}  // namespace tri::quad
