#include "dephlab/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <vector>

namespace dephlab {

namespace {

constexpr double pi = 3.141592653589793238462643383279503;

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae).
const double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
const double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Extended-precision copies for the oscillatory panels.  Nodes rounded to
// double sit ~1e-16 off the true abscissae; against a kernel with phase
// gradient t that offset turns into a per-panel bias ~1e-16 * t * h * f which
// has one sign relative to the panel and accumulates across thousands of
// half-periods.  Long double nodes push that bias below 1e-18.
const long double kXgkL[8] = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144838258730L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.0L};
const long double kWgkL[8] = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
const long double kWgL[4] = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};
constexpr long double piL = 3.141592653589793238462643383279503L;

struct Stats {
  std::atomic<std::size_t> calls{0};
  std::atomic<std::size_t> evaluations{0};
  std::atomic<std::size_t> failures{0};
  std::atomic<std::size_t> zero_partition{0};
  std::atomic<std::size_t> accelerated{0};
  std::atomic<std::size_t> adaptive{0};
};
Stats g_stats;

struct AbortError {
  std::string reason;
};

struct Workspace {
  std::size_t used = 0;
  std::size_t cap = 0;
  double best_value = 0.0;
  double best_error = std::numeric_limits<double>::infinity();

  void charge(std::size_t n) {
    used += n;
    if (used > cap) throw AbortError{"evaluation budget exceeded"};
  }
};

struct PanelEstimate {
  double value = 0.0;
  double error = 0.0;
  double resabs = 0.0;
};

template <typename F>
PanelEstimate gk15(const F& f, double a, double b, Workspace& ws) {
  ws.charge(15);
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  const double fc = f(c);
  fv[14] = fc;
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = kWgk[7] * std::fabs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    fv[2 * j] = f1;
    fv[2 * j + 1] = f2;
    const double fsum = f1 + f2;
    resk += kWgk[j] * fsum;
    resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) resg += kWg[(j - 1) / 2] * fsum;
  }
  for (double v : fv)
    if (!std::isfinite(v)) throw AbortError{"non-finite integrand value"};
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] *
              (std::fabs(fv[2 * j] - mean) + std::fabs(fv[2 * j + 1] - mean));
  resk *= h;
  resg *= h;
  resabs *= std::fabs(h);
  resasc *= std::fabs(h);
  double err = std::fabs(resk - resg);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  if (eps50 > 0.0) err = std::max(err, eps50 * 1e-2);
  return {resk, err, resabs};
}

struct Segment {
  double a, b, value, error;
};

// Splits the worst segment until the error sum meets the tolerance.
template <typename F>
PanelEstimate adapt(const F& f, double a, double b, double rel, double abs_floor,
                    Workspace& ws, std::size_t max_segments = 400) {
  std::vector<Segment> segs;
  PanelEstimate first = gk15(f, a, b, ws);
  segs.push_back({a, b, first.value, first.error});
  double total = first.value;
  double errsum = first.error;
  double resabs = first.resabs;
  while (errsum > std::max(abs_floor, rel * std::fabs(total)) &&
         segs.size() < max_segments) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].error > segs[worst].error) worst = i;
    const Segment s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) break;  // interval exhausted in doubles
    PanelEstimate left = gk15(f, s.a, mid, ws);
    PanelEstimate right = gk15(f, mid, s.b, ws);
    total += left.value + right.value - s.value;
    errsum += left.error + right.error - s.error;
    segs[worst] = {s.a, mid, left.value, left.error};
    segs.push_back({mid, s.b, right.value, right.error});
  }
  return {total, errsum, resabs};
}

// Phase formed in long double: rounding w*t in double costs ~x*1e-16 radians,
// which at x ~ 1e4 would swamp the cancellation in long-time oscillatory sums.
double kernel_factor(Kernel k, double w, double t) {
  const long double x = static_cast<long double>(w) * static_cast<long double>(t);
  switch (k) {
    case Kernel::Cosine: return static_cast<double>(cosl(x));
    case Kernel::Sine: return static_cast<double>(sinl(x));
    default: return 1.0;
  }
}

// Lower limit in u = ln(omega) beyond which the algebraic endpoint tail
// (~ omega^a up to log factors) is negligible at the requested tolerance.
double transform_lower(double a_eff, double rel, double omega_ref) {
  a_eff = std::max(a_eff, 0.05);
  const double drop = 2.0 * (std::log(rel) - 6.9) / a_eff;
  return std::max(std::log(omega_ref) + drop, -680.0);
}

// First kernel zero at or above x (cosine zeros at (k-1/2)pi/t, sine at k pi/t).
double first_zero_above(Kernel k, double t, double x, long& index) {
  const double shift = (k == Kernel::Cosine) ? 0.5 : 0.0;
  long n = static_cast<long>(std::ceil(x * t / pi + shift - 1e-12));
  if (n < 1) n = 1;
  double z = (static_cast<double>(n) - shift) * pi / t;
  while (z < x) {
    ++n;
    z = (static_cast<double>(n) - shift) * pi / t;
  }
  index = n;
  return z;
}

struct PanelL {
  long double value = 0.0L;
  double error = 0.0;
  long double resabs = 0.0L;
};

// Half-period panel in long double: boundaries, nodes, weights and kernel
// phase all extended precision; only the slowly varying envelope is sampled
// through the double-precision callable.
template <typename F>
PanelL gk15_osc(const F& env, Kernel kernel, double t, long double a,
                long double b, Workspace& ws) {
  ws.charge(15);
  const long double c = 0.5L * (a + b);
  const long double h = 0.5L * (b - a);
  auto sample = [&](long double w) -> long double {
    const long double e = static_cast<long double>(env(static_cast<double>(w)));
    const long double x = w * static_cast<long double>(t);
    return (kernel == Kernel::Cosine) ? e * cosl(x) : e * sinl(x);
  };
  long double fv[15];
  const long double fc = sample(c);
  fv[14] = fc;
  long double resk = kWgkL[7] * fc;
  long double resg = kWgL[3] * fc;
  long double resabs = kWgkL[7] * fabsl(fc);
  for (int j = 0; j < 7; ++j) {
    const long double dx = h * kXgkL[j];
    const long double f1 = sample(c - dx);
    const long double f2 = sample(c + dx);
    fv[2 * j] = f1;
    fv[2 * j + 1] = f2;
    const long double fsum = f1 + f2;
    resk += kWgkL[j] * fsum;
    resabs += kWgkL[j] * (fabsl(f1) + fabsl(f2));
    if (j % 2 == 1) resg += kWgL[(j - 1) / 2] * fsum;
  }
  for (long double v : fv)
    if (!std::isfinite(static_cast<double>(v)))
      throw AbortError{"non-finite integrand value"};
  resk *= h;
  resg *= h;
  resabs *= fabsl(h);
  double err = static_cast<double>(fabsl(resk - resg));
  const double floor = 1e-19 * static_cast<double>(resabs);
  if (err > floor && static_cast<double>(resabs) > 0.0)
    err = static_cast<double>(resabs) *
          std::min(1.0, std::pow(200.0 * err / static_cast<double>(resabs), 1.5));
  err = std::max(err, floor);
  return {resk, err, resabs};
}

template <typename F>
PanelL refined_panel_osc(const F& env, Kernel kernel, double t, long double a,
                         long double b, Workspace& ws, int depth = 0) {
  PanelL p = gk15_osc(env, kernel, t, a, b, ws);
  if (depth >= 5 || p.resabs == 0.0L ||
      p.error <= 1e-18 * static_cast<double>(p.resabs))
    return p;
  const long double mid = 0.5L * (a + b);
  PanelL l = refined_panel_osc(env, kernel, t, a, mid, ws, depth + 1);
  PanelL r = refined_panel_osc(env, kernel, t, mid, b, ws, depth + 1);
  return {l.value + r.value, l.error + r.error, l.resabs + r.resabs};
}

struct OscillatoryOutcome {
  double value;
  double error;
  bool accelerated;
};

template <typename F>
OscillatoryOutcome oscillatory_sum(const F& f, Kernel kernel, double t,
                                   double head_value, double head_error,
                                   double z_first, long k_first, double omega_max,
                                   Workspace& ws) {
  const long double shift = (kernel == Kernel::Cosine) ? 0.5L : 0.0L;
  auto zero_at = [&](long k) -> long double {
    return (static_cast<long double>(k) - shift) * piL /
           static_cast<long double>(t);
  };

  const long n_full = static_cast<long>((omega_max - z_first) * t / pi);
  long double acc = head_value;
  double errsum = head_error;

  // Direct summation is preferred whenever the evaluation budget allows it:
  // one extended-precision panel per half-period, so the cancellation across
  // panels costs nothing beyond the envelope's own rounding noise.
  const long direct_cap =
      std::min<long>(4096, static_cast<long>((ws.cap - ws.used) / 40));
  if (n_full <= direct_cap) {
    long double lo = z_first;
    for (long m = 1; m <= n_full; ++m) {
      const long double hi = zero_at(k_first + m);
      PanelL p = refined_panel_osc(f, kernel, t, lo, hi, ws);
      acc += p.value;
      errsum += p.error;
      lo = hi;
    }
    if (lo < static_cast<long double>(omega_max)) {
      PanelL p = refined_panel_osc(f, kernel, t, lo, omega_max, ws);
      acc += p.value;
      errsum += p.error;
    }
    return {static_cast<double>(acc), errsum, false};
  }

  // Far more half-periods than we want to touch: sum the first M panels and
  // accelerate the alternating partial sums by iterated averaging.
  const int M = 128;
  std::vector<long double> partial(M);
  long double lo = z_first;
  double max_abs_partial = 0.0;
  double prev_sign = 0.0;
  bool alternating = true;
  for (int m = 0; m < M; ++m) {
    const long double hi = zero_at(k_first + m + 1);
    PanelL p = refined_panel_osc(f, kernel, t, lo, hi, ws);
    const double sign = (p.value > 0.0L) ? 1.0 : ((p.value < 0.0L) ? -1.0 : 0.0);
    if (m > 0 && sign != 0.0 && prev_sign != 0.0 && sign == prev_sign)
      alternating = false;
    if (sign != 0.0) prev_sign = sign;
    acc += p.value;
    errsum += p.error;
    partial[m] = acc;
    max_abs_partial =
        std::max(max_abs_partial, static_cast<double>(std::fabs(acc)));
    lo = hi;
  }
  if (!alternating)
    throw AbortError{"panel sums do not alternate; cannot accelerate"};

  std::vector<long double> col = partial;
  long double apex = col.back();
  long double prev_apex = apex;
  while (col.size() > 1) {
    for (std::size_t i = 0; i + 1 < col.size(); ++i)
      col[i] = 0.5L * (col[i] + col[i + 1]);
    col.pop_back();
    prev_apex = apex;
    apex = col.front();
  }
  const double accel_err =
      static_cast<double>(std::fabs(apex - prev_apex)) +
      1e-19 * M * max_abs_partial;
  return {static_cast<double>(apex), errsum + accel_err, true};
}

QuadratureResult finish(Workspace& ws, double value, double err,
                        const char* strategy) {
  ws.best_value = value;
  ws.best_error = err;
  g_stats.evaluations.fetch_add(ws.used, std::memory_order_relaxed);
  return {value, err, ws.used, strategy};
}

[[noreturn]] void fail(Workspace& ws, const std::string& why,
                       const char* strategy) {
  g_stats.failures.fetch_add(1, std::memory_order_relaxed);
  g_stats.evaluations.fetch_add(ws.used, std::memory_order_relaxed);
  QuadratureResult partial{ws.best_value, ws.best_error, ws.used, strategy};
  throw QuadratureError("quadrature: " + why, partial);
}

}  // namespace

QuadratureResult integrate_weighted(const WeightedIntegrand& req) {
  g_stats.calls.fetch_add(1, std::memory_order_relaxed);
  Workspace ws;
  ws.cap = req.opts.max_evaluations;
  const double rel = std::max(req.opts.rel_tolerance, 1e-14);
  const char* strategy = "adaptive_transformed";
  try {
    if (!(req.omega_max > req.omega_min) || !std::isfinite(req.omega_max))
      throw AbortError{"invalid integration range"};
    if (req.t < 0.0) throw AbortError{"negative time"};

    if (req.kernel == Kernel::None || req.t == 0.0) {
      if (req.kernel == Kernel::Sine)
        return finish(ws, 0.0, 0.0, "exact_zero");
      strategy = "moment_transformed";
      g_stats.adaptive.fetch_add(1, std::memory_order_relaxed);
      if (req.omega_min > 0.0) {
        PanelEstimate p = adapt(req.f, req.omega_min, req.omega_max, rel, 0.0, ws);
        return finish(ws, p.value, p.error, strategy);
      }
      const double omega_ref = req.omega_max;
      const double u_lo = transform_lower(req.endpoint_exponent, rel, omega_ref);
      auto g = [&](double u) {
        const double w = std::exp(u);
        return req.f(w) * w;
      };
      PanelEstimate p = adapt(g, u_lo, std::log(req.omega_max), rel, 0.0, ws);
      return finish(ws, p.value, p.error, strategy);
    }

    const double a_eff =
        req.endpoint_exponent + (req.kernel == Kernel::Sine ? 1.0 : 0.0);
    if (a_eff <= 0.0) throw AbortError{"non-integrable endpoint"};

    const double periods = (req.omega_max - req.omega_min) * req.t / pi;
    if (periods < 8.0) {
      g_stats.adaptive.fetch_add(1, std::memory_order_relaxed);
      auto weighted = [&](double w) {
        return req.f(w) * kernel_factor(req.kernel, w, req.t);
      };
      if (req.omega_min > 0.0) {
        PanelEstimate scale = gk15(weighted, req.omega_min, req.omega_max, ws);
        PanelEstimate p = adapt(weighted, req.omega_min, req.omega_max, rel,
                                rel * 1e-2 * scale.resabs, ws);
        return finish(ws, p.value, p.error, strategy);
      }
      const double omega_ref = std::min(req.omega_max, 1.0 / req.t);
      const double u_lo = transform_lower(a_eff, rel, omega_ref);
      auto g = [&](double u) {
        const double w = std::exp(u);
        return weighted(w) * w;
      };
      const double u_hi = std::log(req.omega_max);
      PanelEstimate scale = gk15(g, u_lo, u_hi, ws);
      PanelEstimate p = adapt(g, u_lo, u_hi, rel, rel * 1e-2 * scale.resabs, ws);
      return finish(ws, p.value, p.error, strategy);
    }

    strategy = "zero_partition";
    g_stats.zero_partition.fetch_add(1, std::memory_order_relaxed);
    long k_first = 0;
    const double z_first =
        first_zero_above(req.kernel, req.t, req.omega_min, k_first);
    double head_value = 0.0;
    double head_error = 0.0;
    if (z_first > req.omega_min) {
      if (req.omega_min > 0.0) {
        auto weighted = [&](double w) {
          return req.f(w) * kernel_factor(req.kernel, w, req.t);
        };
        PanelEstimate p = adapt(weighted, req.omega_min, z_first, rel, 0.0, ws);
        head_value = p.value;
        head_error = p.error;
      } else {
        // kernel keeps one sign below its first zero, so a pure relative
        // target is safe here even with the endpoint transform
        const double u_lo = transform_lower(a_eff, rel, z_first);
        auto g = [&](double u) {
          const double w = std::exp(u);
          return req.f(w) * kernel_factor(req.kernel, w, req.t) * w;
        };
        PanelEstimate p = adapt(g, u_lo, std::log(z_first), rel, 0.0, ws);
        head_value = p.value;
        head_error = p.error;
      }
    }
    OscillatoryOutcome out =
        oscillatory_sum(req.f, req.kernel, req.t, head_value, head_error,
                        z_first, k_first, req.omega_max, ws);
    if (out.accelerated) {
      strategy = "zero_partition_accelerated";
      g_stats.accelerated.fetch_add(1, std::memory_order_relaxed);
    } else {
      strategy = "zero_partition_direct";
    }
    return finish(ws, out.value, out.error, strategy);
  } catch (const AbortError& e) {
    fail(ws, e.reason, strategy);
  }
}

QuadratureResult integrate_moment(const std::function<double(double)>& f,
                                  double endpoint_exponent, double omega_max,
                                  const QuadratureOptions& opts) {
  WeightedIntegrand req;
  req.f = f;
  req.kernel = Kernel::None;
  req.endpoint_exponent = endpoint_exponent;
  req.omega_max = omega_max;
  req.opts = opts;
  return integrate_weighted(req);
}

QuadratureResult integrate_plain(const std::function<double(double)>& f, double a,
                                 double b, const QuadratureOptions& opts) {
  g_stats.calls.fetch_add(1, std::memory_order_relaxed);
  g_stats.adaptive.fetch_add(1, std::memory_order_relaxed);
  Workspace ws;
  ws.cap = opts.max_evaluations;
  const double rel = std::max(opts.rel_tolerance, 1e-14);
  try {
    PanelEstimate p = adapt(f, a, b, rel, 0.0, ws);
    return finish(ws, p.value, p.error, "plain_adaptive");
  } catch (const AbortError& e) {
    fail(ws, e.reason, "plain_adaptive");
  }
}

namespace {

struct ComplexPanel {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
  double resabs = 0.0;
};

ComplexPanel gk15_c(const std::function<std::complex<double>(double)>& f, double a,
                    double b, Workspace& ws) {
  ws.charge(15);
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const std::complex<double> fc = f(c);
  std::complex<double> resk = kWgk[7] * fc;
  std::complex<double> resg = kWg[3] * fc;
  double resabs = kWgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const std::complex<double> f1 = f(c - dx);
    const std::complex<double> f2 = f(c + dx);
    if (!std::isfinite(f1.real()) || !std::isfinite(f1.imag()) ||
        !std::isfinite(f2.real()) || !std::isfinite(f2.imag()))
      throw AbortError{"non-finite integrand value"};
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
  }
  resk *= h;
  resg *= h;
  resabs *= std::fabs(h);
  return {resk, std::abs(resk - resg), resabs};
}

}  // namespace

ComplexResult integrate_complex(const std::function<std::complex<double>(double)>& f,
                                double a, double b, const QuadratureOptions& opts) {
  g_stats.calls.fetch_add(1, std::memory_order_relaxed);
  g_stats.adaptive.fetch_add(1, std::memory_order_relaxed);
  Workspace ws;
  ws.cap = opts.max_evaluations;
  const double rel = std::max(opts.rel_tolerance, 1e-14);
  try {
    struct CSeg {
      double a, b;
      std::complex<double> value;
      double error;
    };
    std::vector<CSeg> segs;
    ComplexPanel first = gk15_c(f, a, b, ws);
    segs.push_back({a, b, first.value, first.error});
    std::complex<double> total = first.value;
    double errsum = first.error;
    while (errsum > rel * std::abs(total) && segs.size() < 600) {
      std::size_t worst = 0;
      for (std::size_t i = 1; i < segs.size(); ++i)
        if (segs[i].error > segs[worst].error) worst = i;
      const CSeg s = segs[worst];
      const double mid = 0.5 * (s.a + s.b);
      if (mid <= s.a || mid >= s.b) break;
      ComplexPanel left = gk15_c(f, s.a, mid, ws);
      ComplexPanel right = gk15_c(f, mid, s.b, ws);
      total += left.value + right.value - s.value;
      errsum += left.error + right.error - s.error;
      segs[worst] = {s.a, mid, left.value, left.error};
      segs.push_back({mid, s.b, right.value, right.error});
    }
    g_stats.evaluations.fetch_add(ws.used, std::memory_order_relaxed);
    return {total, errsum, ws.used};
  } catch (const AbortError& e) {
    g_stats.failures.fetch_add(1, std::memory_order_relaxed);
    g_stats.evaluations.fetch_add(ws.used, std::memory_order_relaxed);
    QuadratureResult partial{0.0, std::numeric_limits<double>::infinity(),
                             ws.used, "complex_adaptive"};
    throw QuadratureError("quadrature: " + e.reason, partial);
  }
}

double exp_envelope_truncation(double omega_c, double alpha, double rel_tolerance) {
  // The +12 margin keeps the discarded tail five orders below the requested
  // tolerance; oscillatory integrals can cancel down to that level and the
  // truncation bias is not reduced by the kernel averaging.
  const double L =
      std::max(std::log(1.0 / std::max(rel_tolerance, 1e-300)), 1.0) + 12.0;
  return omega_c * (L + (alpha + 2.0) * std::log(L + 2.718281828459045));
}

QuadratureStatsSnapshot quadrature_stats() {
  QuadratureStatsSnapshot s;
  s.calls = g_stats.calls.load();
  s.evaluations = g_stats.evaluations.load();
  s.failures = g_stats.failures.load();
  s.zero_partition = g_stats.zero_partition.load();
  s.accelerated = g_stats.accelerated.load();
  s.adaptive = g_stats.adaptive.load();
  return s;
}

void reset_quadrature_stats() {
  g_stats.calls.store(0);
  g_stats.evaluations.store(0);
  g_stats.failures.store(0);
  g_stats.zero_partition.store(0);
  g_stats.accelerated.store(0);
  g_stats.adaptive.store(0);
}

}  // namespace dephlab
