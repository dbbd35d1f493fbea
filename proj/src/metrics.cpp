#include "tisr/metrics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <numbers>
#include <ostream>

namespace tisr {

double psnr(const Image& a, const Image& b) {
  require_same_shape(a, b, "psnr");
  auto pa = a.pixels();
  auto pb = b.pixels();
  double sse = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = pa[i] - pb[i];
    sse += d * d;
  }
  if (sse == 0.0) return kInfinitePsnr;
  const double mse = sse / static_cast<double>(pa.size());
  return 10.0 * std::log10(1.0 / mse);
}

namespace {

constexpr std::size_t kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

std::vector<double> ssim_taps() {
  std::vector<double> g(kSsimWindow);
  const double center = (kSsimWindow - 1) / 2.0;
  double total = 0.0;
  for (std::size_t i = 0; i < kSsimWindow; ++i) {
    const double d = static_cast<double>(i) - center;
    g[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    total += g[i];
  }
  for (double& v : g) v /= total;
  return g;
}

// Separable 'valid' filtering of a flat h x w buffer.
std::vector<double> filter_valid(const std::vector<double>& src, std::size_t h,
                                 std::size_t w, const std::vector<double>& g) {
  const std::size_t k = g.size();
  const std::size_t oh = h - k + 1;
  const std::size_t ow = w - k + 1;
  std::vector<double> tmp(h * ow);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) acc += g[t] * src[r * w + c + t];
      tmp[r * ow + c] = acc;
    }
  }
  std::vector<double> out(oh * ow);
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) acc += g[t] * tmp[(r + t) * ow + c];
      out[r * ow + c] = acc;
    }
  }
  return out;
}

}  // namespace

double ssim(const Image& a, const Image& b) {
  require_same_shape(a, b, "ssim");
  if (a.height() < kSsimWindow || a.width() < kSsimWindow) {
    throw Error(ErrorCode::InvalidArgument, "ssim needs images of at least 11x11");
  }
  const std::size_t h = a.height();
  const std::size_t w = a.width();
  const auto g = ssim_taps();
  std::vector<double> va(a.pixels().begin(), a.pixels().end());
  std::vector<double> vb(b.pixels().begin(), b.pixels().end());
  std::vector<double> aa(va.size()), bb(va.size()), ab(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) {
    aa[i] = va[i] * va[i];
    bb[i] = vb[i] * vb[i];
    ab[i] = va[i] * vb[i];
  }
  const auto mu_a = filter_valid(va, h, w, g);
  const auto mu_b = filter_valid(vb, h, w, g);
  const auto e_aa = filter_valid(aa, h, w, g);
  const auto e_bb = filter_valid(bb, h, w, g);
  const auto e_ab = filter_valid(ab, h, w, g);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double var_a = e_aa[i] - mu_a[i] * mu_a[i];
    const double var_b = e_bb[i] - mu_b[i] * mu_b[i];
    const double cov = e_ab[i] - mu_a[i] * mu_b[i];
    const double num = (2.0 * mu_a[i] * mu_b[i] + kSsimC1) * (2.0 * cov + kSsimC2);
    const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kSsimC1) *
                       (var_a + var_b + kSsimC2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

namespace {

using Complex = std::complex<double>;

struct FftwDeleter {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer fftw_buffer(std::size_t n) {
  return FftwBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

void fft2(fftw_complex* data, std::size_t h, std::size_t w, int sign) {
  fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), data, data,
                                    sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

// DFT bin (or circular lag) k of length n mapped to [-n/2, n/2).
double signed_index(std::size_t k, std::size_t n) {
  return k < (n + 1) / 2 ? static_cast<double>(k)
                         : static_cast<double>(k) - static_cast<double>(n);
}

// Periodic Hann taper evaluated at continuous position y in [0, n].
double hann(double y, std::size_t n) {
  if (y < 0.0 || y > static_cast<double>(n)) return 0.0;
  return 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * y / static_cast<double>(n));
}

// Normalized autocorrelation of the taper at a fractional lag. Dividing the
// correlation surface by it removes the pull of the taper toward zero lag.
double hann_autocorrelation(double lag, std::size_t n) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const double y = static_cast<double>(x) + 0.5;
    num += hann(y, n) * hann(y + lag, n);
    den += hann(y, n) * hann(y, n);
  }
  return num / den;
}

}  // namespace

ShiftEstimate estimate_shift(const Image& a, const Image& b, int upsample) {
  require_same_shape(a, b, "estimate_shift");
  if (upsample < 10) {
    throw Error(ErrorCode::InvalidArgument, "estimate_shift needs upsample >= 10");
  }
  const std::size_t h = a.height();
  const std::size_t w = a.width();
  const std::size_t n = h * w;

  auto fa = fftw_buffer(n);
  auto fb = fftw_buffer(n);
  const double mean_a = mean(a);
  const double mean_b = mean(b);
  double energy_a = 0.0;
  double energy_b = 0.0;
  auto pa = a.pixels();
  auto pb = b.pixels();
  std::vector<double> taper_r(h), taper_c(w);
  for (std::size_t r = 0; r < h; ++r) taper_r[r] = hann(static_cast<double>(r) + 0.5, h);
  for (std::size_t c = 0; c < w; ++c) taper_c[c] = hann(static_cast<double>(c) + 0.5, w);
  // b is tapered by the window of a moved by (lag_r, lag_c), wrapping around.
  auto taper_b = [&](long lag_r, long lag_c) {
    const auto lh = static_cast<long>(h);
    const auto lw = static_cast<long>(w);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<long>(i / w);
      const auto c = static_cast<long>(i % w);
      const double taper = taper_r[static_cast<std::size_t>(((r - lag_r) % lh + lh) % lh)] *
                           taper_c[static_cast<std::size_t>(((c - lag_c) % lw + lw) % lw)];
      fb[i][0] = (pb[i] - mean_b) * taper;
      fb[i][1] = 0.0;
    }
    fft2(fb.get(), h, w, FFTW_FORWARD);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double taper = taper_r[i / w] * taper_c[i % w];
    fa[i][0] = (pa[i] - mean_a) * taper;
    fa[i][1] = 0.0;
    energy_a += fa[i][0] * fa[i][0];
    energy_b += (pb[i] - mean_b) * taper * (pb[i] - mean_b) * taper;
  }
  if (energy_a < 1e-20 || energy_b < 1e-20) {
    throw Error(ErrorCode::DegenerateInput, "estimate_shift: constant image");
  }
  fft2(fa.get(), h, w, FFTW_FORWARD);
  taper_b(0, 0);

  // Cross-power spectrum G conj(F); its inverse peaks at the lag t with
  // b(x) ~= a(x - t).
  std::vector<Complex> cross(n);
  auto phase = fftw_buffer(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex f(fa[i][0], fa[i][1]);
    const Complex g(fb[i][0], fb[i][1]);
    cross[i] = g * std::conj(f);
    const double mag = std::abs(cross[i]);
    const Complex unit = mag > 1e-300 ? cross[i] / mag : Complex(0.0, 0.0);
    phase[i][0] = unit.real();
    phase[i][1] = unit.imag();
  }
  fft2(phase.get(), h, w, FFTW_BACKWARD);

  std::size_t peak = 0;
  double peak_value = -std::numeric_limits<double>::infinity();
  double abs_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = phase[i][0];
    abs_total += std::abs(v);
    if (v > peak_value) {
      peak_value = v;
      peak = i;
    }
  }
  const double coarse_r = signed_index(peak / w, h);
  const double coarse_c = signed_index(peak % w, w);

  // Re-window b over the content matched by the integer lag before refining.
  if (coarse_r != 0.0 || coarse_c != 0.0) {
    taper_b(static_cast<long>(coarse_r), static_cast<long>(coarse_c));
    for (std::size_t i = 0; i < n; ++i) {
      cross[i] = Complex(fb[i][0], fb[i][1]) * std::conj(Complex(fa[i][0], fa[i][1]));
    }
  }

  // Upsampled cross-correlation over a +-1.5 pixel window around the coarse
  // peak, evaluated as E_r * R * E_c.
  const double step = 1.0 / upsample;
  const auto half = static_cast<long>(std::ceil(1.5 * upsample));
  const std::size_t m = static_cast<std::size_t>(2 * half + 1);
  std::vector<double> lag_r(m), lag_c(m);
  for (std::size_t t = 0; t < m; ++t) {
    const double offset = static_cast<double>(static_cast<long>(t) - half) * step;
    lag_r[t] = coarse_r + offset;
    lag_c[t] = coarse_c + offset;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Complex> kern_c(w * m);  // [v][t]
  for (std::size_t v = 0; v < w; ++v) {
    const double fv = signed_index(v, w);
    for (std::size_t t = 0; t < m; ++t) {
      kern_c[v * m + t] = std::polar(1.0, two_pi * fv * lag_c[t] / static_cast<double>(w));
    }
  }
  // row_stage[u][t] = sum_v R[u][v] kern_c[v][t]
  std::vector<Complex> row_stage(h * m, Complex(0.0, 0.0));
  for (std::size_t u = 0; u < h; ++u) {
    for (std::size_t v = 0; v < w; ++v) {
      const Complex r = cross[u * w + v];
      const Complex* kc = &kern_c[v * m];
      Complex* out = &row_stage[u * m];
      for (std::size_t t = 0; t < m; ++t) out[t] += r * kc[t];
    }
  }
  std::vector<Complex> kern_r(m * h);  // [t][u]
  for (std::size_t t = 0; t < m; ++t) {
    for (std::size_t u = 0; u < h; ++u) {
      const double fu = signed_index(u, h);
      kern_r[t * h + u] = std::polar(1.0, two_pi * fu * lag_r[t] / static_cast<double>(h));
    }
  }
  std::vector<double> rho_r(m), rho_c(m);
  for (std::size_t t = 0; t < m; ++t) {
    rho_r[t] = hann_autocorrelation(lag_r[t] - coarse_r, h);
    rho_c[t] = hann_autocorrelation(lag_c[t] - coarse_c, w);
  }
  std::size_t best_tr = 0, best_tc = 0;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<Complex> surface(m);
  for (std::size_t tr = 0; tr < m; ++tr) {
    std::fill(surface.begin(), surface.end(), Complex(0.0, 0.0));
    for (std::size_t u = 0; u < h; ++u) {
      const Complex k = kern_r[tr * h + u];
      const Complex* rs = &row_stage[u * m];
      for (std::size_t tc = 0; tc < m; ++tc) surface[tc] += k * rs[tc];
    }
    for (std::size_t tc = 0; tc < m; ++tc) {
      const double rho = rho_r[tr] * rho_c[tc];
      if (rho <= 1e-3) continue;
      const double v = surface[tc].real() / rho;
      if (v > best) {
        best = v;
        best_tr = tr;
        best_tc = tc;
      }
    }
  }

  ShiftEstimate est;
  est.dy = lag_r[best_tr];
  est.dx = -lag_c[best_tc];
  est.confidence = peak_value / (abs_total / static_cast<double>(n));
  // Avoid printing -0.
  if (est.dx == 0.0) est.dx = 0.0;
  if (est.dy == 0.0) est.dy = 0.0;
  return est;
}

MetricReport evaluate_pair(std::string id, const Image& reconstruction,
                           const Image& ground_truth) {
  MetricReport report;
  report.id = std::move(id);
  report.psnr_db = psnr(reconstruction, ground_truth);
  report.ssim = ssim(reconstruction, ground_truth);
  return report;
}

MetricReport mean_report(const std::vector<MetricReport>& rows) {
  MetricReport mean_row;
  mean_row.id = "mean";
  double psnr_total = 0.0;
  std::size_t psnr_count = 0;
  double ssim_total = 0.0;
  ShiftEstimate shift_total;
  std::size_t shift_count = 0;
  for (const auto& r : rows) {
    if (std::isfinite(r.psnr_db)) {
      psnr_total += r.psnr_db;
      ++psnr_count;
    }
    ssim_total += r.ssim;
    if (r.shift) {
      shift_total.dx += r.shift->dx;
      shift_total.dy += r.shift->dy;
      shift_total.confidence += r.shift->confidence;
      ++shift_count;
    }
  }
  mean_row.psnr_db = psnr_count > 0 ? psnr_total / static_cast<double>(psnr_count)
                                    : (rows.empty() ? 0.0 : kInfinitePsnr);
  mean_row.ssim = rows.empty() ? 0.0 : ssim_total / static_cast<double>(rows.size());
  if (shift_count > 0) {
    const auto count = static_cast<double>(shift_count);
    mean_row.shift = ShiftEstimate{shift_total.dx / count, shift_total.dy / count,
                                   shift_total.confidence / count};
  }
  return mean_row;
}

std::string format_metric(double value) {
  if (std::isinf(value) && value > 0) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", value);
  return buf;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricReport>& rows) {
  out << "id,psnr_db,ssim,est_dx,est_dy\n";
  auto emit = [&out](const MetricReport& r) {
    out << r.id << ',' << format_metric(r.psnr_db) << ',' << format_metric(r.ssim) << ',';
    if (r.shift) {
      out << format_metric(r.shift->dx) << ',' << format_metric(r.shift->dy);
    } else {
      out << ',';
    }
    out << '\n';
  };
  for (const auto& r : rows) emit(r);
  emit(mean_report(rows));
}

}  // namespace tisr
