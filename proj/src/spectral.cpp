#include "sheetlab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace sheetlab::spectral {

namespace {

// the FFTW planner is not thread safe; execution is
std::mutex planner_mutex;

struct Plan {
  fftw_plan p = nullptr;
  ~Plan() {
    if (p) {
      std::lock_guard<std::mutex> lk(planner_mutex);
      fftw_destroy_plan(p);
    }
  }
};

// unnormalized r2c of length n: F_k = sum_j f_j e^{-2 pi i jk/n}
std::vector<cplx> r2c(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  std::vector<double> in(f);
  std::vector<cplx> out(n / 2 + 1);
  Plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    plan.p = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                  FFTW_ESTIMATE);
  }
  fftw_execute(plan.p);
  return out;
}

// inverse of r2c including 1/n
std::vector<double> c2r(std::vector<cplx> F, std::size_t n) {
  std::vector<double> out(n);
  Plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    plan.p = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(F.data()),
                                  out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan.p);
  const double s = 1.0 / static_cast<double>(n);
  for (auto& v : out) v *= s;
  return out;
}

void check_len(std::size_t n) {
  if (n < 4 || n % 2 != 0) throw InvalidArgument("spectral: sample count must be even and >= 4");
}

}  // namespace

std::vector<cplx> coefficients(const std::vector<double>& f) {
  check_len(f.size());
  auto F = r2c(f);
  const double s = 1.0 / static_cast<double>(f.size());
  // nodes start at -pi: shift by (-1)^k
  for (std::size_t k = 0; k < F.size(); ++k) F[k] *= (k % 2 ? -s : s);
  return F;
}

std::vector<double> from_coefficients(const std::vector<cplx>& c, std::size_t n) {
  std::vector<cplx> F(n / 2 + 1, cplx(0.0));
  const double s = static_cast<double>(n);
  for (std::size_t k = 0; k < F.size() && k < c.size(); ++k) F[k] = c[k] * (k % 2 ? -s : s);
  return c2r(std::move(F), n);
}

std::vector<double> derivative(const std::vector<double>& f, int order) {
  check_len(f.size());
  const std::size_t n = f.size();
  auto F = r2c(f);
  const std::size_t nyq = n / 2;
  for (std::size_t k = 0; k < F.size(); ++k) {
    cplx m = std::pow(cplx(0.0, static_cast<double>(k)), order);
    F[k] *= m;
  }
  // odd derivatives of the Nyquist mode vanish on the nodes
  if (order % 2 == 1) F[nyq] = 0.0;
  return c2r(std::move(F), n);
}

std::vector<double> upsample(const std::vector<double>& f, std::size_t factor) {
  check_len(f.size());
  if (factor == 1) return f;
  const std::size_t n = f.size(), m = n * factor;
  auto F = r2c(f);
  std::vector<cplx> G(m / 2 + 1, cplx(0.0));
  const double s = static_cast<double>(factor);
  for (std::size_t k = 0; k < n / 2; ++k) G[k] = F[k] * s;
  // split the Nyquist mode symmetrically
  G[n / 2] = 0.5 * F[n / 2] * s;
  return c2r(std::move(G), m);
}

double max_coefficient(const std::vector<double>& f) {
  auto F = r2c(f);
  double mx = 0.0;
  for (auto& v : F) mx = std::max(mx, std::abs(v));
  return mx / static_cast<double>(f.size());
}

double tail_ratio(const std::vector<double>& f) {
  check_len(f.size());
  auto F = r2c(f);
  double mx = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    double a = std::abs(F[k]);
    mx = std::max(mx, a);
    if (k >= f.size() / 4) tail = std::max(tail, a);
  }
  // a function at roundoff level has no meaningful tail
  return mx > 1e-12 ? tail / mx : 0.0;
}

std::vector<double> filter(const std::vector<double>& f, double cut) {
  check_len(f.size());
  auto F = r2c(f);
  const double scut = cut * static_cast<double>(f.size());
  for (auto& v : F)
    if (std::abs(v) < scut) v = 0.0;
  return c2r(std::move(F), f.size());
}

TrigSeries::TrigSeries(const std::vector<double>& samples)
    : n_(samples.size()), c_(coefficients(samples)) {}

void TrigSeries::eval(double alpha, double& f, double& f1, double& f2) const {
  const std::size_t nyq = n_ / 2;
  f = c_[0].real();
  f1 = 0.0;
  f2 = 0.0;
  const cplx w(std::cos(alpha), std::sin(alpha));
  cplx e = w;
  for (std::size_t k = 1; k < nyq; ++k) {
    const cplx t = c_[k] * e;
    const double kk = static_cast<double>(k);
    f += 2.0 * t.real();
    f1 -= 2.0 * kk * t.imag();
    f2 -= 2.0 * kk * kk * t.real();
    e *= w;
    // renormalize occasionally to keep |e| = 1
    if ((k & 63) == 0) e /= std::abs(e);
  }
  const double kn = static_cast<double>(nyq);
  const double a = c_[nyq].real();
  f += a * std::cos(kn * alpha);
  f1 -= a * kn * std::sin(kn * alpha);
  f2 -= a * kn * kn * std::cos(kn * alpha);
}

double TrigSeries::operator()(double alpha) const {
  double f, f1, f2;
  eval(alpha, f, f1, f2);
  return f;
}

void forward2d(std::size_t ny, std::size_t nx, const double* in, cplx* out) {
  std::vector<double> buf(in, in + nx * ny);
  Plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    plan.p = fftw_plan_dft_r2c_2d(static_cast<int>(ny), static_cast<int>(nx), buf.data(),
                                  reinterpret_cast<fftw_complex*>(out), FFTW_ESTIMATE);
  }
  fftw_execute(plan.p);
}

void backward2d(std::size_t ny, std::size_t nx, cplx* in, double* out) {
  Plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    plan.p = fftw_plan_dft_c2r_2d(static_cast<int>(ny), static_cast<int>(nx),
                                  reinterpret_cast<fftw_complex*>(in), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan.p);
  const double s = 1.0 / static_cast<double>(nx * ny);
  for (std::size_t i = 0; i < nx * ny; ++i) out[i] *= s;
}

}  // namespace sheetlab::spectral
