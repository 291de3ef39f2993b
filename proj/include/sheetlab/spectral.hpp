#pragma once

#include <vector>

#include "sheetlab/core.hpp"

// FFTW-backed helpers for 2pi-periodic samples on alpha_j = -pi + j*2pi/N.
namespace sheetlab::spectral {

// f(alpha) = sum_k c_k e^{i k alpha}, returned for k = 0..N/2 (real input).
std::vector<cplx> coefficients(const std::vector<double>& f);
std::vector<double> from_coefficients(const std::vector<cplx>& c, std::size_t n);

// d/dalpha of the trigonometric interpolant, sampled on the same nodes.
std::vector<double> derivative(const std::vector<double>& f, int order = 1);

// Trigonometric interpolant resampled on N*factor nodes (same origin).
std::vector<double> upsample(const std::vector<double>& f, std::size_t factor);

// max_{k >= N/4} |c_k| / max_k |c_k|; 0 for a zero series.
double tail_ratio(const std::vector<double>& f);

// Zero every coefficient with |c_k| < cut (absolute); returns the filtered samples.
std::vector<double> filter(const std::vector<double>& f, double cut);
double max_coefficient(const std::vector<double>& f);

// Closed-form evaluation of the interpolant (and derivatives) at arbitrary alpha.
class TrigSeries {
 public:
  TrigSeries() = default;
  explicit TrigSeries(const std::vector<double>& samples);
  std::size_t size() const { return n_; }
  // value, first and second derivative
  void eval(double alpha, double& f, double& f1, double& f2) const;
  double operator()(double alpha) const;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> c_;
};

// 2-D real transforms on row-major (ny rows, nx columns) arrays.
// Spectrum layout: ny x (nx/2 + 1), unnormalized like FFTW.
void forward2d(std::size_t ny, std::size_t nx, const double* in, cplx* out);
// Inverse including the 1/(nx*ny) normalization. Destroys `in`.
void backward2d(std::size_t ny, std::size_t nx, cplx* in, double* out);

}  // namespace sheetlab::spectral
