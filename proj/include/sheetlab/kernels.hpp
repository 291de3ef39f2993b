#pragma once

#include <cstddef>
#include <vector>

#include "sheetlab/core.hpp"

// Pairwise sums over sheet nodes. The default versions parallelize over targets with
// OpenMP and factor every pair term through half-angle tables:
//   cosh dy - cos dx = 2 (sinh^2(dy/2) + sin^2(dx/2)),
//   sinh dy = 2 sinh(dy/2) cosh(dy/2),  sin dx = 2 sin(dx/2) cos(dx/2),
// so a pair costs a handful of flops and one division. Every target is summed serially
// in node order, so results do not depend on the thread count.
// kernels::reference holds straightforward serial versions with direct transcendental
// calls; they are kept for testing and benchmarking.
namespace sheetlab::kernels {

enum class PairMode {
  all_but_self,     // k != j
  opposite_parity,  // alternate-point rule, weights doubled
};

// u at the nodes: u1 = -(1/4pi) sum g_k sinh dy/(cosh dy - cos dx + delta^2) dalpha,
//                 u2 =  (1/4pi) sum g_k sin dx /(...) dalpha
std::vector<Vec2> node_velocity(const std::vector<Vec2>& nodes, const std::vector<double>& gamma,
                                double delta, PairMode mode);

// same sum at arbitrary targets (all nodes)
std::vector<Vec2> point_velocity(const std::vector<Vec2>& nodes, const std::vector<double>& gamma,
                                 double delta, const std::vector<Vec2>& targets);

// out[t*K + m] = sum_j cot((z_t - zeta_j)/2) w[m*N + j]
void cot_sums(const std::vector<Vec2>& nodes, const std::vector<cplx>& w, std::size_t K,
              const std::vector<Vec2>& targets, std::vector<cplx>& out);

// alternate-point principal value at the nodes:
// out[i*K + m] = sum_{j-i odd} cot((zeta_i - zeta_j)/2) 2 w[m*N + j]
void cot_pv(const std::vector<Vec2>& nodes, const std::vector<cplx>& w, std::size_t K,
            std::vector<cplx>& out);

// sum_{j != k} g_j g_k log(2 (cosh dy - cos dx + delta^2))
double blob_pair_log(const std::vector<Vec2>& nodes, const std::vector<double>& gamma, double delta);

// sum_{j != k} g_j g_k log((cosh dy - cos dx) / (2 sin^2((alpha_j - alpha_k)/2)))
double remainder_pair_log(const std::vector<Vec2>& nodes, const std::vector<double>& gamma);

// Periodic 2-D stencil convolution on a row-major ny x nx grid:
// out(i) = sum_s w_s in(i - off_s)
struct Stencil {
  std::vector<int> dx, dy;
  std::vector<double> w;
  std::size_t size() const { return w.size(); }
};
void stencil_convolve(const double* in, std::size_t ny, std::size_t nx, const Stencil& st, double* out);

// r(i) = sum_s w_s (u(i - off_s) - u(i)) (x) (u(i - off_s) - u(i)); three components 11, 12, 22
void stencil_commutator(const double* u1, const double* u2, std::size_t ny, std::size_t nx,
                        const Stencil& st, double* r11, double* r12, double* r22);

int max_threads();

namespace reference {

std::vector<Vec2> node_velocity(const std::vector<Vec2>& nodes, const std::vector<double>& gamma,
                                double delta, PairMode mode);
std::vector<Vec2> point_velocity(const std::vector<Vec2>& nodes, const std::vector<double>& gamma,
                                 double delta, const std::vector<Vec2>& targets);
void cot_sums(const std::vector<Vec2>& nodes, const std::vector<cplx>& w, std::size_t K,
              const std::vector<Vec2>& targets, std::vector<cplx>& out);
void cot_pv(const std::vector<Vec2>& nodes, const std::vector<cplx>& w, std::size_t K,
            std::vector<cplx>& out);
double blob_pair_log(const std::vector<Vec2>& nodes, const std::vector<double>& gamma, double delta);
double remainder_pair_log(const std::vector<Vec2>& nodes, const std::vector<double>& gamma);
void stencil_convolve(const double* in, std::size_t ny, std::size_t nx, const Stencil& st, double* out);
void stencil_commutator(const double* u1, const double* u2, std::size_t ny, std::size_t nx,
                        const Stencil& st, double* r11, double* r12, double* r22);

}  // namespace reference

}  // namespace sheetlab::kernels
