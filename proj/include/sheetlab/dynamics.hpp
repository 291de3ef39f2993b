#pragma once

#include <filesystem>
#include <vector>

#include "sheetlab/biot_savart.hpp"

namespace sheetlab {

struct Trajectory {
  std::vector<VortexSheet> snapshots;
  double dt = 0.0;
  BlobParameter blob;
  double filter_threshold = 1e-13;

  std::vector<double> times() const;
  const VortexSheet& back() const { return snapshots.back(); }
};

struct EvolveOptions {
  double tail_abort = 1e-3;  // delta = 0 only
};

// RK4 on the markers with mean_velocity_rhs; after every step Fourier coefficients of
// (x - alpha, h) below filter_threshold * (largest coefficient) are zeroed. gamma is never touched.
Trajectory evolve(const VortexSheet& sheet0, BlobParameter blob, double dt, double t_end,
                  double filter_threshold = 1e-13, EvolveOptions opt = {});

struct KinematicResidual {
  std::vector<double> time, residual;
  bool graph_form = false;  // true: d_t h + U1 h_alpha - U2; false: (d_t r - U) . nu
  double max() const;
};

// One value per snapshot (centred differences inside, second-order one-sided at the ends).
// U is the trajectory's own transport velocity, mean_velocity_rhs with traj.blob.
KinematicResidual kinematic_residual(const Trajectory& traj);

// directory of t=<6 decimals>.csv snapshots plus manifest.txt
void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir);
Trajectory read_trajectory(const std::filesystem::path& dir);

}  // namespace sheetlab
