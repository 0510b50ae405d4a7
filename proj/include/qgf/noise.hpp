#pragma once
#include "qgf/density_matrix.hpp"
#include "qgf/rng.hpp"

namespace qgf {

// Depolarizing noise attached to circuit execution. p is the per-channel
// probability. on_preparation optionally applies one channel per qubit to the
// initial state (off by default: the circuits here treat preparation as
// noiseless). global_mode switches every site to the whole-register channel
// rho -> (1-p) rho + p I/2^n, kept for sensitivity checks.
struct DepolarizingNoise {
  double p = 0.0;
  bool on_preparation = false;
  bool global_mode = false;
};

// E(rho) = (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z) on one qubit.
void apply_depolarizing(DensityMatrix& rho, int qubit, double p);

// rho -> (1-p) rho + p I / 2^n
void apply_global_depolarizing(DensityMatrix& rho, double p);

enum class KrausOp : uint8_t { identity = 0, x = 1, y = 2, z = 3 };

// identity with probability 1-p, each Pauli with probability p/3
KrausOp sample_depolarizing(double p, Rng& rng);

void check_probability(double p);

}  // namespace qgf
