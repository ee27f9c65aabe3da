#pragma once

#include <optional>
#include <vector>

#include "sffb/dynamics.hpp"
#include "sffb/projectors.hpp"
#include "sffb/types.hpp"

namespace sffb {

/// Mean return probability
/// P_S(t) = (1/D) sum_k Tr[Pi_k(t) Pi_k],
/// with D the subspace dimension of the set. For unitary and filtered
/// channels the sweep never forms U(t): with C_k = W^dag V_k it reduces to
/// squared Frobenius norms of C_k^dag diag(phases) C_k.
RealSeries mean_return_probability(const QuantumChannel& channel, const ProjectorSet& set,
                                   const RealVector& times);

/// The three inequality stages between P_S(t) and K(t) for unitary
/// evolution, pointwise monotone:
/// full_double_sum >= diagonal_sum >= squared_mean_amplitude >= sff.
struct ChainReport {
    RealVector times;
    RealVector full_double_sum;         // P_S(t)
    RealVector diagonal_sum;            // diagonal return terms only
    RealVector squared_mean_amplitude;  // squared mean |<k;l|U|k;l>|
    RealVector sff;                     // |Tr U|^2 / D^2 restricted to the set's subspace
};
ChainReport derivation_chain(const SpectralDecomposition& spec, const ProjectorSet& set,
                             const RealVector& times);

struct BoundReport {
    RealVector times;
    RealVector p_s;
    RealVector k;
    RealVector margin;  // p_s - k
    double min_margin = 0.0;
    bool violated = false;
};

/// Pointwise comparison P_S(t) >= K(t); violated iff
/// min(margin) < -viol_tol. Grids must be identical (GridMismatch).
BoundReport verify_speed_limit(const RealSeries& p_s, const RealSeries& k,
                               double viol_tol = 1e-10);

/// Per-state return probability P_k(t) = Tr[Pi_k(t) Pi_k] / d_k.
RealSeries per_state_return(const QuantumChannel& channel, const ProjectorSet& set, int k_index,
                            const RealVector& times);

/// Cross overlap Q_kj(t) = Tr[Pi_k(t) Pi_j] / d_k for k != j.
RealSeries cross_overlap(const QuantumChannel& channel, const ProjectorSet& set, int k_index,
                         int j_index, const RealVector& times);

/// Haar-typicality prediction for D_E^{-1} Tr[Pi_k(t) Pi_j]:
/// 1/D_S + (delta_kj - 1/D_S) K(t). The O(D_E^{-1/2}) correction is not
/// included; haar_fluctuation_scale reports it separately.
double haar_prediction(double k_value, int d_s, bool same_index);
double haar_fluctuation_scale(int d_e);

/// True where |D_S * P_S(t) - 1| <= c_tol.
std::vector<bool> scrambling_check(const RealSeries& p_s, int d_s, double c_tol);

/// Smallest grid time t* such that K stays at or below 1/D_S on every grid
/// point in [t*, horizon_t]; nullopt if none. Grid max, no interpolation:
/// the grid spacing bounds the answer's resolution.
std::optional<double> sustained_scrambling_time(const RealSeries& k, int d_s, double horizon_t);

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r2 = 0.0;
    int points_used = 0;
};

/// Least-squares line on (log t, log K) over the oscillation envelope in
/// [t_lo, t_hi]. The envelope takes the maximum of each oscillation between
/// successive local minima; monotone data is used as-is. Fewer than 8
/// envelope points raise WindowTooNarrow.
PowerLawFit powerlaw_fit(const RealSeries& k, double t_lo, double t_hi);

}  // namespace sffb
