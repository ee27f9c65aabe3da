#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sffb/spectra.hpp"
#include "sffb/types.hpp"

namespace sffb {

/// Complete set of orthonormal projectors, stored as isometries: projector
/// k is V_k V_k^dag with V_k a D x d_k matrix of orthonormal columns.
/// Microcanonical sets are complete only on a windowed subspace;
/// subspace_dim records that dimension (== total_dim for complete sets)
/// and is the normalization used for mean return probabilities.
struct ProjectorSet {
    std::vector<Matrix> isometries;
    std::vector<int> dims;
    int total_dim = 0;
    int subspace_dim = 0;
    std::string label;

    int count() const { return static_cast<int>(isometries.size()); }
    bool complete() const { return subspace_dim == total_dim; }
};

/// Maps (subsystem index, environment index) to a global basis index.
using BasisEmbedding = std::function<int(int, int)>;

/// Computational-basis projectors of a subsystem factor: D_S projectors of
/// uniform rank D_E. The default embedding is the tensor layout with the
/// subsystem index as the slow (most significant) factor:
/// global = k * D_E + e.
ProjectorSet subsystem_basis_projectors(int d_s, int d_e, const BasisEmbedding& embedding = {});

/// Rank-1 projectors onto |k> = sum_n X_kn |E_n> for a unitary complex
/// Hadamard matrix X (|X_kn|^2 = 1/D). These sets saturate the speed limit:
/// P_S(t) = K(t). Throws NotHadamard if X fails either condition.
ProjectorSet hadamard_eigenbasis_states(const SpectralDecomposition& spec, const Matrix& hadamard);

/// The DFT special case X_kn = D^{-1/2} exp(-2 pi i k n / D).
ProjectorSet dft_eigenbasis_states(const SpectralDecomposition& spec);

/// Subsystem basis projectors rotated by a seeded Haar-random unitary.
/// Deterministic per seed.
ProjectorSet haar_random_subsystem_projectors(int d_s, int d_e, std::uint64_t seed);

/// Projectors onto groups of energy eigenstates inside [e_lo, e_hi].
/// The partition lists groups of global eigenindices and must cover the
/// in-window indices exactly. The set is complete only on the windowed
/// subspace.
ProjectorSet microcanonical_projectors(const SpectralDecomposition& spec, double e_lo, double e_hi,
                                       const std::vector<std::vector<int>>& partition);

/// Eigenindices of spec falling in the closed window [e_lo, e_hi].
std::vector<int> eigenindices_in_window(const SpectralDecomposition& spec, double e_lo, double e_hi);

/// Random complex Hadamard matrix: the DFT with seeded random phase
/// diagonals on both sides.
Matrix random_complex_hadamard(int dim, std::uint64_t seed);

struct ProjectorSetReport {
    double max_isometry_residual = 0.0;       // max |V_k^dag V_k - 1|
    double max_orthogonality_residual = 0.0;  // max |V_k^dag V_l|, k != l
    double completeness_residual = 0.0;
    bool pass = false;
};

/// Report-only check of the isometry / orthogonality / completeness
/// invariant families.
ProjectorSetReport validate_projector_set(const ProjectorSet& set, double tol = 1e-9);

}  // namespace sffb
