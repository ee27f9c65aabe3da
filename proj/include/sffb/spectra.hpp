#pragma once

#include <vector>

#include "sffb/types.hpp"

namespace sffb {

/// Eigenvalues (ascending) and eigenvectors of a Hermitian operator.
/// Immutable after construction; the engine for all Hamiltonian-case
/// time evolution.
struct SpectralDecomposition {
    RealVector eigenvalues;  // ascending, energy units
    Matrix eigenvectors;     // unitary; columns are eigenstates

    int dimension() const { return static_cast<int>(eigenvalues.size()); }
};

/// Full dense diagonalization. Throws NonHermitianInput if
/// max|H - H^dag| > 1e-10 * max|H|, DimensionZero on empty input.
SpectralDecomposition diagonalize(const Matrix& hamiltonian);

/// Decomposition with trivial (identity) eigenvectors, for spectrum-only
/// inputs. Eigenvalues are sorted ascending.
SpectralDecomposition decomposition_from_eigenvalues(RealVector eigenvalues);

/// Fourier transform of the density of states per level:
/// n_tilde(t) = (1/D) sum_n exp(-i E_n t). n_tilde(0) = 1.
ComplexSeries dos_fourier(const SpectralDecomposition& spec, const RealVector& times);

/// Spectral form factor K(t) = |n_tilde(t)|^2 for Hamiltonian evolution.
RealSeries sff_from_spectrum(const SpectralDecomposition& spec, const RealVector& times);

/// Population variance of the eigenvalues; equals -K''(0)/2.
double spectral_variance(const SpectralDecomposition& spec);

/// cos^2(sigma_E t) on |t| < pi/(2 sigma_E), zero outside; in_window flags
/// validity-window membership per point.
struct MtEnvelope {
    RealSeries series;
    std::vector<bool> in_window;
};
MtEnvelope mt_envelope(double sigma_e, const RealVector& times);

/// Normalized density of states on uniform bins: sum(density * width) = 1.
struct DosHistogram {
    RealVector bin_edges;  // size = bins + 1, uniform spacing
    RealVector densities;  // probability per unit energy, one per bin
    double total_mass = 0.0;

    int bins() const { return static_cast<int>(densities.size()); }
    double bin_width() const { return bin_edges[1] - bin_edges[0]; }
};

/// Histogram of the spectrum with bins anchored at the smallest eigenvalue;
/// the last bin is closed.
DosHistogram dos_histogram(const SpectralDecomposition& spec, double bin_width);

/// Convolution with a discretized Gaussian of width sigma. Mass-preserving
/// and positivity-preserving; the output grid is extended to hold the
/// smeared edges.
DosHistogram gaussian_smooth_dos(const DosHistogram& hist, double sigma);

/// Discretized inverse transform of n_tilde onto an energy grid,
/// N(E) = (1/2pi) int dt n_tilde(t) exp(+iEt), by trapezoidal rule.
/// The t-grid must be symmetric about 0 and wide enough that |n_tilde|
/// has decayed at the endpoints (below 1e-6 recommended); endpoints above
/// 1e-3 raise GridTooNarrow.
struct FourierPositivityReport {
    RealVector energies;
    RealVector densities;
    double min_density = 0.0;
    bool nonneg = false;
};
FourierPositivityReport check_fourier_nonnegativity(const ComplexSeries& n_tilde,
                                                    const RealVector& energy_grid);

}  // namespace sffb
