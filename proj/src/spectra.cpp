#include "sffb/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sffb {

SpectralDecomposition diagonalize(const Matrix& hamiltonian) {
    const Eigen::Index d = hamiltonian.rows();
    if (d == 0) throw DimensionZero("cannot diagonalize an empty matrix");
    if (hamiltonian.cols() != d)
        throw NonHermitianInput("matrix is not square");

    const double scale = hamiltonian.cwiseAbs().maxCoeff();
    const double hermit_tol = 1e-10 * std::max(scale, 1.0);
    const double residual = (hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff();
    if (residual > hermit_tol)
        throw NonHermitianInput("max|H - H^dag| = " + std::to_string(residual));

    Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian);
    if (solver.info() != Eigen::Success)
        throw Error("eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectralDecomposition decomposition_from_eigenvalues(RealVector eigenvalues) {
    if (eigenvalues.size() == 0) throw DimensionZero("empty spectrum");
    std::sort(eigenvalues.begin(), eigenvalues.end());
    const Eigen::Index d = eigenvalues.size();
    return {std::move(eigenvalues), Matrix::Identity(d, d)};
}

ComplexSeries dos_fourier(const SpectralDecomposition& spec, const RealVector& times) {
    const Eigen::Index d = spec.eigenvalues.size();
    Vector values(times.size());
    for (Eigen::Index i = 0; i < times.size(); ++i) {
        cxd acc(0.0, 0.0);
        const double t = times[i];
        for (Eigen::Index n = 0; n < d; ++n) {
            const double phase = -spec.eigenvalues[n] * t;
            acc += cxd(std::cos(phase), std::sin(phase));
        }
        values[i] = acc / static_cast<double>(d);
    }
    return {times, std::move(values)};
}

RealSeries sff_from_spectrum(const SpectralDecomposition& spec, const RealVector& times) {
    ComplexSeries n_tilde = dos_fourier(spec, times);
    return {times, n_tilde.values.cwiseAbs2()};
}

double spectral_variance(const SpectralDecomposition& spec) {
    const Eigen::Index d = spec.eigenvalues.size();
    if (d == 0) throw DimensionZero("empty spectrum");
    const double mean = spec.eigenvalues.mean();
    return (spec.eigenvalues.array() - mean).square().sum() / static_cast<double>(d);
}

MtEnvelope mt_envelope(double sigma_e, const RealVector& times) {
    if (!(sigma_e > 0.0)) throw NonpositiveSigma("sigma_E must be positive");
    const double window_edge = std::numbers::pi / (2.0 * sigma_e);
    RealVector values(times.size());
    std::vector<bool> in_window(times.size());
    for (Eigen::Index i = 0; i < times.size(); ++i) {
        const bool inside = std::abs(times[i]) < window_edge;
        in_window[i] = inside;
        const double c = std::cos(sigma_e * times[i]);
        values[i] = inside ? c * c : 0.0;  // the bound is vacuous outside
    }
    return {RealSeries(times, std::move(values)), std::move(in_window)};
}

DosHistogram dos_histogram(const SpectralDecomposition& spec, double bin_width) {
    if (!(bin_width > 0.0)) throw NonpositiveBinWidth("bin width must be positive");
    const Eigen::Index d = spec.eigenvalues.size();
    const double e_min = spec.eigenvalues[0];
    const double e_max = spec.eigenvalues[d - 1];
    // Anchored at e_min; one bin past the last filled edge so an eigenvalue
    // on an edge starts a new bin.
    const int bins = static_cast<int>(std::floor((e_max - e_min) / bin_width + 1e-12)) + 1;

    RealVector edges(bins + 1);
    for (int b = 0; b <= bins; ++b) edges[b] = e_min + b * bin_width;

    RealVector densities = RealVector::Zero(bins);
    for (Eigen::Index n = 0; n < d; ++n) {
        int b = static_cast<int>(std::floor((spec.eigenvalues[n] - e_min) / bin_width));
        b = std::clamp(b, 0, bins - 1);  // last bin closed
        densities[b] += 1.0;
    }
    densities /= static_cast<double>(d) * bin_width;

    DosHistogram hist{std::move(edges), std::move(densities), 0.0};
    hist.total_mass = hist.densities.sum() * bin_width;
    return hist;
}

DosHistogram gaussian_smooth_dos(const DosHistogram& hist, double sigma) {
    if (!(sigma > 0.0)) throw NonpositiveSigma("smoothing width must be positive");
    const double width = hist.bin_width();
    const int half = std::max(1, static_cast<int>(std::ceil(6.0 * sigma / width)));

    RealVector kernel(2 * half + 1);
    for (int k = -half; k <= half; ++k)
        kernel[k + half] = std::exp(-0.5 * (k * width) * (k * width) / (sigma * sigma));
    kernel /= kernel.sum();

    const int bins = hist.bins();
    const int out_bins = bins + 2 * half;
    RealVector out = RealVector::Zero(out_bins);
    for (int j = 0; j < bins; ++j) {
        if (hist.densities[j] == 0.0) continue;
        for (int k = -half; k <= half; ++k)
            out[j + half + k] += hist.densities[j] * kernel[k + half];
    }

    RealVector edges(out_bins + 1);
    const double left = hist.bin_edges[0] - half * width;
    for (int b = 0; b <= out_bins; ++b) edges[b] = left + b * width;

    DosHistogram smoothed{std::move(edges), std::move(out), 0.0};
    smoothed.total_mass = smoothed.densities.sum() * width;
    return smoothed;
}

FourierPositivityReport check_fourier_nonnegativity(const ComplexSeries& n_tilde,
                                                    const RealVector& energy_grid) {
    constexpr double kEndpointTol = 1e-3;
    constexpr double kNonnegTol = 1e-8;

    const Eigen::Index nt = n_tilde.size();
    if (nt < 3) throw GridTooNarrow("need at least 3 time samples");
    const double edge = std::max(std::abs(n_tilde.values[0]), std::abs(n_tilde.values[nt - 1]));
    if (edge > kEndpointTol)
        throw GridTooNarrow("endpoint |n_tilde| = " + std::to_string(edge) +
                            " indicates truncation artifacts");

    // Trapezoidal weights on the caller's grid.
    RealVector w(nt);
    w[0] = 0.5 * (n_tilde.times[1] - n_tilde.times[0]);
    w[nt - 1] = 0.5 * (n_tilde.times[nt - 1] - n_tilde.times[nt - 2]);
    for (Eigen::Index i = 1; i < nt - 1; ++i)
        w[i] = 0.5 * (n_tilde.times[i + 1] - n_tilde.times[i - 1]);

    RealVector densities(energy_grid.size());
    for (Eigen::Index e = 0; e < energy_grid.size(); ++e) {
        const double energy = energy_grid[e];
        double acc = 0.0;
        for (Eigen::Index i = 0; i < nt; ++i) {
            const double phase = energy * n_tilde.times[i];
            const cxd rot(std::cos(phase), std::sin(phase));
            acc += w[i] * (n_tilde.values[i] * rot).real();
        }
        densities[e] = acc / (2.0 * std::numbers::pi);
    }

    FourierPositivityReport report;
    report.energies = energy_grid;
    report.min_density = densities.minCoeff();
    report.densities = std::move(densities);
    report.nonneg = report.min_density >= -kNonnegTol;
    return report;
}

}  // namespace sffb
