#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "sffb/io.hpp"
#include "sffb/spectra.hpp"
#include "test_support.hpp"

using namespace sffb;

namespace {

RealVector two_level(double a, double b) {
    RealVector e(2);
    e << a, b;
    return e;
}

}  // namespace

TEST_SUITE_BEGIN("spectra");

TEST_CASE("time series validation") {
    RealVector t(3), v(3), short_v(2);
    t << 0.0, 1.0, 1.0;
    v << 1.0, 2.0, 3.0;
    CHECK_THROWS_AS(RealSeries(t, v), BadTimeGrid);
    t << 0.0, 1.0, 2.0;
    CHECK_THROWS_AS(RealSeries(t, short_v), BadTimeGrid);
    CHECK(RealSeries(t, v).size() == 3);
    CHECK_THROWS_AS(logspace(0.0, 1.0, 5), BadTimeGrid);
    CHECK_THROWS_AS(linspace(0.0, 1.0, 1), BadTimeGrid);
}

TEST_CASE("diagonalize: already diagonal input") {
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = 1.0;
    const SpectralDecomposition spec = diagonalize(h);
    CHECK(spec.eigenvalues[0] == doctest::Approx(0.0));
    CHECK(spec.eigenvalues[1] == doctest::Approx(1.0));
    CHECK((spec.eigenvectors.cwiseAbs() - Matrix::Identity(2, 2).cwiseAbs()).norm() < 1e-12);
}

TEST_CASE("diagonalize: pauli x spectrum") {
    Matrix h(2, 2);
    h << 0, 1, 1, 0;
    const SpectralDecomposition spec = diagonalize(h);
    CHECK(spec.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(spec.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("diagonalize: reconstruction and unitarity at D = 64") {
    const Matrix h = test::random_hermitian(64, 7);
    const SpectralDecomposition spec = diagonalize(h);

    const Matrix rebuilt = spec.eigenvectors * spec.eigenvalues.asDiagonal() *
                           spec.eigenvectors.adjoint();
    CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((spec.eigenvectors.adjoint() * spec.eigenvectors - Matrix::Identity(64, 64))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    for (int n = 1; n < 64; ++n) CHECK(spec.eigenvalues[n] >= spec.eigenvalues[n - 1]);
}

TEST_CASE("diagonalize: rejects non-Hermitian and empty input") {
    Matrix h(2, 2);
    h << 0, 1, 0, 0;
    CHECK_THROWS_AS(diagonalize(h), NonHermitianInput);
    CHECK_THROWS_AS(diagonalize(Matrix()), DimensionZero);
}

TEST_CASE("dos_fourier: two-level cancellation and degenerate spectrum") {
    const auto spec = decomposition_from_eigenvalues(two_level(0.0, std::numbers::pi));
    RealVector t(1);
    t << 1.0;
    const ComplexSeries series = dos_fourier(spec, t);
    CHECK(std::abs(series.values[0]) < 1e-15);

    RealVector degenerate = RealVector::Constant(8, 0.7);
    const auto flat = decomposition_from_eigenvalues(degenerate);
    const RealVector grid = linspace(0.0, 10.0, 11);
    const ComplexSeries phases = dos_fourier(flat, grid);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const cxd expected(std::cos(-0.7 * grid[i]), std::sin(-0.7 * grid[i]));
        CHECK(std::abs(phases.values[i] - expected) < 1e-14);
        CHECK(std::abs(std::abs(phases.values[i]) - 1.0) < 1e-14);
    }
}

TEST_CASE("dos_fourier: n_tilde(0) = 1 exactly, |n_tilde| <= 1, conjugate symmetry") {
    const auto spec = diagonalize(test::random_hermitian(32, 3)).eigenvalues;
    const auto decomp = decomposition_from_eigenvalues(spec);
    const RealVector t = linspace(-20.0, 20.0, 401);  // symmetric, includes 0
    const ComplexSeries series = dos_fourier(decomp, t);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        CHECK(std::abs(series.values[i]) <= 1.0 + 1e-12);
        if (t[i] == 0.0) CHECK(series.values[i] == cxd(1.0, 0.0));
        // Mirror index: grid is symmetric about 0.
        const Eigen::Index mirror = t.size() - 1 - i;
        CHECK(std::abs(series.values[i] - std::conj(series.values[mirror])) < 1e-12);
    }
}

TEST_CASE("dos_fourier: equally spaced levels approach sinc^2(Wt/2)") {
    const int d = 4096;
    const double width = 2.0 * std::numbers::pi;  // tau = 1
    RealVector levels(d);
    for (int n = 0; n < d; ++n)
        levels[n] = -width / 2 + width * n / static_cast<double>(d - 1);
    const auto spec = decomposition_from_eigenvalues(levels);

    const RealVector t = linspace(0.1, 3.0, 30);
    const RealSeries k = sff_from_spectrum(spec, t);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        const double x = width * t[i] / 2.0;
        const double sinc = std::sin(x) / x;
        CHECK(std::abs(k.values[i] - sinc * sinc) < 5e-3);
    }
}

TEST_CASE("sff_from_spectrum: analytic two-level case and invariants") {
    const auto spec = decomposition_from_eigenvalues(two_level(0.0, 1.0));
    const RealVector t = linspace(0.0, 12.0, 73);
    const RealSeries k = sff_from_spectrum(spec, t);
    CHECK(k.values[0] == 1.0);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        const double c = std::cos(t[i] / 2.0);
        CHECK(k.values[i] == doctest::Approx(c * c).epsilon(1e-12));
        CHECK(k.values[i] >= 0.0);
        CHECK(k.values[i] <= 1.0 + 1e-12);
    }

    // K = |n_tilde|^2 entrywise.
    const ComplexSeries n_tilde = dos_fourier(spec, t);
    for (Eigen::Index i = 0; i < t.size(); ++i)
        CHECK(std::abs(k.values[i] - std::norm(n_tilde.values[i])) < 1e-14);
}

TEST_CASE("spectral_variance: trivial values and finite-difference cross-check") {
    CHECK(spectral_variance(decomposition_from_eigenvalues(two_level(-1.0, 1.0))) ==
          doctest::Approx(1.0));
    CHECK(spectral_variance(decomposition_from_eigenvalues(RealVector::Constant(5, 2.0))) ==
          doctest::Approx(0.0));

    const auto spec = diagonalize(test::random_hermitian(48, 11));
    const double sigma2 = spectral_variance(spec);
    // Independent route: sigma^2 = -K''(0)/2 by central second difference.
    const double h = 1e-4 / std::sqrt(sigma2);
    RealVector t(3);
    t << -h, 0.0, h;
    const RealSeries k = sff_from_spectrum(spec, t);
    const double second = (k.values[0] - 2.0 * k.values[1] + k.values[2]) / (h * h);
    CHECK(sigma2 == doctest::Approx(-second / 2.0).epsilon(1e-4));
}

TEST_CASE("mt_envelope: values, window flags, errors") {
    CHECK_THROWS_AS(mt_envelope(0.0, linspace(0, 1, 3)), NonpositiveSigma);

    const double sigma = 2.0;
    const double edge = std::numbers::pi / (2.0 * sigma);
    RealVector t(3);
    t << 0.0, edge - 1e-3, edge + 1e-3;
    const MtEnvelope env = mt_envelope(sigma, t);
    CHECK(env.series.values[0] == 1.0);
    CHECK(env.in_window[0]);
    const double c = std::cos(sigma * t[1]);
    CHECK(env.series.values[1] == doctest::Approx(c * c));
    CHECK(env.in_window[1]);
    CHECK(env.series.values[2] == 0.0);
    CHECK(!env.in_window[2]);
}

TEST_CASE("mt_envelope: equals K exactly for the two-level spectrum on the window") {
    // Spectrum (0, 1): sigma_E = 1/2 and K(t) = cos^2(t/2).
    const auto spec = decomposition_from_eigenvalues(two_level(0.0, 1.0));
    const double sigma = std::sqrt(spectral_variance(spec));
    CHECK(sigma == doctest::Approx(0.5));
    const RealVector t = linspace(0.0, std::numbers::pi - 1e-6, 50);
    const RealSeries k = sff_from_spectrum(spec, t);
    const MtEnvelope env = mt_envelope(sigma, t);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        CHECK(env.in_window[i]);
        CHECK(k.values[i] == doctest::Approx(env.series.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("mt bound property: K >= cos^2(sigma_E t) - 1e-12 inside the window") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        const auto spec = diagonalize(test::random_hermitian(24, seed));
        const double sigma = std::sqrt(spectral_variance(spec));
        const double edge = std::numbers::pi / (2.0 * sigma);
        const RealVector t = linspace(0.0, edge * 0.999, 200);
        const RealSeries k = sff_from_spectrum(spec, t);
        const MtEnvelope env = mt_envelope(sigma, t);
        for (Eigen::Index i = 0; i < t.size(); ++i)
            CHECK(k.values[i] >= env.series.values[i] - 1e-12);
    }
}

TEST_CASE("dos_histogram: degenerate pairs, normalization, errors") {
    RealVector e(4);
    e << 0.0, 0.0, 1.0, 1.0;
    const auto spec = decomposition_from_eigenvalues(e);
    CHECK_THROWS_AS(dos_histogram(spec, 0.0), NonpositiveBinWidth);

    // An eigenvalue on a bin edge starts a new bin: two bins of density 0.5.
    const DosHistogram hist = dos_histogram(spec, 1.0);
    CHECK(hist.bins() == 2);
    CHECK(hist.densities[0] == doctest::Approx(0.5));
    CHECK(hist.densities[1] == doctest::Approx(0.5));
    CHECK(hist.total_mass == doctest::Approx(1.0).epsilon(1e-12));

    const DosHistogram fine = dos_histogram(spec, 0.5);
    CHECK(fine.bins() == 3);
    CHECK(fine.densities[0] == doctest::Approx(1.0));  // two of four states per half unit
    CHECK(fine.densities[1] == doctest::Approx(0.0));
    CHECK(fine.densities[2] == doctest::Approx(1.0));
    CHECK(fine.total_mass == doctest::Approx(1.0).epsilon(1e-12));

    // Degenerate spectrum: a single bin holds everything.
    const auto flat = decomposition_from_eigenvalues(RealVector::Zero(8));
    CHECK(dos_histogram(flat, 0.1).bins() == 1);
}

TEST_CASE("dos_histogram: mass normalization on random spectra") {
    for (std::uint64_t seed : {2, 9}) {
        const auto spec = diagonalize(test::random_hermitian(64, seed));
        const DosHistogram hist = dos_histogram(spec, 0.05);
        CHECK(std::abs(hist.total_mass - 1.0) < 1e-12);
        CHECK(hist.densities.minCoeff() >= 0.0);
        CHECK(hist.bin_edges[0] == doctest::Approx(spec.eigenvalues[0]));
        CHECK(hist.bin_edges[hist.bins()] >= spec.eigenvalues[63]);
    }
}

TEST_CASE("gaussian_smooth_dos: delta spike becomes a discretized gaussian") {
    RealVector e = RealVector::Zero(16);
    const auto spec = decomposition_from_eigenvalues(e);
    const DosHistogram spike = dos_histogram(spec, 0.1);
    CHECK(spike.bins() == 1);

    const double sigma = 0.3;
    const DosHistogram smooth = gaussian_smooth_dos(spike, sigma);
    CHECK(std::abs(smooth.total_mass - 1.0) < 1e-10);
    CHECK(smooth.densities.minCoeff() >= 0.0);

    // Shape matches exp(-x^2/(2 sigma^2)) up to normalization.
    const int peak_bin = smooth.bins() / 2;
    const double width = smooth.bin_width();
    for (int offset : {1, 3, 6}) {
        const double expected =
            std::exp(-0.5 * (offset * width) * (offset * width) / (sigma * sigma));
        const double measured = smooth.densities[peak_bin + offset] / smooth.densities[peak_bin];
        CHECK(measured == doctest::Approx(expected).epsilon(1e-9));
    }

    CHECK_THROWS_AS(gaussian_smooth_dos(spike, -1.0), NonpositiveSigma);
}

TEST_CASE("gaussian_smooth_dos: mass and positivity preserved on random spectra") {
    const auto spec = diagonalize(test::random_hermitian(64, 21));
    const DosHistogram hist = dos_histogram(spec, 0.05);
    const DosHistogram smooth = gaussian_smooth_dos(hist, 0.2);
    CHECK(std::abs(smooth.total_mass - hist.total_mass) < 1e-10);
    CHECK(smooth.densities.minCoeff() >= 0.0);
}

TEST_CASE("histogram CSV export") {
    RealVector e(4);
    e << 0.0, 0.25, 0.5, 1.0;
    const DosHistogram hist = dos_histogram(decomposition_from_eigenvalues(e), 0.25);
    const auto path =
        (std::filesystem::temp_directory_path() / "sffb_tests" / "hist.csv").string();
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    write_histogram_csv(path, hist, "deadbeefdeadbeef");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# manifest deadbeefdeadbeef");
    std::getline(in, line);
    CHECK(line == "bin_left,bin_right,density");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == hist.bins());
}

TEST_CASE("check_fourier_nonnegativity: gaussian is nonnegative") {
    const RealVector t = linspace(-12.0, 12.0, 4001);
    Vector values(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) values[i] = std::exp(-t[i] * t[i] / 2.0);
    const ComplexSeries n_tilde(t, std::move(values));

    const RealVector e = linspace(-6.0, 6.0, 301);
    const auto report = check_fourier_nonnegativity(n_tilde, e);
    CHECK(report.nonneg);
    // Transform of exp(-t^2/2) is exp(-E^2/2)/sqrt(2 pi); check the origin.
    Eigen::Index mid = e.size() / 2;
    CHECK(report.densities[mid] ==
          doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-6));
}

TEST_CASE("check_fourier_nonnegativity: triangle gives sinc^2 >= 0") {
    const RealVector t = linspace(-2.0, 2.0, 40001);
    Vector values(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) values[i] = std::max(1.0 - std::abs(t[i]), 0.0);
    const ComplexSeries n_tilde(t, std::move(values));

    const RealVector e = linspace(-40.0, 40.0, 801);
    const auto report = check_fourier_nonnegativity(n_tilde, e);
    CHECK(report.nonneg);
    CHECK(report.min_density >= -1e-8);
}

TEST_CASE("check_fourier_nonnegativity: exp(-t^4) dips negative") {
    const RealVector t = linspace(-8.0, 8.0, 8001);
    Vector values(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i)
        values[i] = std::exp(-t[i] * t[i] * t[i] * t[i]);
    const ComplexSeries n_tilde(t, std::move(values));

    const RealVector e = linspace(-12.0, 12.0, 1201);
    const auto report = check_fourier_nonnegativity(n_tilde, e);
    CHECK(!report.nonneg);
    CHECK(report.min_density < -1e-8);
}

TEST_CASE("check_fourier_nonnegativity: narrow grid raises") {
    const RealVector t = linspace(-1.0, 1.0, 101);
    Vector values(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) values[i] = std::exp(-t[i] * t[i] / 2.0);
    const ComplexSeries n_tilde(t, std::move(values));
    CHECK_THROWS_AS(check_fourier_nonnegativity(n_tilde, linspace(-2, 2, 11)), GridTooNarrow);
}

TEST_SUITE_END();
