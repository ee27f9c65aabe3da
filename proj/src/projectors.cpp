#include "sffb/projectors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sffb/rng.hpp"

namespace sffb {

ProjectorSet subsystem_basis_projectors(int d_s, int d_e, const BasisEmbedding& embedding) {
    if (d_s <= 0 || d_e <= 0)
        throw DimensionMismatch("subsystem and environment dimensions must be positive");
    const int d = d_s * d_e;

    BasisEmbedding embed = embedding;
    if (!embed)
        embed = [d_e](int k, int e) { return k * d_e + e; };  // subsystem slow

    std::vector<bool> seen(d, false);
    ProjectorSet set;
    set.total_dim = d;
    set.subspace_dim = d;
    set.label = "subsystem";
    set.isometries.reserve(d_s);
    for (int k = 0; k < d_s; ++k) {
        Matrix v = Matrix::Zero(d, d_e);
        for (int e = 0; e < d_e; ++e) {
            const int g = embed(k, e);
            if (g < 0 || g >= d || seen[g])
                throw DimensionMismatch("embedding is not a bijection onto the global basis");
            seen[g] = true;
            v(g, e) = 1.0;
        }
        set.isometries.push_back(std::move(v));
        set.dims.push_back(d_e);
    }
    return set;
}

ProjectorSet hadamard_eigenbasis_states(const SpectralDecomposition& spec, const Matrix& hadamard) {
    const Eigen::Index d = spec.eigenvalues.size();
    if (hadamard.rows() != d || hadamard.cols() != d)
        throw DimensionMismatch("Hadamard matrix must match the spectrum dimension");

    const double unitarity =
        (hadamard.adjoint() * hadamard - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (unitarity > 1e-10)
        throw NotHadamard("matrix not unitary, residual " + std::to_string(unitarity));
    const double flatness = (hadamard.cwiseAbs2().array() - 1.0 / static_cast<double>(d))
                                .abs()
                                .maxCoeff();
    if (flatness > 1e-10)
        throw NotHadamard("entries not of modulus D^{-1/2}, residual " + std::to_string(flatness));

    ProjectorSet set;
    set.total_dim = static_cast<int>(d);
    set.subspace_dim = static_cast<int>(d);
    set.label = "hadamard-eigenbasis";
    set.isometries.reserve(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        // |k> = sum_n X_kn |E_n>
        Matrix v = spec.eigenvectors * hadamard.row(k).transpose();
        set.isometries.push_back(std::move(v));
        set.dims.push_back(1);
    }
    return set;
}

ProjectorSet dft_eigenbasis_states(const SpectralDecomposition& spec) {
    const Eigen::Index d = spec.eigenvalues.size();
    Matrix dft(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index n = 0; n < d; ++n) {
            const double arg = -2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(n) / static_cast<double>(d);
            dft(k, n) = norm * cxd(std::cos(arg), std::sin(arg));
        }
    ProjectorSet set = hadamard_eigenbasis_states(spec, dft);
    set.label = "dft-eigenbasis";
    return set;
}

ProjectorSet haar_random_subsystem_projectors(int d_s, int d_e, std::uint64_t seed) {
    ProjectorSet set = subsystem_basis_projectors(d_s, d_e);
    const Matrix rotation = haar_unitary(d_s * d_e, seed);
    for (Matrix& v : set.isometries)
        v = rotation * v;
    set.label = "haar-subsystem";
    return set;
}

std::vector<int> eigenindices_in_window(const SpectralDecomposition& spec, double e_lo,
                                        double e_hi) {
    std::vector<int> indices;
    for (Eigen::Index n = 0; n < spec.eigenvalues.size(); ++n)
        if (spec.eigenvalues[n] >= e_lo && spec.eigenvalues[n] <= e_hi)
            indices.push_back(static_cast<int>(n));
    return indices;
}

ProjectorSet microcanonical_projectors(const SpectralDecomposition& spec, double e_lo, double e_hi,
                                       const std::vector<std::vector<int>>& partition) {
    const std::vector<int> window = eigenindices_in_window(spec, e_lo, e_hi);
    if (window.empty()) throw EmptyWindow("no eigenvalues in [e_lo, e_hi]");

    std::vector<bool> in_window(spec.eigenvalues.size(), false);
    for (int n : window) in_window[n] = true;
    std::vector<bool> covered(spec.eigenvalues.size(), false);
    std::size_t covered_count = 0;
    for (const auto& group : partition) {
        for (int n : group) {
            if (n < 0 || n >= spec.dimension() || !in_window[n] || covered[n])
                throw DimensionMismatch("partition must cover the in-window eigenindices exactly");
            covered[n] = true;
            ++covered_count;
        }
    }
    if (covered_count != window.size())
        throw DimensionMismatch("partition must cover the in-window eigenindices exactly");

    ProjectorSet set;
    set.total_dim = spec.dimension();
    set.subspace_dim = static_cast<int>(window.size());
    set.label = "microcanonical";
    for (const auto& group : partition) {
        if (group.empty()) continue;
        Matrix v(spec.dimension(), group.size());
        for (std::size_t c = 0; c < group.size(); ++c)
            v.col(c) = spec.eigenvectors.col(group[c]);
        set.isometries.push_back(std::move(v));
        set.dims.push_back(static_cast<int>(group.size()));
    }
    return set;
}

Matrix random_complex_hadamard(int dim, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto random_phase = [&gen]() {
        const double u = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
        const double arg = 2.0 * std::numbers::pi * u;
        return cxd(std::cos(arg), std::sin(arg));
    };
    Vector left(dim), right(dim);
    for (int i = 0; i < dim; ++i) left[i] = random_phase();
    for (int i = 0; i < dim; ++i) right[i] = random_phase();

    Matrix dft(dim, dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int k = 0; k < dim; ++k)
        for (int n = 0; n < dim; ++n) {
            const double arg = -2.0 * std::numbers::pi * k * n / static_cast<double>(dim);
            dft(k, n) = norm * cxd(std::cos(arg), std::sin(arg));
        }
    return left.asDiagonal() * dft * right.asDiagonal();
}

ProjectorSetReport validate_projector_set(const ProjectorSet& set, double tol) {
    ProjectorSetReport report;
    const int d = set.total_dim;
    if (set.count() == 0 || d == 0) return report;

    int dim_sum = 0;
    for (int k = 0; k < set.count(); ++k) {
        const Matrix& v = set.isometries[k];
        const Eigen::Index rank = v.cols();
        dim_sum += static_cast<int>(rank);
        const double iso =
            (v.adjoint() * v - Matrix::Identity(rank, rank)).cwiseAbs().maxCoeff();
        report.max_isometry_residual = std::max(report.max_isometry_residual, iso);
        for (int l = k + 1; l < set.count(); ++l) {
            const double cross = (v.adjoint() * set.isometries[l]).cwiseAbs().maxCoeff();
            report.max_orthogonality_residual = std::max(report.max_orthogonality_residual, cross);
        }
    }

    Matrix sum = Matrix::Zero(d, d);
    for (const Matrix& v : set.isometries)
        sum.noalias() += v * v.adjoint();
    if (set.complete()) {
        report.completeness_residual = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    } else {
        // Windowed set: the sum must be the projector onto its subspace.
        report.completeness_residual = (sum * sum - sum).cwiseAbs().maxCoeff();
    }
    if (dim_sum != set.subspace_dim)
        report.completeness_residual = std::max(report.completeness_residual, 1.0);

    report.pass = report.max_isometry_residual <= tol &&
                  report.max_orthogonality_residual <= tol &&
                  report.completeness_residual <= tol;
    return report;
}

}  // namespace sffb
