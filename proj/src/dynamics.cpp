#include "sffb/dynamics.hpp"

#include <cmath>
#include <utility>

namespace sffb {

QuantumChannel QuantumChannel::unitary(SpectralDecomposition spec) {
    QuantumChannel ch;
    ch.kind_ = Kind::Unitary;
    ch.dimension_ = spec.dimension();
    ch.kraus_count_ = 1;
    ch.trace_preserving_ = true;
    ch.spec_ = std::move(spec);
    ch.weights_ = RealVector::Ones(ch.dimension_);
    return ch;
}

QuantumChannel QuantumChannel::filtered_unitary(SpectralDecomposition spec, RealVector weights) {
    if (weights.size() != spec.eigenvalues.size())
        throw DimensionMismatch("one filter weight per eigenvalue required");
    QuantumChannel ch;
    ch.kind_ = Kind::FilteredUnitary;
    ch.dimension_ = spec.dimension();
    ch.kraus_count_ = 1;
    // g(H) U(t) preserves trace only for unimodular weights.
    ch.trace_preserving_ = (weights.array().square() - 1.0).abs().maxCoeff() <= 1e-12;
    ch.spec_ = std::move(spec);
    ch.weights_ = std::move(weights);
    return ch;
}

QuantumChannel QuantumChannel::general(int dimension, int kraus_count, KrausProvider provider,
                                       bool trace_preserving) {
    if (dimension <= 0) throw DimensionZero("channel dimension must be positive");
    if (kraus_count <= 0) throw DimensionMismatch("kraus_count must be positive");
    QuantumChannel ch;
    ch.kind_ = Kind::General;
    ch.dimension_ = dimension;
    ch.kraus_count_ = kraus_count;
    ch.trace_preserving_ = trace_preserving;
    ch.provider_ = std::move(provider);
    return ch;
}

const SpectralDecomposition& QuantumChannel::spectrum() const {
    if (kind_ == Kind::General)
        throw Error("general channels carry no spectral decomposition");
    return spec_;
}

Vector QuantumChannel::phases_at(double t) const {
    if (kind_ == Kind::General)
        throw Error("general channels carry no eigenphases");
    const Eigen::Index d = dimension_;
    Vector phases(d);
    for (Eigen::Index n = 0; n < d; ++n) {
        const double arg = -spec_.eigenvalues[n] * t;
        phases[n] = weights_[n] * cxd(std::cos(arg), std::sin(arg));
    }
    return phases;
}

std::vector<Matrix> QuantumChannel::kraus_at(double t) const {
    if (kind_ == Kind::General) {
        std::vector<Matrix> ops = provider_(t);
        if (static_cast<int>(ops.size()) != kraus_count_)
            throw DimensionMismatch("provider returned wrong Kraus count");
        for (const Matrix& op : ops)
            if (op.rows() != dimension_ || op.cols() != dimension_)
                throw DimensionMismatch("provider returned wrong Kraus dimensions");
        return ops;
    }
    const Matrix& w = spec_.eigenvectors;
    return {w * phases_at(t).asDiagonal() * w.adjoint()};
}

Matrix unitary_at(const SpectralDecomposition& spec, double t) {
    const Eigen::Index d = spec.eigenvalues.size();
    Vector phases(d);
    for (Eigen::Index n = 0; n < d; ++n) {
        const double arg = -spec.eigenvalues[n] * t;
        phases[n] = cxd(std::cos(arg), std::sin(arg));
    }
    return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

RealSeries generalized_sff(const QuantumChannel& channel, const RealVector& times) {
    const double d = channel.dimension();
    RealVector values(times.size());
    if (channel.kind() == QuantumChannel::Kind::General) {
        for (Eigen::Index i = 0; i < times.size(); ++i) {
            double acc = 0.0;
            for (const Matrix& op : channel.kraus_at(times[i]))
                acc += std::norm(op.trace());
            values[i] = acc / (d * d);
        }
    } else {
        for (Eigen::Index i = 0; i < times.size(); ++i)
            values[i] = std::norm(channel.phases_at(times[i]).sum()) / (d * d);
    }
    return {times, std::move(values)};
}

Matrix evolve_projector(const QuantumChannel& channel, const Matrix& isometry, double t) {
    if (isometry.rows() != channel.dimension())
        throw DimensionMismatch("isometry rows must match channel dimension");
    const Eigen::Index rank = isometry.cols();
    const double residual =
        (isometry.adjoint() * isometry - Matrix::Identity(rank, rank)).cwiseAbs().maxCoeff();
    if (residual > 1e-10)
        throw NonIsometry("columns not orthonormal, residual " + std::to_string(residual));

    Matrix evolved = Matrix::Zero(channel.dimension(), channel.dimension());
    for (const Matrix& op : channel.kraus_at(t)) {
        const Matrix moved = op * isometry;
        evolved.noalias() += moved * moved.adjoint();
    }
    return evolved;
}

double tfd_return_probability(const QuantumChannel& channel, double t) {
    const int d = channel.dimension();
    if (d > 64)
        throw DimensionTooLarge("TFD oracle guarded at D <= 64, got D = " + std::to_string(d));

    // |Psi> = D^{-1/2} sum_k |k> x |k> as a D^2 vector, component (i, j) at
    // i * D + j. Column-major map: Psi_mat(j, i) = psi[i * D + j].
    Vector psi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
    for (int k = 0; k < d; ++k)
        psi[static_cast<Eigen::Index>(k) * d + k] = 1.0 / std::sqrt(static_cast<double>(d));
    Eigen::Map<const Matrix> psi_mat(psi.data(), d, d);

    double total = 0.0;
    for (const Matrix& op : channel.kraus_at(t)) {
        // (A x 1) psi reshapes to psi_mat * A^T.
        Matrix phi_mat = psi_mat * op.transpose();
        Eigen::Map<const Vector> phi(phi_mat.data(), phi_mat.size());
        total += std::norm(psi.dot(phi));
    }
    return total;
}

ChannelReport validate_channel(const QuantumChannel& channel, const RealVector& sample_times,
                               double tol) {
    ChannelReport report;
    report.trace_preserving_claimed = channel.trace_preserving();
    report.times_checked = static_cast<int>(sample_times.size());
    const Matrix identity = Matrix::Identity(channel.dimension(), channel.dimension());
    for (Eigen::Index i = 0; i < sample_times.size(); ++i) {
        Matrix sum = Matrix::Zero(channel.dimension(), channel.dimension());
        for (const Matrix& op : channel.kraus_at(sample_times[i]))
            sum.noalias() += op.adjoint() * op;
        const double dev = (sum - identity).cwiseAbs().maxCoeff();
        report.max_identity_deviation = std::max(report.max_identity_deviation, dev);
    }
    report.trace_preserving_observed = report.max_identity_deviation <= tol;
    return report;
}

}  // namespace sffb
