#pragma once

#include <functional>
#include <vector>

#include "sffb/spectra.hpp"
#include "sffb/types.hpp"

namespace sffb {

/// Time-parameterized family of Kraus operators. Unitary and
/// filtered-unitary kinds are stored spectrally; general CP maps are
/// supplied by a provider that must be a pure deterministic function of t.
class QuantumChannel {
public:
    enum class Kind { Unitary, FilteredUnitary, General };

    using KrausProvider = std::function<std::vector<Matrix>(double)>;

    static QuantumChannel unitary(SpectralDecomposition spec);

    /// Kraus operator g(H) U(t) stored as real weights g(E_n) per eigenvalue.
    /// Weights are taken verbatim; no normalization is applied.
    static QuantumChannel filtered_unitary(SpectralDecomposition spec, RealVector weights);

    static QuantumChannel general(int dimension, int kraus_count, KrausProvider provider,
                                  bool trace_preserving);

    Kind kind() const { return kind_; }
    int dimension() const { return dimension_; }
    int kraus_count() const { return kraus_count_; }
    bool trace_preserving() const { return trace_preserving_; }

    /// The M Kraus operators at time t.
    std::vector<Matrix> kraus_at(double t) const;

    /// For spectral kinds: the eigenphase factors g(E_n) exp(-i E_n t).
    Vector phases_at(double t) const;

    bool has_spectrum() const { return kind_ != Kind::General; }
    const SpectralDecomposition& spectrum() const;
    const RealVector& filter_weights() const { return weights_; }

private:
    QuantumChannel() = default;

    Kind kind_ = Kind::Unitary;
    int dimension_ = 0;
    int kraus_count_ = 1;
    bool trace_preserving_ = true;
    SpectralDecomposition spec_;
    RealVector weights_;
    KrausProvider provider_;
};

/// Evolution operator exp(-iHt) from the spectral decomposition.
Matrix unitary_at(const SpectralDecomposition& spec, double t);

/// Generalized spectral form factor
/// K(t) = (1/D^2) sum_r |Tr A_r(t)|^2.
RealSeries generalized_sff(const QuantumChannel& channel, const RealVector& times);

/// Heisenberg-evolved projector sum_r A_r(t) P P^dag A_r(t)^dag for an
/// isometry P with orthonormal columns (NonIsometry otherwise).
Matrix evolve_projector(const QuantumChannel& channel, const Matrix& isometry, double t);

/// Return probability of the maximally entangled doubled-space state under
/// one-sided evolution; equals generalized_sff pointwise. Test-scale oracle,
/// guarded at D <= 64 (DimensionTooLarge above).
double tfd_return_probability(const QuantumChannel& channel, double t);

struct ChannelReport {
    double max_identity_deviation = 0.0;  // max |sum_r A_r^dag A_r - 1| over sampled times
    bool trace_preserving_claimed = false;
    bool trace_preserving_observed = false;
    int times_checked = 0;
};

/// Report-only check of the CP-map trace-preservation contract over
/// sample times.
ChannelReport validate_channel(const QuantumChannel& channel, const RealVector& sample_times,
                               double tol = 1e-8);

}  // namespace sffb
