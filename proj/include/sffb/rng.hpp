#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sffb/types.hpp"

namespace sffb {

// Stream identifier recorded in run manifests. Bump when the draw order or
// the Gaussian algorithm changes.
inline constexpr const char* kRngVersion = "mt19937_64/box-muller-v1";

/// Standard-normal stream with a pinned algorithm (Box-Muller over
/// mt19937_64 53-bit uniforms), so seeded draws do not depend on the
/// standard library's std::normal_distribution implementation.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    double next();

    /// Complex draw with independent N(0, 1/2) real and imaginary parts,
    /// i.e. E|z|^2 = 1.
    cxd next_complex();

private:
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// positive-diagonal-R phase convention.
Matrix haar_unitary(int dim, std::uint64_t seed);
Matrix haar_unitary(int dim, GaussianStream& gs);

/// GUE sample H = (A + A^dag)/2 with A complex Ginibre.
Matrix gue_hamiltonian(int dim, std::uint64_t seed);

/// Trace-preserving Kraus family: the first dim columns of a Haar unitary
/// on (m * dim) dimensions, sliced into m blocks.
std::vector<Matrix> random_kraus_set(int dim, int m, std::uint64_t seed);

}  // namespace sffb
