#include "sffb/rng.hpp"

#include <cmath>
#include <numbers>

namespace sffb {

namespace {

// 53-bit uniform in (0, 1]; never returns 0 so log() below is safe.
double uniform_open(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

double GaussianStream::next() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform_open(gen_);
    const double u2 = uniform_open(gen_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

cxd GaussianStream::next_complex() {
    const double re = next();
    const double im = next();
    return cxd(re, im) / std::sqrt(2.0);
}

Matrix haar_unitary(int dim, GaussianStream& gs) {
    Matrix ginibre(dim, dim);
    // Column-major fill order is part of the pinned stream contract.
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i)
            ginibre(i, j) = gs.next_complex();

    Eigen::HouseholderQR<Matrix> qr(ginibre);
    Matrix q = qr.householderQ();
    const Matrix& qrm = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        const cxd d = qrm(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(j) *= d / mag;
    }
    return q;
}

Matrix haar_unitary(int dim, std::uint64_t seed) {
    GaussianStream gs(seed);
    return haar_unitary(dim, gs);
}

Matrix gue_hamiltonian(int dim, std::uint64_t seed) {
    GaussianStream gs(seed);
    Matrix a(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i)
            a(i, j) = gs.next_complex();
    return (a + a.adjoint()) / 2.0;
}

std::vector<Matrix> random_kraus_set(int dim, int m, std::uint64_t seed) {
    const Matrix u = haar_unitary(m * dim, seed);
    std::vector<Matrix> kraus(m);
    for (int r = 0; r < m; ++r)
        kraus[r] = u.block(static_cast<Eigen::Index>(r) * dim, 0, dim, dim);
    return kraus;
}

}  // namespace sffb
