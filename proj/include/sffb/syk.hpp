#pragma once

#include <cstdint>
#include <vector>

#include "sffb/projectors.hpp"
#include "sffb/types.hpp"

namespace sffb {

/// Majorana operators are scaled Pauli strings, i.e. monomial matrices:
/// column j holds a single entry phase[j] at row rows[j]. Products and
/// applications cost O(D) instead of O(D^2)/O(D^3).
struct MajoranaOp {
    Eigen::VectorXi rows;
    Vector phases;

    int dim() const { return static_cast<int>(rows.size()); }
    Matrix dense() const;
};

MajoranaOp monomial_product(const MajoranaOp& a, const MajoranaOp& b);

/// 2N Majorana matrices on N fermion sites (D = 2^N), normalized to
/// {chi_i, chi_j} = delta_ij (so chi^2 = 1/2). Deterministic tensor-product
/// ladder: each added site multiplies existing matrices by a parity factor
/// on the new qubit and appends the new site's pair. The pair ordering is
/// fixed so that the fermion vacuum of c_j = (chi_2j - i chi_2j+1)/sqrt(2)
/// lands at basis index D/2 (0-based). Guarded at N <= 14.
std::vector<MajoranaOp> majorana_matrices(int n_sites);

/// Totally antisymmetric coupling tensor, stored as one value per ordered
/// index tuple j_1 < ... < j_q over the 2N Majorana indices, in
/// lexicographic tuple order.
struct CouplingTensor {
    int n_sites = 0;
    int order = 0;  // q
    std::vector<double> values;

    std::size_t tuple_count() const { return values.size(); }
};

/// One Gaussian draw of variance (q-1)! J^2 / N^(q-1) per tuple, in
/// lexicographic order from a seeded stream (see rng.hpp for the pinned
/// generator). Throws OddQ / QTooLarge.
CouplingTensor sample_couplings(int n_sites, int q, double j_scale, std::uint64_t seed);

/// H = -i^(q/2) sum_{j1<...<jq} J_{j1...jq} chi_j1 ... chi_jq, assembled
/// over monomial products and explicitly Hermitized; the correction must be
/// below 1e-12 or assembly aborts.
Matrix build_hamiltonian(const CouplingTensor& couplings, const std::vector<MajoranaOp>& majoranas);

struct SykModel {
    int n_sites = 0;
    int q = 0;
    double j_scale = 0.0;
    std::uint64_t seed = 0;
    CouplingTensor couplings;
    std::vector<MajoranaOp> majoranas;
    Matrix hamiltonian;

    int dimension() const { return 1 << n_sites; }
};

SykModel build_syk_model(int n_sites, int q, double j_scale, std::uint64_t seed);

/// Annihilation operators c_j = (chi_2j - i chi_2j+1)/sqrt(2), 0-based j.
/// Each maps a basis vector to a single signed basis vector or to zero.
struct FermionOp {
    MajoranaOp chi_a;  // chi_2j
    MajoranaOp chi_b;  // chi_2j+1

    /// c_j applied to basis vector m: returns false if annihilated,
    /// else the (index, amplitude) of the image.
    bool apply_to_basis(int m, int& out_index, cxd& out_amp) const;
    /// Same for c_j^dag.
    bool apply_dagger_to_basis(int m, int& out_index, cxd& out_amp) const;
};
std::vector<FermionOp> fermion_ops(const std::vector<MajoranaOp>& majoranas);

/// Basis index of the Fock vacuum (the unique basis state annihilated by
/// every c_j), found by direct search.
int vacuum_index(const std::vector<FermionOp>& ops);

/// Fock state (c_N^dag)^{n_N} ... (c_1^dag)^{n_1} |0>, a signed basis
/// vector of dimension 2^N. occupations[j] is the bit of site j+1.
Vector fock_state(const std::vector<int>& occupations);

/// Projectors onto fixed occupation patterns of the first n_subsystem
/// sites, with the remaining sites' occupations summed over: 2^{N_S}
/// projectors of rank 2^{N - N_S}.
ProjectorSet subsystem_fock_projectors(const SykModel& model, int n_subsystem);

/// Diagonal of the total fermion number operator sum_j c_j^dag c_j in the
/// construction basis, computed from the operators (not assumed).
RealVector fermion_number_diagonal(const std::vector<MajoranaOp>& majoranas);

/// Diagonal of the fermion parity operator (-1)^{sum_j n_j}.
RealVector fermion_parity_diagonal(const std::vector<MajoranaOp>& majoranas);

}  // namespace sffb
