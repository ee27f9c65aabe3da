#include "sffb/syk.hpp"

#include <cmath>

#include "sffb/rng.hpp"

namespace sffb {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t result = 1;
    for (int i = 1; i <= k; ++i)
        result = result * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return result;
}

// Advance an ordered index tuple over {0..limit-1} lexicographically.
bool next_tuple(std::vector<int>& tuple, int limit) {
    const int q = static_cast<int>(tuple.size());
    for (int pos = q - 1; pos >= 0; --pos) {
        if (tuple[pos] < limit - q + pos) {
            ++tuple[pos];
            for (int rest = pos + 1; rest < q; ++rest)
                tuple[rest] = tuple[rest - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

Matrix MajoranaOp::dense() const {
    Matrix m = Matrix::Zero(dim(), dim());
    for (int j = 0; j < dim(); ++j) m(rows[j], j) = phases[j];
    return m;
}

MajoranaOp monomial_product(const MajoranaOp& a, const MajoranaOp& b) {
    const int d = b.dim();
    MajoranaOp out;
    out.rows.resize(d);
    out.phases.resize(d);
    for (int j = 0; j < d; ++j) {
        const int mid = b.rows[j];
        out.rows[j] = a.rows[mid];
        out.phases[j] = a.phases[mid] * b.phases[j];
    }
    return out;
}

std::vector<MajoranaOp> majorana_matrices(int n_sites) {
    if (n_sites < 1) throw DimensionZero("need at least one fermion site");
    if (n_sites > 14)
        throw DimensionTooLarge("Majorana construction guarded at N <= 14, got N = " +
                                std::to_string(n_sites));

    // Site 0 carries (sigma_x, sigma_y)/sqrt(2); every later site is
    // appended on a new fast qubit as (sigma_y, sigma_x)/sqrt(2) while the
    // existing matrices pick up the parity factor sigma_z there. This
    // ordering puts the fermion vacuum at basis index D/2.
    std::vector<MajoranaOp> ops(2);
    ops[0].rows.resize(2);
    ops[0].phases.resize(2);
    ops[0].rows << 1, 0;
    ops[0].phases << kInvSqrt2, kInvSqrt2;  // sigma_x / sqrt(2)
    ops[1].rows.resize(2);
    ops[1].phases.resize(2);
    ops[1].rows << 1, 0;
    ops[1].phases << cxd(0, kInvSqrt2), cxd(0, -kInvSqrt2);  // sigma_y / sqrt(2)

    for (int site = 1; site < n_sites; ++site) {
        const int old_dim = 1 << site;
        const int new_dim = old_dim << 1;

        for (MajoranaOp& op : ops) {
            MajoranaOp extended;
            extended.rows.resize(new_dim);
            extended.phases.resize(new_dim);
            for (int i = 0; i < old_dim; ++i)
                for (int b = 0; b < 2; ++b) {
                    extended.rows[2 * i + b] = 2 * op.rows[i] + b;
                    extended.phases[2 * i + b] = op.phases[i] * (b == 0 ? 1.0 : -1.0);
                }
            op = std::move(extended);
        }

        MajoranaOp chi_y, chi_x;
        chi_y.rows.resize(new_dim);
        chi_y.phases.resize(new_dim);
        chi_x.rows.resize(new_dim);
        chi_x.phases.resize(new_dim);
        for (int i = 0; i < old_dim; ++i)
            for (int b = 0; b < 2; ++b) {
                chi_y.rows[2 * i + b] = 2 * i + (1 - b);
                chi_y.phases[2 * i + b] = b == 0 ? cxd(0, kInvSqrt2) : cxd(0, -kInvSqrt2);
                chi_x.rows[2 * i + b] = 2 * i + (1 - b);
                chi_x.phases[2 * i + b] = kInvSqrt2;
            }
        ops.push_back(std::move(chi_y));
        ops.push_back(std::move(chi_x));
    }
    return ops;
}

CouplingTensor sample_couplings(int n_sites, int q, double j_scale, std::uint64_t seed) {
    if (q % 2 != 0) throw OddQ("interaction order q must be even, got " + std::to_string(q));
    if (q < 2 || q > 2 * n_sites)
        throw QTooLarge("q must lie in [2, 2N], got q = " + std::to_string(q));

    double variance = j_scale * j_scale;
    for (int f = 1; f <= q - 1; ++f) variance *= f;
    for (int f = 0; f < q - 1; ++f) variance /= n_sites;
    const double stddev = std::sqrt(variance);

    CouplingTensor tensor;
    tensor.n_sites = n_sites;
    tensor.order = q;
    tensor.values.reserve(binomial(2 * n_sites, q));

    GaussianStream gs(seed);
    std::vector<int> tuple(q);
    for (int i = 0; i < q; ++i) tuple[i] = i;
    do {
        tensor.values.push_back(stddev * gs.next());
    } while (next_tuple(tuple, 2 * n_sites));
    return tensor;
}

Matrix build_hamiltonian(const CouplingTensor& couplings, const std::vector<MajoranaOp>& majoranas) {
    const int n = couplings.n_sites;
    const int q = couplings.order;
    if (static_cast<int>(majoranas.size()) != 2 * n)
        throw DimensionMismatch("expected 2N Majorana matrices");
    if (couplings.values.size() != binomial(2 * n, q))
        throw DimensionMismatch("coupling tensor size does not match C(2N, q)");
    const int d = majoranas[0].dim();

    // -i^(q/2)
    static constexpr cxd i_powers[4] = {cxd(1, 0), cxd(0, 1), cxd(-1, 0), cxd(0, -1)};
    const cxd prefactor = -i_powers[(q / 2) % 4];

    Matrix h = Matrix::Zero(d, d);
    std::vector<int> tuple(q);
    for (int i = 0; i < q; ++i) tuple[i] = i;
    std::size_t index = 0;
    do {
        const cxd coeff = prefactor * couplings.values[index++];
        if (coeff != cxd(0.0, 0.0)) {
            MajoranaOp product = majoranas[tuple[0]];
            for (int pos = 1; pos < q; ++pos)
                product = monomial_product(product, majoranas[tuple[pos]]);
            for (int col = 0; col < d; ++col)
                h(product.rows[col], col) += coeff * product.phases[col];
        }
    } while (next_tuple(tuple, 2 * n));

    const double correction = (h - h.adjoint()).cwiseAbs().maxCoeff() / 2.0;
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (correction > 1e-12 * scale)
        throw Error("Hamiltonian assembly produced non-Hermitian residual " +
                    std::to_string(correction));
    return (h + h.adjoint()) / 2.0;
}

SykModel build_syk_model(int n_sites, int q, double j_scale, std::uint64_t seed) {
    SykModel model;
    model.n_sites = n_sites;
    model.q = q;
    model.j_scale = j_scale;
    model.seed = seed;
    model.majoranas = majorana_matrices(n_sites);
    model.couplings = sample_couplings(n_sites, q, j_scale, seed);
    model.hamiltonian = build_hamiltonian(model.couplings, model.majoranas);
    return model;
}

std::vector<FermionOp> fermion_ops(const std::vector<MajoranaOp>& majoranas) {
    std::vector<FermionOp> ops;
    ops.reserve(majoranas.size() / 2);
    for (std::size_t j = 0; j + 1 < majoranas.size(); j += 2)
        ops.push_back({majoranas[j], majoranas[j + 1]});
    return ops;
}

bool FermionOp::apply_to_basis(int m, int& out_index, cxd& out_amp) const {
    const int row_a = chi_a.rows[m];
    if (chi_b.rows[m] != row_a)
        throw Error("fermion pair does not act on a single qubit");
    const cxd amp = (chi_a.phases[m] - cxd(0, 1) * chi_b.phases[m]) * kInvSqrt2;
    out_index = row_a;
    out_amp = amp;
    return std::abs(amp) > 1e-12;
}

bool FermionOp::apply_dagger_to_basis(int m, int& out_index, cxd& out_amp) const {
    const int row_a = chi_a.rows[m];
    if (chi_b.rows[m] != row_a)
        throw Error("fermion pair does not act on a single qubit");
    const cxd amp = (chi_a.phases[m] + cxd(0, 1) * chi_b.phases[m]) * kInvSqrt2;
    out_index = row_a;
    out_amp = amp;
    return std::abs(amp) > 1e-12;
}

int vacuum_index(const std::vector<FermionOp>& ops) {
    const int d = ops.empty() ? 0 : ops[0].chi_a.dim();
    for (int m = 0; m < d; ++m) {
        bool annihilated_by_all = true;
        for (const FermionOp& op : ops) {
            int idx;
            cxd amp;
            if (op.apply_to_basis(m, idx, amp)) {
                annihilated_by_all = false;
                break;
            }
        }
        if (annihilated_by_all) return m;
    }
    throw Error("no Fock vacuum found in the construction basis");
}

namespace {

// (index, amplitude) of the signed basis vector
// (c_N^dag)^{n_N} ... (c_1^dag)^{n_1} |0>.
std::pair<int, cxd> fock_basis_component(const std::vector<FermionOp>& ops, int vacuum,
                                         const std::vector<int>& occupations) {
    int index = vacuum;
    cxd amp(1.0, 0.0);
    for (std::size_t j = 0; j < occupations.size(); ++j) {
        if (occupations[j] == 0) continue;
        int next_index;
        cxd step;
        if (!ops[j].apply_dagger_to_basis(index, next_index, step))
            throw Error("creation operator annihilated a Fock intermediate");
        index = next_index;
        amp *= step;
    }
    return {index, amp};
}

}  // namespace

Vector fock_state(const std::vector<int>& occupations) {
    const int n = static_cast<int>(occupations.size());
    for (int bit : occupations)
        if (bit != 0 && bit != 1) throw BadBit("occupation bits must be 0 or 1");

    const std::vector<FermionOp> ops = fermion_ops(majorana_matrices(n));
    const int vacuum = vacuum_index(ops);
    const auto [index, amp] = fock_basis_component(ops, vacuum, occupations);

    Vector state = Vector::Zero(1 << n);
    state[index] = amp;
    return state;
}

ProjectorSet subsystem_fock_projectors(const SykModel& model, int n_subsystem) {
    const int n = model.n_sites;
    if (n_subsystem < 1 || n_subsystem > n)
        throw BadSubsystemSize("N_S = " + std::to_string(n_subsystem) + " outside [1, " +
                               std::to_string(n) + "]");
    const int n_env = n - n_subsystem;
    const int d = model.dimension();
    const int d_s = 1 << n_subsystem;
    const int d_e = 1 << n_env;

    const std::vector<FermionOp> ops = fermion_ops(model.majoranas);
    const int vacuum = vacuum_index(ops);

    ProjectorSet set;
    set.total_dim = d;
    set.subspace_dim = d;
    set.label = "syk-fock";
    set.isometries.reserve(d_s);
    std::vector<int> occupations(n);
    for (int k = 0; k < d_s; ++k) {
        // Site j+1 of the subsystem pattern is bit (n_subsystem-1-j) of k;
        // the first site is the most significant, matching the tensor
        // convention of the projector module.
        for (int j = 0; j < n_subsystem; ++j)
            occupations[j] = (k >> (n_subsystem - 1 - j)) & 1;
        Matrix v = Matrix::Zero(d, d_e);
        for (int e = 0; e < d_e; ++e) {
            for (int j = 0; j < n_env; ++j)
                occupations[n_subsystem + j] = (e >> (n_env - 1 - j)) & 1;
            const auto [index, amp] = fock_basis_component(ops, vacuum, occupations);
            v(index, e) = amp;
        }
        set.isometries.push_back(std::move(v));
        set.dims.push_back(d_e);
    }
    return set;
}

RealVector fermion_number_diagonal(const std::vector<MajoranaOp>& majoranas) {
    const std::vector<FermionOp> ops = fermion_ops(majoranas);
    const int d = majoranas[0].dim();
    RealVector diag = RealVector::Zero(d);
    for (int m = 0; m < d; ++m) {
        for (const FermionOp& op : ops) {
            int down_index;
            cxd down_amp;
            if (!op.apply_to_basis(m, down_index, down_amp)) continue;
            int up_index;
            cxd up_amp;
            if (!op.apply_dagger_to_basis(down_index, up_index, up_amp))
                throw Error("number operator left the basis state");
            if (up_index != m) throw Error("number operator left the basis state");
            diag[m] += (up_amp * down_amp).real();
        }
    }
    return diag;
}

RealVector fermion_parity_diagonal(const std::vector<MajoranaOp>& majoranas) {
    RealVector number = fermion_number_diagonal(majoranas);
    RealVector parity(number.size());
    for (Eigen::Index m = 0; m < number.size(); ++m)
        parity[m] = (static_cast<int>(std::lround(number[m])) % 2 == 0) ? 1.0 : -1.0;
    return parity;
}

}  // namespace sffb
