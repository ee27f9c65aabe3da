#include "sffb/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace sffb {

namespace {

void require_matching(const QuantumChannel& channel, const ProjectorSet& set) {
    if (channel.dimension() != set.total_dim)
        throw DimensionMismatch("channel dimension " + std::to_string(channel.dimension()) +
                                " vs projector set dimension " + std::to_string(set.total_dim));
}

// Phase matrix P(t, n) = g_n exp(-i E_n t) for spectral channels.
Matrix phase_matrix(const QuantumChannel& channel, const RealVector& times) {
    const Eigen::Index d = channel.dimension();
    const RealVector& energies = channel.spectrum().eigenvalues;
    const RealVector& weights = channel.filter_weights();
    Matrix phases(times.size(), d);
    for (Eigen::Index i = 0; i < times.size(); ++i)
        for (Eigen::Index n = 0; n < d; ++n) {
            const double arg = -energies[n] * times[i];
            phases(i, n) = weights[n] * cxd(std::cos(arg), std::sin(arg));
        }
    return phases;
}

// T(n, a * cols_b + b) = conj(C_row(n, a)) * C_col(n, b), so that
// (phases * T)(t, ab) = [C_row^dag diag(p(t)) C_col]_{ab}.
Matrix overlap_table(const Matrix& c_row, const Matrix& c_col) {
    const Eigen::Index d = c_row.rows();
    const Eigen::Index ra = c_row.cols(), rb = c_col.cols();
    Matrix table(d, ra * rb);
    for (Eigen::Index a = 0; a < ra; ++a)
        for (Eigen::Index b = 0; b < rb; ++b)
            table.col(a * rb + b) = c_row.col(a).conjugate().cwiseProduct(c_col.col(b));
    return table;
}

// Tr[Pi_k(t) Pi_j] for all times; rows of (phases * table) give the d_j x d_k
// block V_j^dag A(t) V_k whose squared Frobenius norm is the trace.
RealVector overlap_series_spectral(const Matrix& phases, const Matrix& c_j, const Matrix& c_k) {
    const Matrix table = overlap_table(c_j, c_k);
    return (phases * table).rowwise().squaredNorm();
}

RealVector overlap_series_general(const QuantumChannel& channel, const Matrix& v_j,
                                  const Matrix& v_k, const RealVector& times) {
    RealVector out(times.size());
    for (Eigen::Index i = 0; i < times.size(); ++i) {
        double acc = 0.0;
        for (const Matrix& op : channel.kraus_at(times[i]))
            acc += (v_j.adjoint() * op * v_k).squaredNorm();
        out[i] = acc;
    }
    return out;
}

struct LinearFit {
    double slope, intercept, r2;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    const double r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return {slope, intercept, r2};
}

}  // namespace

RealSeries mean_return_probability(const QuantumChannel& channel, const ProjectorSet& set,
                                   const RealVector& times) {
    require_matching(channel, set);
    RealVector total = RealVector::Zero(times.size());
    if (channel.has_spectrum()) {
        const Matrix phases = phase_matrix(channel, times);
        const Matrix& w = channel.spectrum().eigenvectors;
        for (const Matrix& v : set.isometries) {
            const Matrix c = w.adjoint() * v;
            total += overlap_series_spectral(phases, c, c);
        }
    } else {
        // One provider call per time, shared across the whole set.
        for (Eigen::Index i = 0; i < times.size(); ++i) {
            const std::vector<Matrix> kraus = channel.kraus_at(times[i]);
            double acc = 0.0;
            for (const Matrix& v : set.isometries)
                for (const Matrix& op : kraus)
                    acc += (v.adjoint() * (op * v)).squaredNorm();
            total[i] = acc;
        }
    }
    return {times, total / static_cast<double>(set.subspace_dim)};
}

ChainReport derivation_chain(const SpectralDecomposition& spec, const ProjectorSet& set,
                             const RealVector& times) {
    if (spec.dimension() != set.total_dim)
        throw DimensionMismatch("spectrum dimension vs projector set dimension");
    const double d_eff = static_cast<double>(set.subspace_dim);

    ChainReport report;
    report.times = times;
    report.full_double_sum.resize(times.size());
    report.diagonal_sum.resize(times.size());
    report.squared_mean_amplitude.resize(times.size());
    report.sff.resize(times.size());

    for (Eigen::Index i = 0; i < times.size(); ++i) {
        const Matrix u = unitary_at(spec, times[i]);
        double full = 0.0, diag = 0.0, amp = 0.0;
        cxd trace(0.0, 0.0);
        for (const Matrix& v : set.isometries) {
            const Matrix block = v.adjoint() * u * v;
            full += block.squaredNorm();
            diag += block.diagonal().cwiseAbs2().sum();
            amp += block.diagonal().cwiseAbs().sum();
            trace += block.trace();
        }
        report.full_double_sum[i] = full / d_eff;
        report.diagonal_sum[i] = diag / d_eff;
        report.squared_mean_amplitude[i] = (amp / d_eff) * (amp / d_eff);
        report.sff[i] = std::norm(trace) / (d_eff * d_eff);
    }
    return report;
}

BoundReport verify_speed_limit(const RealSeries& p_s, const RealSeries& k, double viol_tol) {
    if (p_s.times.size() != k.times.size() ||
        !(p_s.times.array() == k.times.array()).all())
        throw GridMismatch("P_S and K must share one time grid");

    BoundReport report;
    report.times = p_s.times;
    report.p_s = p_s.values;
    report.k = k.values;
    report.margin = p_s.values - k.values;
    report.min_margin = report.margin.minCoeff();
    report.violated = report.min_margin < -viol_tol;
    return report;
}

RealSeries per_state_return(const QuantumChannel& channel, const ProjectorSet& set, int k_index,
                            const RealVector& times) {
    require_matching(channel, set);
    if (k_index < 0 || k_index >= set.count())
        throw IndexRange("projector index " + std::to_string(k_index));
    const Matrix& v = set.isometries[k_index];
    RealVector series;
    if (channel.has_spectrum()) {
        const Matrix c = channel.spectrum().eigenvectors.adjoint() * v;
        series = overlap_series_spectral(phase_matrix(channel, times), c, c);
    } else {
        series = overlap_series_general(channel, v, v, times);
    }
    return {times, series / static_cast<double>(set.dims[k_index])};
}

RealSeries cross_overlap(const QuantumChannel& channel, const ProjectorSet& set, int k_index,
                         int j_index, const RealVector& times) {
    require_matching(channel, set);
    if (k_index < 0 || k_index >= set.count() || j_index < 0 || j_index >= set.count())
        throw IndexRange("projector indices " + std::to_string(k_index) + ", " +
                         std::to_string(j_index));
    if (k_index == j_index) throw IndexRange("cross overlap requires k != j");
    const Matrix& v_k = set.isometries[k_index];
    const Matrix& v_j = set.isometries[j_index];
    RealVector series;
    if (channel.has_spectrum()) {
        const Matrix& w = channel.spectrum().eigenvectors;
        series = overlap_series_spectral(phase_matrix(channel, times), w.adjoint() * v_j,
                                         w.adjoint() * v_k);
    } else {
        series = overlap_series_general(channel, v_j, v_k, times);
    }
    return {times, series / static_cast<double>(set.dims[k_index])};
}

double haar_prediction(double k_value, int d_s, bool same_index) {
    const double inv = 1.0 / static_cast<double>(d_s);
    const double delta = same_index ? 1.0 : 0.0;
    return inv + (delta - inv) * k_value;
}

double haar_fluctuation_scale(int d_e) {
    return 1.0 / std::sqrt(static_cast<double>(d_e));
}

std::vector<bool> scrambling_check(const RealSeries& p_s, int d_s, double c_tol) {
    if (!(c_tol > 0.0)) throw NonpositiveSigma("scrambling tolerance must be positive");
    std::vector<bool> scrambled(p_s.size());
    for (Eigen::Index i = 0; i < p_s.size(); ++i)
        scrambled[i] = std::abs(d_s * p_s.values[i] - 1.0) <= c_tol;
    return scrambled;
}

std::optional<double> sustained_scrambling_time(const RealSeries& k, int d_s, double horizon_t) {
    if (k.size() == 0 || k.times[0] > 0.0 || k.times[k.size() - 1] < horizon_t)
        throw HorizonOutsideGrid("grid must cover [0, horizon]");

    Eigen::Index last = k.size() - 1;
    while (last > 0 && k.times[last] > horizon_t) --last;

    const double threshold = 1.0 / static_cast<double>(d_s);
    double suffix_max = -1.0;
    std::optional<double> result;
    for (Eigen::Index i = last; i >= 0; --i) {
        suffix_max = std::max(suffix_max, k.values[i]);
        if (suffix_max <= threshold) result = k.times[i];
        if (suffix_max > threshold) break;  // earlier points can only extend the max
    }
    return result;
}

PowerLawFit powerlaw_fit(const RealSeries& k, double t_lo, double t_hi) {
    if (!(t_lo < t_hi) || t_lo < k.times[0] || t_hi > k.times[k.size() - 1])
        throw WindowTooNarrow("fit window must lie inside the time grid");

    std::vector<Eigen::Index> window;
    for (Eigen::Index i = 0; i < k.size(); ++i)
        if (k.times[i] >= t_lo && k.times[i] <= t_hi) window.push_back(i);
    if (window.size() < 8) throw WindowTooNarrow("fewer than 8 grid points in window");

    // Local minima positions within the window.
    std::vector<std::size_t> minima;
    for (std::size_t w = 1; w + 1 < window.size(); ++w) {
        const double prev = k.values[window[w - 1]];
        const double cur = k.values[window[w]];
        const double next = k.values[window[w + 1]];
        if (cur <= prev && cur <= next) minima.push_back(w);
    }

    std::vector<double> log_t, log_k;
    auto push_point = [&](Eigen::Index idx) {
        const double v = k.values[idx];
        if (!(v > 0.0))
            throw Error("powerlaw_fit: nonpositive envelope value at t = " +
                        std::to_string(k.times[idx]));
        log_t.push_back(std::log(k.times[idx]));
        log_k.push_back(std::log(v));
    };

    if (minima.size() < 2) {
        // Monotone data: the running max is the data itself.
        for (Eigen::Index idx : window) push_point(idx);
    } else {
        for (std::size_t m = 0; m + 1 < minima.size(); ++m) {
            std::size_t best = minima[m];
            for (std::size_t w = minima[m]; w <= minima[m + 1]; ++w)
                if (k.values[window[w]] > k.values[window[best]]) best = w;
            push_point(window[best]);
        }
    }
    if (log_t.size() < 8) throw WindowTooNarrow("fewer than 8 envelope points in window");

    const LinearFit fit = least_squares(log_t, log_k);
    PowerLawFit result;
    result.exponent = fit.slope;
    result.prefactor = std::exp(fit.intercept);
    result.r2 = fit.r2;
    result.points_used = static_cast<int>(log_t.size());
    return result;
}

}  // namespace sffb
