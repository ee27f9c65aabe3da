#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace sffb {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validation failures carry their kind in the message so the CLI can name
// the failing check in its diagnostic.
#define SFFB_ERROR_TYPE(Name)                                        \
    struct Name final : Error {                                      \
        explicit Name(const std::string& m) : Error(#Name ": " + m) {} \
    }

SFFB_ERROR_TYPE(NonHermitianInput);
SFFB_ERROR_TYPE(DimensionZero);
SFFB_ERROR_TYPE(NonpositiveSigma);
SFFB_ERROR_TYPE(NonpositiveBinWidth);
SFFB_ERROR_TYPE(GridTooNarrow);
SFFB_ERROR_TYPE(NonIsometry);
SFFB_ERROR_TYPE(DimensionTooLarge);
SFFB_ERROR_TYPE(DimensionMismatch);
SFFB_ERROR_TYPE(NotHadamard);
SFFB_ERROR_TYPE(EmptyWindow);
SFFB_ERROR_TYPE(GridMismatch);
SFFB_ERROR_TYPE(IndexRange);
SFFB_ERROR_TYPE(HorizonOutsideGrid);
SFFB_ERROR_TYPE(WindowTooNarrow);
SFFB_ERROR_TYPE(OddQ);
SFFB_ERROR_TYPE(QTooLarge);
SFFB_ERROR_TYPE(BadBit);
SFFB_ERROR_TYPE(BadSubsystemSize);
SFFB_ERROR_TYPE(BadTimeGrid);
SFFB_ERROR_TYPE(ConfigError);

#undef SFFB_ERROR_TYPE

/// Sampled function of time: a strictly increasing grid plus one value per point.
template <typename T>
struct TimeSeries {
    RealVector times;
    Eigen::Vector<T, Eigen::Dynamic> values;

    TimeSeries() = default;
    TimeSeries(RealVector t, Eigen::Vector<T, Eigen::Dynamic> v)
        : times(std::move(t)), values(std::move(v)) {
        if (times.size() != values.size())
            throw BadTimeGrid("times and values lengths differ");
        for (Eigen::Index i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw BadTimeGrid("times not strictly increasing");
    }

    Eigen::Index size() const { return times.size(); }
};

using RealSeries = TimeSeries<double>;
using ComplexSeries = TimeSeries<cxd>;

inline RealVector linspace(double a, double b, int n) {
    if (n < 2) throw BadTimeGrid("need at least 2 grid points");
    return RealVector::LinSpaced(n, a, b);
}

/// Geometric grid from a to b; both must be positive.
inline RealVector logspace(double a, double b, int n) {
    if (n < 2) throw BadTimeGrid("need at least 2 grid points");
    if (!(a > 0.0) || !(b > a)) throw BadTimeGrid("logspace needs 0 < a < b");
    RealVector t(n);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i)
        t[i] = std::exp(la + (lb - la) * i / (n - 1));
    t[0] = a;
    t[n - 1] = b;
    return t;
}

}  // namespace sffb
