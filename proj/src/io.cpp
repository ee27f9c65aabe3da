#include "sffb/io.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sffb/syk.hpp"

namespace sffb {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    return out;
}

}  // namespace

void write_spectrum_csv(const std::string& path, const RealVector& eigenvalues) {
    std::ofstream out = open_out(path);
    for (Eigen::Index n = 0; n < eigenvalues.size(); ++n)
        out << format_double(eigenvalues[n]) << "\n";
}

RealVector read_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        values.push_back(std::stod(line));
    }
    if (values.empty()) throw Error("no eigenvalues in " + path);
    RealVector v(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i];
    return v;
}

void write_histogram_csv(const std::string& path, const DosHistogram& hist,
                         const std::string& manifest_hash) {
    std::ofstream out = open_out(path);
    if (!manifest_hash.empty()) out << "# manifest " << manifest_hash << "\n";
    out << "bin_left,bin_right,density\n";
    for (int b = 0; b < hist.bins(); ++b)
        out << format_double(hist.bin_edges[b]) << "," << format_double(hist.bin_edges[b + 1])
            << "," << format_double(hist.densities[b]) << "\n";
}

void write_series_csv(const std::string& path, const std::vector<std::string>& column_names,
                      const RealVector& times, const std::vector<RealVector>& columns,
                      const std::string& manifest_hash) {
    if (column_names.size() != columns.size())
        throw Error("column name count does not match column count");
    for (const RealVector& col : columns)
        if (col.size() != times.size()) throw Error("series column length mismatch");

    std::ofstream out = open_out(path);
    if (!manifest_hash.empty()) out << "# manifest " << manifest_hash << "\n";
    out << "t";
    for (const std::string& name : column_names) out << "," << name;
    out << "\n";
    for (Eigen::Index i = 0; i < times.size(); ++i) {
        out << format_double(times[i]);
        for (const RealVector& col : columns) out << "," << format_double(col[i]);
        out << "\n";
    }
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
    std::ofstream out = open_out(path);
    out << m.rows() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ",";
            out << format_double(m(i, j).real()) << "," << format_double(m(i, j).imag());
        }
        out << "\n";
    }
}

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error("empty matrix file " + path);
    const int d = std::stoi(line);
    if (d <= 0) throw Error("bad matrix dimension in " + path);

    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
        if (!std::getline(in, line)) throw Error("truncated matrix file " + path);
        std::stringstream row(line);
        std::string cell;
        for (int j = 0; j < d; ++j) {
            if (!std::getline(row, cell, ',')) throw Error("truncated matrix row in " + path);
            const double re = std::stod(cell);
            if (!std::getline(row, cell, ',')) throw Error("truncated matrix row in " + path);
            const double im = std::stod(cell);
            m(i, j) = cxd(re, im);
        }
    }
    return m;
}

RealVector read_weights_file(const std::string& path, int expected_size) {
    RealVector w = read_spectrum_csv(path);
    if (w.size() != expected_size)
        throw DimensionMismatch("weights file has " + std::to_string(w.size()) +
                                " entries, expected " + std::to_string(expected_size));
    return w;
}

void write_couplings_csv(const std::string& path, const CouplingTensor& couplings,
                         const std::string& manifest_hash) {
    std::ofstream out = open_out(path);
    if (!manifest_hash.empty()) out << "# manifest " << manifest_hash << "\n";
    const int q = couplings.order;
    const int limit = 2 * couplings.n_sites;
    std::vector<int> tuple(q);
    for (int i = 0; i < q; ++i) tuple[i] = i;
    for (double value : couplings.values) {
        for (int i = 0; i < q; ++i) out << tuple[i] << ",";
        out << format_double(value) << "\n";
        // Advance lexicographically, mirroring the sampling order.
        for (int pos = q - 1; pos >= 0; --pos) {
            if (tuple[pos] < limit - q + pos) {
                ++tuple[pos];
                for (int rest = pos + 1; rest < q; ++rest) tuple[rest] = tuple[rest - 1] + 1;
                break;
            }
        }
    }
}

void export_projector_set(const std::string& directory, const ProjectorSet& set,
                          const std::string& provenance_json) {
    std::filesystem::create_directories(directory);
    {
        std::ofstream out(directory + "/manifest.json");
        if (!out) throw Error("cannot open projector manifest for writing");
        out << provenance_json << "\n";
    }
    for (int k = 0; k < set.count(); ++k) {
        char name[64];
        std::snprintf(name, sizeof(name), "/isometry_%04d.csv", k);
        std::ofstream out(directory + name);
        const Matrix& v = set.isometries[k];
        out << v.rows() << "," << v.cols() << "\n";
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            for (Eigen::Index j = 0; j < v.cols(); ++j) {
                if (j > 0) out << ",";
                out << format_double(v(i, j).real()) << "," << format_double(v(i, j).imag());
            }
            out << "\n";
        }
    }
}

}  // namespace sffb
