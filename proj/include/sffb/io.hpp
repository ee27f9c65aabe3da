#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sffb/projectors.hpp"
#include "sffb/spectra.hpp"
#include "sffb/types.hpp"

namespace sffb {

/// Full-precision decimal form (17 significant digits) that round-trips
/// doubles exactly.
std::string format_double(double x);

/// FNV-1a 64-bit hash, hex-encoded; links output files to their config.
std::string fnv1a_hex(const std::string& data);

/// One eigenvalue per line, ascending. Lines starting with '#' are skipped
/// on read.
void write_spectrum_csv(const std::string& path, const RealVector& eigenvalues);
RealVector read_spectrum_csv(const std::string& path);

/// Columns: bin_left, bin_right, density.
void write_histogram_csv(const std::string& path, const DosHistogram& hist,
                         const std::string& manifest_hash = "");

/// Header row plus one line per time point; a leading '# manifest <hash>'
/// comment when a hash is given.
void write_series_csv(const std::string& path, const std::vector<std::string>& column_names,
                      const RealVector& times, const std::vector<RealVector>& columns,
                      const std::string& manifest_hash = "");

/// Complex Hermitian matrix as CSV: first line D, then D rows of
/// interleaved re,im entries.
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

/// One real weight per line (by ascending-eigenvalue index).
RealVector read_weights_file(const std::string& path, int expected_size);

/// JSON manifest (label, D, dims, provenance) plus one CSV matrix dump per
/// isometry, written under directory.
void export_projector_set(const std::string& directory, const ProjectorSet& set,
                          const std::string& provenance_json);

/// Coupling tensor as CSV: j_1,...,j_q,value per line, lexicographic tuple
/// order.
struct CouplingTensor;
void write_couplings_csv(const std::string& path, const CouplingTensor& couplings,
                         const std::string& manifest_hash = "");

}  // namespace sffb
