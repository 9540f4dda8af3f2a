#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gfsl/global_traces.hpp"
#include "gfsl/selberg.hpp"

namespace gfsl {

// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

// Header row then one row per record, comma separated, LF endings.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Header `mu,multiplicity`; blank lines and lines starting with '#' are skipped.
LaplaceSpectrum read_laplace_csv(std::istream& is, int genus);
LaplaceSpectrum read_laplace_file(const std::string& path, int genus);

// Columns `length,multiplicity,is_primitive`, primitives and iterates by length.
void write_length_spectrum_csv(std::ostream& os, const LengthSpectrum& ls);
LengthSpectrum read_length_spectrum_csv(std::istream& is, int genus);

}  // namespace gfsl
