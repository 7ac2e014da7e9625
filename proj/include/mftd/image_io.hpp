#pragma once

#include <iosfwd>
#include <string>

#include "mftd/imaging.hpp"

namespace mftd {

// "x,y,value" rows for every lattice point inside the clip disk.
void write_csv(std::ostream& out, const ImageGrid& g);
void write_csv_file(const std::string& path, const ImageGrid& g);

// Binary 8-bit PGM: value range mapped linearly to 0..255, points outside the
// clip disk written as 0, first row at y = +1. The header comment records the
// functional and the value range.
void write_pgm(std::ostream& out, const ImageGrid& g);
void write_pgm_file(const std::string& path, const ImageGrid& g);

// Reads back the CSV written above onto `lattice`; throws FormatError when the
// points do not match.
ImageGrid read_csv(std::istream& in, std::shared_ptr<const Lattice> lattice);

}  // namespace mftd
