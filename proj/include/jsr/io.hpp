#pragma once

#include "jsr/types.hpp"

#include <string>

namespace jsr {

// JSON family file: {"name", "source", "dim", "count", "matrices"}. Each
// matrix is a row-major array of dim * dim entries (or an array of rows);
// an entry is a number or an exact rational [numerator, denominator].
struct FamilyFile {
  MatrixFamily family;
  std::string name;
  std::string source;
  Index rational_entries = 0;  // entries given as [num, den], rounded to nearest
};

class ParseError : public Error {
 public:
  using Error::Error;
};

FamilyFile parse_family(const std::string& text);
FamilyFile read_family(const std::string& path);
// Doubles are written in shortest round-trip form.
std::string family_to_json(const FamilyFile& file);
void write_family(const std::string& path, const FamilyFile& file);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

// Shortest decimal that parses back to the same double.
std::string format_double(double x);

}  // namespace jsr
