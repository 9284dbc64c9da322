#pragma once

#include <string>
#include <vector>

#include "lagdom/exterior.hpp"
#include "lagdom/torus_lattice.hpp"

namespace lagdom {

// One form file: a middle-degree form on R^{2n} plus optional torus metadata.
// Coefficients travel as shortest round-trip decimal strings, so
// parse(write(f)) reproduces every coefficient bit-exactly and the writer
// output is canonical byte-for-byte.
struct FormFile {
  int n = 1;
  std::string label;                // empty = absent
  ExteriorForm form;                // degree n on R^{2n}
  bool has_torus = false;
  std::vector<long long> divisors;  // chain d_1 = 1 | d_2 | ... | d_n
  std::string omega_scale = "1";    // positive rational "p" or "p/q"

  // Torus described by the metadata; the standard one when has_torus is
  // false. Validates divisors and scale.
  RationalTorus torus() const;
};

FormFile wrap_form(const ExteriorForm& form, const std::string& label = "");

// Structured text (JSON). Unknown fields are rejected. Syntax errors carry
// the line/column from the reader; semantic errors name the offending term.
FormFile parse_form_text(const std::string& text);
FormFile parse_form_file(const std::string& path);
std::string write_form_text(const FormFile& f);
void write_form_file(const std::string& path, const FormFile& f);

// Shortest decimal string that parses back to exactly x, and its strict
// inverse (full match, finite values only).
std::string decimal_string(double x);
double parse_decimal(const std::string& text);

// Positive rational "p" or "p/q".
double parse_rational(const std::string& text);

}  // namespace lagdom
