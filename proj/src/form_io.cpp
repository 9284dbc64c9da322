#include "lagdom/form_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace lagdom {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

void expect(bool ok, const std::string& what) {
  if (!ok) fail(what);
}

std::string term_tag(std::size_t i) {
  return "term " + std::to_string(i + 1);
}

long long parse_integer(const std::string& s, const std::string& what) {
  long long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) fail(what + " '" + s + "'");
  return v;
}

double coefficient_part(const Json& v, const char* field,
                        std::size_t term_idx) {
  if (v.is_string()) {
    try {
      return parse_decimal(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("form_file_bad_coefficient " + term_tag(term_idx) + " field " +
           field + ": " + e.what());
    }
  }
  if (v.is_number()) return v.get<double>();
  fail("form_file_bad_coefficient " + term_tag(term_idx) + " field " + field +
       " must be a decimal string or number");
}

void reject_unknown_keys(const Json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) fail("form_file_unknown_field '" + it.key() + "' in " + where);
  }
}

}  // namespace

std::string decimal_string(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  expect(ec == std::errc(), "decimal_string_failed");
  return std::string(buf, p);
}

double parse_decimal(const std::string& text) {
  double v = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || !std::isfinite(v))
    fail("bad_decimal '" + text + "'");
  return v;
}

double parse_rational(const std::string& text) {
  auto slash = text.find('/');
  long long p = 0;
  long long q = 1;
  if (slash == std::string::npos) {
    p = parse_integer(text, "bad_rational");
  } else {
    p = parse_integer(text.substr(0, slash), "bad_rational");
    q = parse_integer(text.substr(slash + 1), "bad_rational");
  }
  expect(p > 0 && q > 0, "bad_rational '" + text + "' must be positive");
  return static_cast<double>(p) / static_cast<double>(q);
}

RationalTorus FormFile::torus() const {
  RationalTorus t;
  t.n = n;
  t.divisors =
      has_torus ? divisors : std::vector<long long>(static_cast<size_t>(n), 1);
  t.omega_scale = has_torus ? parse_rational(omega_scale) : 1.0;
  validate_torus(t);
  return t;
}

FormFile wrap_form(const ExteriorForm& form, const std::string& label) {
  expect(form.degree == form.n, "form_file_degree_mismatch: degree " +
                                    std::to_string(form.degree) +
                                    " on half-dimension " +
                                    std::to_string(form.n));
  FormFile f;
  f.n = form.n;
  f.label = label;
  f.form = form;
  return f;
}

FormFile parse_form_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("form_file_syntax: ") + e.what());
  }
  expect(j.is_object(), "form_file_syntax: top level must be an object");
  reject_unknown_keys(j, {"n", "label", "terms", "torus"}, "top level");
  expect(j.contains("n") && j["n"].is_number_integer(),
         "form_file_bad_n: integer field 'n' required");
  const int n = j["n"].get<int>();
  expect(n >= 1 && n <= 12, "form_file_bad_n: n out of range 1..12");

  FormFile out;
  out.n = n;
  if (j.contains("label")) {
    expect(j["label"].is_string(), "form_file_bad_label");
    out.label = j["label"].get<std::string>();
  }
  out.form = ExteriorForm(n, n);

  expect(j.contains("terms") && j["terms"].is_array(),
         "form_file_bad_terms: array field 'terms' required");
  std::size_t idx = 0;
  for (const auto& t : j["terms"]) {
    expect(t.is_object(), "form_file_bad_term " + term_tag(idx));
    reject_unknown_keys(t, {"indices", "re", "im"}, term_tag(idx));
    expect(t.contains("indices") && t["indices"].is_array() &&
               t.contains("re") && t.contains("im"),
           "form_file_bad_term " + term_tag(idx) +
               " needs indices, re, im");
    Mask mask = 0;
    int prev = 0;
    std::size_t count = 0;
    for (const auto& iv : t["indices"]) {
      expect(iv.is_number_integer(),
             "form_file_bad_index " + term_tag(idx) + ": not an integer");
      const int i = iv.get<int>();
      expect(i >= 1 && i <= 2 * n, "form_file_bad_index " + term_tag(idx) +
                                       ": index " + std::to_string(i) +
                                       " outside 1.." + std::to_string(2 * n));
      expect(i > prev, "form_file_unsorted_indices " + term_tag(idx) +
                           ": indices must be strictly increasing");
      prev = i;
      mask |= Mask(1) << (i - 1);
      ++count;
    }
    expect(count == static_cast<std::size_t>(n),
           "form_file_degree_mismatch " + term_tag(idx) + ": " +
               std::to_string(count) + " indices, expected " +
               std::to_string(n));
    expect(out.form.coeff.find(mask) == out.form.coeff.end(),
           "form_file_duplicate_term " + term_tag(idx));
    out.form.set(mask, Complex(coefficient_part(t["re"], "re", idx),
                               coefficient_part(t["im"], "im", idx)));
    ++idx;
  }

  if (j.contains("torus")) {
    const auto& tj = j["torus"];
    expect(tj.is_object(), "form_file_bad_torus");
    reject_unknown_keys(tj, {"divisors", "omega_scale"}, "torus");
    out.has_torus = true;
    expect(tj.contains("divisors") && tj["divisors"].is_array(),
           "form_file_bad_torus: array field 'divisors' required");
    for (const auto& d : tj["divisors"]) {
      expect(d.is_number_integer(), "form_file_bad_torus: divisor not integer");
      out.divisors.push_back(d.get<long long>());
    }
    if (tj.contains("omega_scale")) {
      expect(tj["omega_scale"].is_string(),
             "form_file_bad_torus: omega_scale must be a rational string");
      out.omega_scale = tj["omega_scale"].get<std::string>();
    }
    out.torus();  // validates divisors chain and scale
  }
  return out;
}

FormFile parse_form_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("form_file_unreadable '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_form_text(buf.str());
  } catch (const std::invalid_argument& e) {
    fail(std::string(e.what()) + " [" + path + "]");
  }
}

std::string write_form_text(const FormFile& f) {
  expect(f.form.n == f.n && f.form.degree == f.n,
         "form_file_degree_mismatch: form does not match declared n");
  Json j;
  j["n"] = f.n;
  if (!f.label.empty()) j["label"] = f.label;
  Json terms = Json::array();
  for (const auto& [mask, c] : f.form.coeff) {
    Json t;
    t["indices"] = mask_indices(mask);
    t["re"] = decimal_string(c.real());
    t["im"] = decimal_string(c.imag());
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  if (f.has_torus) {
    Json tj;
    tj["divisors"] = f.divisors;
    tj["omega_scale"] = f.omega_scale;
    j["torus"] = std::move(tj);
  }
  return j.dump(2) + "\n";
}

void write_form_file(const std::string& path, const FormFile& f) {
  const std::string text = write_form_text(f);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail("form_file_unwritable '" + path + "'");
  out << text;
  expect(static_cast<bool>(out), "form_file_unwritable '" + path + "'");
}

}  // namespace lagdom
