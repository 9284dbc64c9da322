// Command-line front end. Reports are deterministic: fixed field order, 12
// significant digits, identical argv + seed reproduce stdout and CSV bytes.
// Exit codes: 0 success, 1 domain failure (message carries a machine-readable
// tag), 2 usage or input-format error.
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "lagdom/exterior.hpp"
#include "lagdom/form_io.hpp"
#include "lagdom/moduli_flow.hpp"
#include "lagdom/torus_lattice.hpp"
#include "lagdom/u_space.hpp"

namespace {

using namespace lagdom;

std::string g12(double x) {
  if (x == 0) x = 0;  // print +0 for -0
  char b[64];
  std::snprintf(b, sizeof b, "%.12g", x);
  return b;
}

std::string cpx(Complex z) {
  return "(" + g12(z.real()) + ", " + g12(z.imag()) + ")";
}

std::string plucker_str(const std::vector<long long>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::invalid_argument("output_unwritable '" + path + "'");
}

void cmd_check(const std::string& path, double tol) {
  const FormFile f = parse_form_file(path);
  const MembershipReport r = is_member(f.form, tol);
  std::string head = to_string(r.verdict);
  if (r.verdict == Verdict::member)
    head += std::string(", U^") + (r.sign > 0 ? "+" : "-") + ", " +
            to_string(r.geometricity);
  std::printf("%s\n", head.c_str());
  std::printf("margin = %s\n", g12(r.margin).c_str());
  std::printf("threshold = %s\n", g12(r.threshold).c_str());
  std::printf("certificate = %s\n", to_string(r.certificate));
  if (r.verdict == Verdict::member)
    std::printf("geometricity_residual = %s\n",
                g12(r.geometricity_residual).c_str());
}

void cmd_invariants(const std::string& path) {
  const FormFile f = parse_form_file(path);
  const ExteriorForm& a = f.form;
  if (a.n == 1) {
    const Complex a1 = a.get(0b01);
    const Complex a2 = a.get(0b10);
    std::printf("value_matrix = [%s %s; %s %s]\n", g12(a1.real()).c_str(),
                g12(a2.real()).c_str(), g12(a1.imag()).c_str(),
                g12(a2.imag()).c_str());
    std::printf("det = %s\n",
                g12(a1.real() * a2.imag() - a2.real() * a1.imag()).c_str());
  } else if (a.n == 2) {
    const SMatrixData s = s_matrix(a);
    std::printf("S = [%s %s; %s %s]\n", g12(s.s(0, 0)).c_str(),
                g12(s.s(0, 1)).c_str(), g12(s.s(1, 0)).c_str(),
                g12(s.s(1, 1)).c_str());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(s.s);
    std::printf("eigenvalues = (%s, %s)\n", g12(es.eigenvalues()(0)).c_str(),
                g12(es.eigenvalues()(1)).c_str());
    std::printf("r = %s\n", g12(s.r).c_str());
    std::printf("c_abs = %s\n", g12(s.c_abs).c_str());
  } else if (a.n == 3) {
    const QInvariants qre = q_invariants(real_part(a));
    const QInvariants qim = q_invariants(imag_part(a));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ere(qre.q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eim(qim.q);
    std::printf("d_re = %s\n", g12(qre.d).c_str());
    std::printf("d_im = %s\n", g12(qim.d).c_str());
    std::printf("q_re_min_eig = %s\n",
                g12(ere.eigenvalues().minCoeff()).c_str());
    std::printf("q_im_min_eig = %s\n",
                g12(eim.eigenvalues().minCoeff()).c_str());
    if (ere.eigenvalues().minCoeff() > 0)
      std::printf("f = %s\n", g12(f_invariant(a)).c_str());
    else
      std::printf("f = undefined (q_re not positive definite)\n");
  } else {
    throw std::invalid_argument("invariants_unsupported_dimension n=" +
                                std::to_string(a.n));
  }
}

void cmd_normal_form(const std::string& path) {
  const FormFile f = parse_form_file(path);
  const NormalFormU3 nf = normal_form_u3(f.form);
  std::printf("c1 = %s\n", cpx(nf.c1).c_str());
  std::printf("c2 = %s\n", cpx(nf.c2).c_str());
  std::printf("lambda = (%s, %s, %s)\n", g12(nf.lambda(0)).c_str(),
              g12(nf.lambda(1)).c_str(), g12(nf.lambda(2)).c_str());
  std::printf("residual = %s\n", g12(nf.residual).c_str());
}

void cmd_reduce(const std::string& path, int index) {
  const FormFile f = parse_form_file(path);
  const int n = f.n;
  if (n < 2) throw std::invalid_argument("reduce_needs_half_dimension_2_plus");
  if (index < 1 || index > n)
    throw std::invalid_argument("reduce_index_out_of_range 1.." +
                                std::to_string(n));
  // Coisotropic hyperplane dropping dy_index; its omega-complement is spanned
  // by dx_index.
  const int dim = 2 * n;
  Eigen::MatrixXd w(dim, dim - 1);
  int col = 0;
  for (int i = 1; i <= dim; ++i) {
    if (i == n + index) continue;
    w.col(col) = Eigen::VectorXd::Zero(dim);
    w(i - 1, col) = 1.0;
    ++col;
  }
  const ExteriorForm red = reduce(f.form, w, basis_vector(n, index));
  std::fputs(
      write_form_text(wrap_form(red, "reduced(" + std::to_string(index) + ")"))
          .c_str(),
      stdout);
}

void cmd_product(const std::string& path1, const std::string& path2) {
  const FormFile f1 = parse_form_file(path1);
  const FormFile f2 = parse_form_file(path2);
  const ExteriorForm p = product_form(f1.form, f2.form);
  std::fputs(write_form_text(wrap_form(p)).c_str(), stdout);
}

void cmd_systole(const std::string& path, long long height,
                 std::uint64_t seed) {
  const FormFile f = parse_form_file(path);
  const RationalTorus t = f.torus();
  if (height > 0) {
    const auto classes = enumerate_lagrangian_classes(t, height);
    if (classes.empty())
      throw std::domain_error("systole_no_classes_at_height");
    double best = 0;
    const LatticeLagrangianClass* witness = nullptr;
    for (const auto& c : classes) {
      const double v = std::abs(central_charge(f.form, c));
      if (!witness || v < best) {
        best = v;
        witness = &c;
      }
    }
    std::printf("sys = %s (uncertified, scan height %lld), witness %s\n",
                g12(best).c_str(), height,
                plucker_str(witness->plucker).c_str());
    std::printf("classes = %zu\n", classes.size());
    return;
  }
  const SystoleResult s = systole(f.form, t, seed);
  std::printf("sys = %s (%s), witness %s\n", g12(s.sys).c_str(),
              s.certified ? "certified" : "uncertified",
              plucker_str(s.witness.plucker).c_str());
  std::printf("lgr_min = %s\n", g12(s.lgr_min).c_str());
  std::printf("radius = %s\n", g12(s.radius).c_str());
  std::printf("height = %lld\n", s.height);
}

void cmd_volume(const std::string& path) {
  const FormFile f = parse_form_file(path);
  std::printf("vol = %s\n", g12(torus_volume(f.form, f.torus())).c_str());
}

void cmd_experiment(int n, int samples, std::uint64_t seed,
                    const std::string& out) {
  const SystolicExperiment e = systolic_experiment(n, samples, seed);
  write_text(out, systolic_csv(e));
  std::printf("rows = %zu\n", e.rows.size());
  std::printf("max_ratio_geometric = %s\n", g12(e.max_ratio_geometric).c_str());
  std::printf("max_ratio_ag = %s\n", g12(e.max_ratio_ag).c_str());
  std::printf("csv = %s\n", out.c_str());
}

void cmd_shift_check(const std::string& path) {
  const FormFile f = parse_form_file(path);
  const double fv = f_invariant(f.form);
  const double delta = shift_check(f.form);
  std::printf("f = %s\n", g12(fv).c_str());
  std::printf("delta_f = %s\n", g12(delta).c_str());
  std::printf("shift_constant = %s\n", g12(shift_constant()).c_str());
  std::printf("abs_error = %s\n",
              g12(std::abs(delta - shift_constant())).c_str());
}

void cmd_sample(int n, int count, std::uint64_t seed,
                const std::string& strategy, const std::string& out) {
  SampleStrategy st;
  if (strategy == "geometric") st = SampleStrategy::geometric;
  else if (strategy == "ag") st = SampleStrategy::ag;
  else if (strategy == "perturbed") st = SampleStrategy::perturbed;
  else
    throw std::invalid_argument(
        "sample_unknown_strategy '" + strategy +
        "' (expected geometric, ag or perturbed)");
  const SampleBatch b = sample_members(n, count, seed, st);
  std::printf("attempts = %d\n", b.attempts);
  std::printf("acceptance_rate = %s\n", g12(b.acceptance_rate).c_str());
  const std::string csv = flow_csv(b);
  if (out.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_text(out, csv);
    std::printf("csv = %s\n", out.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toolkit for complex middle-degree forms nonvanishing on "
               "Lagrangian subspaces"};
  app.require_subcommand(1);

  std::string file;
  std::string file2;
  std::string out;
  std::string strategy;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  long long height = 0;
  int index = 1;
  int nval = 1;
  int samples = 1;
  int count = 1;

  auto* c_check = app.add_subcommand(
      "check", "Membership report: verdict, sign, margin, geometricity");
  c_check->add_option("file", file, "form file")->required();
  c_check->add_option("--tol", tol, "numeric acceptance tolerance");
  c_check->callback([&] { cmd_check(file, tol); });

  auto* c_inv = app.add_subcommand(
      "invariants", "Dimension-specific invariants: value matrix (n=1), "
                    "S matrix (n=2), q determinants and f (n=3)");
  c_inv->add_option("file", file, "form file")->required();
  c_inv->callback([&] { cmd_invariants(file); });

  auto* c_nf = app.add_subcommand(
      "normal-form", "Canonical parameters (c1, c2, lambda) on R^6");
  c_nf->add_option("file", file, "form file")->required();
  c_nf->callback([&] { cmd_normal_form(file); });

  auto* c_red = app.add_subcommand(
      "reduce", "Symplectic reduction along the coisotropic hyperplane "
                "dropping dy_k; prints the reduced form file");
  c_red->add_option("file", file, "form file")->required();
  c_red->add_option("--index", index, "coordinate k to reduce along")
      ->default_val(1);
  c_red->callback([&] { cmd_reduce(file, index); });

  auto* c_prod = app.add_subcommand(
      "product", "Wedge of pullbacks to the direct sum; prints the product "
                 "form file");
  c_prod->add_option("file1", file, "first factor")->required();
  c_prod->add_option("file2", file2, "second factor")->required();
  c_prod->callback([&] { cmd_product(file, file2); });

  auto* c_sys = app.add_subcommand(
      "systole", "Minimal |Z| over lattice Lagrangian classes with "
                 "certification report");
  c_sys->add_option("file", file, "form file (torus metadata honored)")
      ->required();
  c_sys->add_option("--height", height,
                    "bounded scan at this entry height instead of the "
                    "certified search");
  c_sys->add_option("--seed", seed, "seed for the Grassmannian minimization")
      ->required();
  c_sys->callback([&] { cmd_systole(file, height, seed); });

  auto* c_vol = app.add_subcommand("volume",
                                   "Volume of the torus under the form");
  c_vol->add_option("file", file, "form file (torus metadata honored)")
      ->required();
  c_vol->callback([&] { cmd_volume(file); });

  auto* c_exp = app.add_subcommand(
      "systolic-experiment",
      "Paired geometric/almost-geometric systolic ratio experiment; CSV out");
  c_exp->add_option("--n", nval, "half-dimension")->required();
  c_exp->add_option("--samples", samples, "sample pairs")->required();
  c_exp->add_option("--seed", seed, "master seed")->required();
  c_exp->add_option("--out", out, "CSV output path")->required();
  c_exp->callback([&] { cmd_experiment(nval, samples, seed, out); });

  auto* c_shift = app.add_subcommand(
      "shift-check", "f shift under the doubling action against 12 log 2");
  c_shift->add_option("file", file, "form file")->required();
  c_shift->callback([&] { cmd_shift_check(file); });

  auto* c_sample = app.add_subcommand(
      "sample", "Random members of the unit-volume slice; CSV report");
  c_sample->add_option("--n", nval, "half-dimension (3)")->required();
  c_sample->add_option("--count", count, "accepted samples")->required();
  c_sample->add_option("--seed", seed, "master seed")->required();
  c_sample->add_option("--strategy", strategy,
                       "geometric, ag or perturbed")->required();
  c_sample->add_option("--out", out, "CSV output path (stdout when absent)");
  c_sample->callback([&] { cmd_sample(nval, count, seed, strategy, out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
