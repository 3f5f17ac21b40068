#include "spsum/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spsum/core.hpp"
#include "spsum/errors.hpp"
#include "spsum/factor.hpp"
#include "spsum/gram.hpp"
#include "spsum/inverse.hpp"
#include "spsum/stability.hpp"

namespace spsum::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string out;
  std::optional<double> tol, x, z, y;
  std::string variant;
  std::string method = "meurant";
  std::vector<double> eps;
  double grid_step = 0.1;
  std::vector<double> k;
  std::size_t n = 0;
  std::size_t gamma_max = 0;
  bool verbose = false;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read input file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("malformed JSON in '" + path + "': " + e.what());
  }
}

std::vector<double> array_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw UsageError(std::string("input needs an array '") + key + "'");
  try {
    return j.at(key).get<std::vector<double>>();
  } catch (const json::exception&) {
    throw UsageError(std::string("array '") + key + "' must hold numbers");
  }
}

double number_field(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw UsageError(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

SpSum read_sum(const Options& o) {
  const json j = read_json(o.input);
  const auto a = array_field(j, "a");
  const auto b = array_field(j, "b");
  const auto c = array_field(j, "c");
  if (a.size() != b.size() || a.size() != c.size())
    throw UsageError("arrays a, b and c must have equal length");
  const double x = o.x.value_or(number_field(j, "x", 0.0));
  const double z = o.z.value_or(number_field(j, "z", 1.0));
  const double tol = o.tol.value_or(number_field(j, "tol", kDefaultTol));
  if (!(tol > 0.0)) throw UsageError("tolerance must be positive");
  return SpSum(a, b, c, x, z, tol);
}

// Writes to --out when given, else to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot write output file '" + path + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

json tail(const Sequence& s, std::size_t from = 1) {
  return json(std::vector<double>(s.begin() + static_cast<std::ptrdiff_t>(from), s.end()));
}

int run_invert(const Options& o, std::ostream& out, std::ostream& err) {
  const SpSum s = read_sum(o);
  if (o.variant.empty()) {
    const InversionReport rep = sp_sum_inverse(s);
    if (!rep.has_result()) {
      err << "error " << status_code(rep.status) << " (" << status_name(rep.status)
          << "): " << rep.message << '\n';
      return kNumerical;
    }
    Sink sink(o.out, out);
    write_matrix_csv(sink.stream(), rep.result->unpack().matrix());
    if (rep.status == Status::warning_unreliable) {
      if (o.verbose)
        for (std::size_t i : rep.warnings)
          err << "warning: vdot(" << i << ") close to beta(" << i << ") vdot(" << i - 1
              << "), unreliable results\n";
      return kWarning;
    }
    return kOk;
  }
  const Variant v = o.variant == "t3" ? Variant::t3 : Variant::t4;
  const DenseSymmetric inv = sum_inverse_corollaries(s, v).assemble();
  Sink sink(o.out, out);
  write_matrix_csv(sink.stream(), inv.matrix());
  return kOk;
}

int run_factorize(const Options& o, std::ostream& out) {
  const SpSum s = read_sum(o);
  json j;
  j["x"] = s.x();
  j["z"] = s.z();
  if (o.variant.empty() || o.variant == "t1") {
    const TriFactorizationT1 f = factor_theorem1(s);
    Sequence alpha(f.n() + 1, 0.0);
    for (std::size_t i = 1; i <= f.n(); ++i) alpha[i] = f.t.alpha(i);
    j["variant"] = "t1";
    j["alpha"] = tail(alpha);
    j["beta"] = tail(f.beta);
    j["det"] = det_via_factorization(f);
  } else if (o.variant == "t3") {
    const SumFactorizationT3 f = sum_factor_theorem3(s);
    j["variant"] = "t3";
    j["u"] = tail(f.u);
    j["v"] = tail(f.v);
    j["delta"] = tail(f.delta);
  } else {
    const SumFactorizationT4 f = sum_factor_theorem4(s);
    j["variant"] = "t4";
    j["udot"] = tail(f.udot);
    j["vdot"] = tail(f.vdot);
    j["beta"] = tail(f.beta);
    j["delta"] = tail(f.delta);
  }
  Sink sink(o.out, out);
  sink.stream() << j.dump(2) << '\n';
  return kOk;
}

int run_tridiag_invert(const Options& o, std::ostream& out) {
  const json j = read_json(o.input);
  const auto alpha = array_field(j, "alpha");
  const auto beta = array_field(j, "beta");
  if (alpha.size() < 2 || beta.size() + 1 != alpha.size())
    throw UsageError("need n >= 2 entries in 'alpha' and n - 1 in 'beta'");
  const double tol = o.tol.value_or(number_field(j, "tol", kDefaultTol));
  const SymTridiagonal t(alpha, beta);
  DenseSymmetric inv;
  if (o.method == "meurant") {
    inv = sp_materialize(tridiag_inverse_meurant(t, tol));
  } else {
    inv = tridiag_inverse_corollary(t, o.x.value_or(number_field(j, "x", 1.0)),
                                    o.y.value_or(number_field(j, "y", 1.0)), tol)
              .assemble();
  }
  Sink sink(o.out, out);
  write_matrix_csv(sink.stream(), inv.matrix());
  return kOk;
}

int run_gram(const Options& o, std::ostream& out) {
  std::vector<double> k = o.k;
  if (k.empty() && o.n > 0)
    for (std::size_t i = 1; i <= o.n; ++i) k.push_back(static_cast<double>(i) / o.n);
  if (o.n > 0 && k.size() != o.n) throw UsageError("--n disagrees with the number of --k values");
  if (k.empty() && o.gamma_max == 0) throw UsageError("gram needs --k, --n or --gamma-max");

  Sink sink(o.out, out);
  if (!k.empty()) {
    const RampSystem r(k);
    write_matrix_csv(sink.stream(), gram_inverse(r, o.tol.value_or(kDefaultTol)).matrix());
  }
  if (o.gamma_max > 0) {
    if (o.gamma_max > kGammaCap)
      throw UsageError("--gamma-max exceeds " + std::to_string(kGammaCap));
    for (const ContinuantPolynomial& p : gamma_tables(o.gamma_max)) {
      sink.stream() << "# degree " << p.degree << '\n' << p.to_text();
    }
  }
  return kOk;
}

int thread_cap() {
  if (const char* env = std::getenv("SPSUM_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 0;
}

int run_bench_det(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<double> eps = o.eps.empty() ? log_spaced(1e-6, 0.1, 30) : o.eps;
  const DetFamilyResult r = det_family_experiment(eps);
  Sink sink(o.out, out);
  write_det_family_csv(sink.stream(), r);
  for (const ExperimentFailure& f : r.failures)
    err << "eps " << format_double(f.epsilon) << ' ' << f.method << ": " << f.message << '\n';
  return r.failures.empty() ? kOk : kWarning;
}

int run_bench_spectrum(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<double> eps = o.eps.empty() ? std::vector<double>{1e-1, 1e-4, 1e-7} : o.eps;
  const double steps = 2.0 / o.grid_step;
  if (o.grid_step > 2.0 || std::abs(steps - std::round(steps)) > 1e-9 * steps)
    throw UsageError("--grid-step must divide the interval [-1, 1]");
  std::vector<SpectrumResult> results;
  for (double e : eps) {
    results.push_back(spectrum_experiment(e, o.grid_step, thread_cap()));
    if (o.verbose)
      err << "eps " << format_double(e) << ": " << results.back().matrices << " matrices, "
          << results.back().failures << " failures\n";
  }
  Sink sink(o.out, out);
  write_spectrum_csv(sink.stream(), results);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured inverses of sums of single-pair matrices"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output path (default: stdout)");
    sub->add_option("--tol", o.tol, "Zero-test tolerance")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", o.verbose, "Report warnings on stderr");
  };
  auto sum_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "JSON with keys a, b, c and optional x, z, tol")
        ->required();
    sub->add_option("--x", o.x, "Free parameter x = b(0)");
    sub->add_option("--z", o.z, "Free parameter z = vdot(0)");
  };

  CLI::App* invert = app.add_subcommand("invert", "Inverse of A + C as CSV");
  common(invert);
  sum_input(invert);
  invert->add_option("--variant", o.variant, "Use the t3 or t4 factor path instead")
      ->check(CLI::IsMember({"t3", "t4"}));

  CLI::App* factorize = app.add_subcommand("factorize", "Factor sequences of A + C as JSON");
  common(factorize);
  sum_input(factorize);
  factorize->add_option("--variant", o.variant, "t1 (alpha/beta), t3 (u/v) or t4 (udot/vdot)")
      ->check(CLI::IsMember({"t1", "t3", "t4"}));

  CLI::App* tridiag = app.add_subcommand("tridiag-invert", "Inverse of a tridiagonal matrix");
  common(tridiag);
  tridiag->add_option("input", o.input, "JSON with keys alpha, beta (entries -beta)")->required();
  tridiag->add_option("--method", o.method, "meurant or corollary")
      ->check(CLI::IsMember({"meurant", "corollary"}));
  tridiag->add_option("--x", o.x, "Free parameter b(0) of the corollary path");
  tridiag->add_option("--y", o.y, "Free parameter beta(n) of the corollary path");

  CLI::App* gram = app.add_subcommand("gram", "Ramp-function Gram inverse and continuant tables");
  common(gram);
  gram->add_option("--k", o.k, "Shifts 0 < k1 < ... < kn <= 1")->delimiter(',');
  gram->add_option("--n", o.n, "Number of shifts; alone it means k(i) = i/n");
  gram->add_option("--gamma-max", o.gamma_max, "Emit coefficient tables up to this degree");

  CLI::App* det = app.add_subcommand("bench-det", "Accuracy on the determinant family");
  common(det);
  det->add_option("--eps", o.eps, "Epsilon list")->delimiter(',');

  CLI::App* spectrum = app.add_subcommand("bench-spectrum", "Accuracy on the spectrum family");
  common(spectrum);
  spectrum->add_option("--eps", o.eps, "Epsilon list")->delimiter(',');
  spectrum->add_option("--grid-step", o.grid_step, "Sweep step over [-1, 1]")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*invert) return run_invert(o, out, err);
    if (*factorize) return run_factorize(o, out);
    if (*tridiag) return run_tridiag_invert(o, out);
    if (*gram) return run_gram(o, out);
    if (*det) return run_bench_det(o, out, err);
    if (*spectrum) return run_bench_spectrum(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace spsum::cli
