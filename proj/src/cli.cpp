#include "hamstab/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "hamstab/brake.hpp"
#include "hamstab/errors.hpp"
#include "hamstab/hill.hpp"
#include "hamstab/oracle.hpp"
#include "hamstab/systems.hpp"
#include "hamstab/trace.hpp"

namespace hamstab::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Temp-file-plus-rename so readers never observe a partial file.
void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file: " + tmp);
    out << content;
    if (!out.good()) throw ConfigError("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw ConfigError("cannot rename " + tmp + " to " + path);
  }
}

struct Options {
  std::string config_path;
  std::string system = "counterexample33";
  std::string system_file;
  std::string space = "plus";
  double nu = 0.3;
  double beta = 0.0;
  double delta = 0.0;
  double e = 0.0;
  std::vector<double> theta;
  double tol = 1e-11;
  double alpha = 1.0;
  std::vector<double> alphas;
  int grid = 200;
  int truncation = 256;
  std::vector<int> truncation_sequence;
  std::vector<double> window = {-10.0, 10.0};
  double tail = 1e-6;
  std::string s_condition = "one";
  std::string kind = "lagrange";
  std::string out_path;
  std::string format = "csv";
};

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

/// Applies the JSON job file to every option the command line left at its
/// default. `explicit_set` reports flags given on the command line.
void apply_config(Options& opt, const std::function<bool(const std::string&)>& explicit_set) {
  std::ifstream in(opt.config_path);
  if (!in) throw ConfigError("cannot open config file: " + opt.config_path);
  json job;
  try {
    in >> job;
  } catch (const json::exception& err) {
    throw ConfigError(std::string("config is not valid JSON: ") + err.what());
  }
  reject_unknown(job, {"command", "system", "boundary", "numerics", "output"}, "job config");

  auto take_num = [&](const json& src, const char* key, double& dst, const char* flag) {
    if (src.contains(key) && !explicit_set(flag)) dst = src.at(key).get<double>();
  };

  if (job.contains("system")) {
    const json& sys = job.at("system");
    reject_unknown(sys, {"name", "file", "nu", "beta", "delta", "e", "space"}, "system");
    if (sys.contains("name") && !explicit_set("--system")) {
      opt.system = sys.at("name").get<std::string>();
    }
    if (sys.contains("file") && !explicit_set("--system-file")) {
      opt.system_file = sys.at("file").get<std::string>();
    }
    if (sys.contains("space") && !explicit_set("--space")) {
      opt.space = sys.at("space").get<std::string>();
    }
    take_num(sys, "nu", opt.nu, "--nu");
    take_num(sys, "beta", opt.beta, "--beta");
    take_num(sys, "delta", opt.delta, "--delta");
    take_num(sys, "e", opt.e, "--e");
  }
  if (job.contains("boundary")) {
    const json& bnd = job.at("boundary");
    reject_unknown(bnd, {"theta"}, "boundary");
    if (bnd.contains("theta") && !explicit_set("--theta")) {
      opt.theta = bnd.at("theta").get<std::vector<double>>();
    }
  }
  if (job.contains("numerics")) {
    const json& num = job.at("numerics");
    reject_unknown(num,
                   {"tol", "alpha", "alphas", "grid", "truncation", "window", "tail", "s"},
                   "numerics");
    take_num(num, "tol", opt.tol, "--tol");
    take_num(num, "alpha", opt.alpha, "--alpha");
    take_num(num, "tail", opt.tail, "--tail");
    if (num.contains("alphas") && !explicit_set("--alphas")) {
      opt.alphas = num.at("alphas").get<std::vector<double>>();
    }
    if (num.contains("grid") && !explicit_set("--grid")) opt.grid = num.at("grid").get<int>();
    if (num.contains("truncation") && !explicit_set("--N")) {
      opt.truncation = num.at("truncation").get<int>();
    }
    if (num.contains("window") && !explicit_set("--window")) {
      opt.window = num.at("window").get<std::vector<double>>();
    }
    if (num.contains("s") && !explicit_set("--s")) {
      opt.s_condition = num.at("s").get<std::string>();
    }
  }
  if (job.contains("output")) {
    const json& out = job.at("output");
    reject_unknown(out, {"path", "format"}, "output");
    if (out.contains("path") && !explicit_set("--out")) {
      opt.out_path = out.at("path").get<std::string>();
    }
    if (out.contains("format") && !explicit_set("--format")) {
      opt.format = out.at("format").get<std::string>();
    }
  }
}

void validate_numerics(const Options& opt) {
  if (opt.tol <= 0.0) throw ConfigError("tol must be positive");
  if (opt.grid < 2) throw ConfigError("grid must be >= 2");
  if (opt.truncation < 1) throw ConfigError("truncation must be >= 1");
  if (opt.tail <= 0.0) throw ConfigError("tail must be positive");
  if (opt.format != "csv" && opt.format != "json") {
    throw ConfigError("format must be csv or json");
  }
  if (opt.window.size() != 2 || !(opt.window[0] < opt.window[1])) {
    throw ConfigError("window must be two increasing numbers");
  }
}

BoundaryProblem resolve_system(const Options& opt) {
  if (!opt.system_file.empty()) {
    auto [b, d] = load_sampled_coefficients(opt.system_file);
    if (opt.theta.empty()) {
      throw ConfigError("sampled systems need a boundary: pass --theta");
    }
    Vec theta(static_cast<Eigen::Index>(opt.theta.size()));
    for (std::size_t i = 0; i < opt.theta.size(); ++i) {
      theta(static_cast<Eigen::Index>(i)) = opt.theta[i];
    }
    if (theta.size() != b.n()) {
      throw ConfigError("theta length must equal n of the sampled system");
    }
    return {"sampled:" + opt.system_file, b, d, boundary_from_angles(theta), std::nullopt};
  }
  BoundaryProblem prob = make_builtin(opt.system, opt.nu, opt.beta, opt.delta, opt.e,
                                      opt.space != "minus");
  if (!opt.theta.empty()) {
    Vec theta(static_cast<Eigen::Index>(opt.theta.size()));
    for (std::size_t i = 0; i < opt.theta.size(); ++i) {
      theta(static_cast<Eigen::Index>(i)) = opt.theta[i];
    }
    if (theta.size() != prob.b.n()) {
      throw ConfigError("theta length must equal n of the system");
    }
    prob.boundary = boundary_from_angles(theta);
  }
  return prob;
}

void emit(const Options& opt, const std::string& csv, const json& as_json) {
  if (opt.out_path.empty()) return;
  if (opt.format == "csv") {
    atomic_write(opt.out_path, csv);
  } else {
    atomic_write(opt.out_path, as_json.dump(2) + "\n");
  }
}

int cmd_hill(const Options& opt) {
  const BoundaryProblem prob = resolve_system(opt);
  const double value = hill_ratio(prob.b, prob.d, prob.boundary, opt.alpha, opt.tol);
  std::cout << fmt(value) << "\n";
  emit(opt, "alpha,value\n" + fmt(opt.alpha) + "," + fmt(value) + "\n",
       json{{"system", prob.name}, {"alpha", opt.alpha}, {"value", value}});
  return 0;
}

int cmd_trace(const Options& opt) {
  const BoundaryProblem prob = resolve_system(opt);
  TraceReport rep = lagrangian_trace_report(prob.b, prob.d, prob.boundary, opt.tol);
  for (double a : opt.alphas) {
    rep.f_samples.emplace_back(a, hill_ratio(prob.b, prob.d, prob.boundary, a, opt.tol));
  }
  std::cout << "tr1 " << fmt(rep.tr1) << "\n";
  std::cout << "tr2 " << fmt(rep.tr2) << "\n";
  for (const auto& [a, f] : rep.f_samples) {
    std::cout << "f(" << fmt(a) << ") " << fmt(f) << "\n";
  }
  std::string csv = "quantity,value\ntr1," + fmt(rep.tr1) + "\ntr2," + fmt(rep.tr2) + "\n";
  json js{{"system", prob.name}, {"tr1", rep.tr1}, {"tr2", rep.tr2}};
  for (const auto& [a, f] : rep.f_samples) {
    csv += "f(" + fmt(a) + ")," + fmt(f) + "\n";
    js["f_samples"].push_back({{"alpha", a}, {"value", f}});
  }
  emit(opt, csv, js);
  return 0;
}

int cmd_eigs(const Options& opt) {
  const BoundaryProblem prob = resolve_system(opt);
  const EigenvalueList list = shoot_eigenvalues(prob.b, prob.d, prob.boundary, opt.window[0],
                                                opt.window[1], opt.tol);
  std::string csv = "lambda,multiplicity,suspected_even_order\n";
  json js{{"system", prob.name}, {"window", {list.window_lo, list.window_hi}}};
  js["eigenvalues"] = json::array();
  for (std::size_t i = 0; i < list.size(); ++i) {
    std::cout << fmt(list.values[i]);
    if (list.multiplicities[i] > 1) std::cout << " multiplicity " << list.multiplicities[i];
    if (list.suspected_even_order[i]) std::cout << " suspected-even-order";
    std::cout << "\n";
    csv += fmt(list.values[i]) + "," + std::to_string(list.multiplicities[i]) + "," +
           (list.suspected_even_order[i] ? "1" : "0") + "\n";
    js["eigenvalues"].push_back({{"lambda", list.values[i]},
                                 {"multiplicity", list.multiplicities[i]},
                                 {"suspected_even_order", bool(list.suspected_even_order[i])}});
  }
  emit(opt, csv, js);
  return 0;
}

int cmd_galerkin(const Options& opt) {
  const BoundaryProblem prob = resolve_system(opt);
  std::vector<int> ns = opt.truncation_sequence;
  if (ns.empty()) ns.push_back(opt.truncation);
  std::string csv = "N,value\n";
  json js{{"system", prob.name}};
  js["values"] = json::array();
  for (int nn : ns) {
    const double v = galerkin_determinant(prob.b, prob.d, prob.boundary, nn);
    std::cout << (ns.size() > 1 ? "N=" + std::to_string(nn) + " " : "") << fmt(v) << "\n";
    csv += std::to_string(nn) + "," + fmt(v) + "\n";
    js["values"].push_back({{"N", nn}, {"value", v}});
  }
  emit(opt, csv, js);
  return 0;
}

int cmd_parity(const Options& opt) {
  const BoundaryProblem prob = resolve_system(opt);
  const int sign = determinant_sign(prob.b, prob.d, prob.boundary, opt.tol);
  const MorseIndexResult idx =
      relative_morse_index_detailed(prob.b, prob.d, prob.boundary, opt.grid, opt.tol);
  std::cout << "sign " << (sign > 0 ? "+1" : "-1") << "\n";
  std::cout << "relative_morse_index " << idx.index << "\n";
  std::cout << "parity_consistent " << (idx.parity_consistent ? "yes" : "no") << "\n";
  emit(opt,
       "quantity,value\nsign," + std::to_string(sign) + "\nrelative_morse_index," +
           std::to_string(idx.index) + "\n",
       json{{"system", prob.name},
            {"sign", sign},
            {"relative_morse_index", idx.index},
            {"parity_consistent", idx.parity_consistent}});
  return 0;
}

int cmd_decompose(const Options& opt) {
  if (opt.system != "lagrange" && opt.system != "euler") {
    throw ConfigError("decompose needs a brake-symmetric builtin (lagrange or euler)");
  }
  const EREConfig cfg{opt.system == "lagrange" ? EREFamily::lagrange : EREFamily::euler,
                      opt.system == "lagrange" ? opt.beta : opt.delta, opt.e};
  const CoefficientPath b0 = meyer_schmidt_system({cfg.family, cfg.param, 0.0});
  const CoefficientPath be = meyer_schmidt_system(cfg);
  const CoefficientPath d = be.plus(b0, -1.0);
  const double s_sign = opt.s_condition == "minus-one" ? -1.0 : 1.0;
  if (opt.s_condition != "one" && opt.s_condition != "minus-one") {
    throw ConfigError("--s must be one or minus-one");
  }
  const BrakeSymmetryData sym = ere_brake_symmetry(s_sign * Mat::Identity(4, 4));
  const DecompositionReport rep = decomposition_check(b0, d, sym, opt.tol);

  std::cout << "periodic_ratio " << fmt(rep.periodic_ratio) << "\n";
  std::cout << "half_ratio_plus " << fmt(rep.half_ratio_plus) << "\n";
  std::cout << "half_ratio_minus " << fmt(rep.half_ratio_minus) << "\n";
  std::cout << "product_residual " << fmt(rep.product_residual) << "\n";
  std::cout << "block_residual_0 " << fmt(rep.block_residual[0]) << "\n";
  std::cout << "block_residual_1 " << fmt(rep.block_residual[1]) << "\n";

  std::string csv = "quantity,value\n";
  csv += "periodic_ratio," + fmt(rep.periodic_ratio) + "\n";
  csv += "half_ratio_plus," + fmt(rep.half_ratio_plus) + "\n";
  csv += "half_ratio_minus," + fmt(rep.half_ratio_minus) + "\n";
  csv += "product_residual," + fmt(rep.product_residual) + "\n";
  csv += "block_residual_0," + fmt(rep.block_residual[0]) + "\n";
  csv += "block_residual_1," + fmt(rep.block_residual[1]) + "\n";
  emit(opt, csv,
       json{{"periodic_ratio", rep.periodic_ratio},
            {"half_ratio_plus", rep.half_ratio_plus},
            {"half_ratio_minus", rep.half_ratio_minus},
            {"product_residual", rep.product_residual},
            {"block_residual", {rep.block_residual[0], rep.block_residual[1]}}});
  return 0;
}

int cmd_scan(const Options& opt) {
  const EREFamily family =
      opt.kind == "euler" ? EREFamily::euler : EREFamily::lagrange;
  if (opt.kind != "euler" && opt.kind != "lagrange") {
    throw ConfigError("--kind must be lagrange or euler");
  }
  const RegionScan scan = region_scan(family, opt.grid, std::min(opt.tol, 1e-10));

  std::string csv;
  json js{{"kind", opt.kind}};
  js["rows"] = json::array();
  if (family == EREFamily::lagrange) {
    csv = "beta,curve_minus,curve_plus,curve\n";
    for (const auto& r : scan.rows) {
      csv += fmt(r.param) + "," + fmt(r.curve_minus) + "," + fmt(r.curve_plus) + "," +
             fmt(r.curve) + "\n";
      js["rows"].push_back({{"beta", r.param},
                            {"curve_minus", r.curve_minus},
                            {"curve_plus", r.curve_plus},
                            {"curve", r.curve},
                            {"tag", r.tag}});
    }
  } else {
    csv = "delta,curve_minus,curve_plus,curve_g2_minus,curve_g2_plus,curve\n";
    for (const auto& r : scan.rows) {
      csv += fmt(r.param) + "," + fmt(r.curve_minus) + "," + fmt(r.curve_plus) + "," +
             fmt(r.curve_g2_minus) + "," + fmt(r.curve_g2_plus) + "," + fmt(r.curve) + "\n";
      js["rows"].push_back({{"delta", r.param},
                            {"curve_minus", r.curve_minus},
                            {"curve_plus", r.curve_plus},
                            {"curve_g2_minus", r.curve_g2_minus},
                            {"curve_g2_plus", r.curve_g2_plus},
                            {"curve", r.curve},
                            {"tag", r.tag}});
    }
  }
  if (opt.out_path.empty()) {
    std::cout << csv;
  } else {
    emit(opt, csv, js);
    std::cout << "wrote " << scan.rows.size() << " rows to " << opt.out_path << "\n";
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  Options opt;
  CLI::App app{"Hill determinants and Krein traces for linear Hamiltonian boundary problems"};
  app.require_subcommand(1);

  std::string command;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON job file; flags override its values");
    sub->add_option("--system", opt.system,
                    "builtin system (counterexample33, dirichlet-free, constant-nu, lagrange, "
                    "euler)");
    sub->add_option("--system-file", opt.system_file, "sampled coefficient table");
    sub->add_option("--space", opt.space, "half-period space for ERE systems (plus|minus)");
    sub->add_option("--nu", opt.nu, "constant-nu parameter");
    sub->add_option("--beta", opt.beta, "equilateral mass parameter in [0,9]");
    sub->add_option("--delta", opt.delta, "collinear mass parameter");
    sub->add_option("--e", opt.e, "eccentricity in [0,1)");
    sub->add_option("--theta", opt.theta, "boundary angles (normal form)");
    sub->add_option("--tol", opt.tol, "integration tolerance");
    sub->add_option("--out", opt.out_path, "output file (written atomically)");
    sub->add_option("--format", opt.format, "output format: csv|json");
    sub->parse_complete_callback([&, sub]() {
      command = sub->get_name();
      if (!opt.config_path.empty()) {
        apply_config(opt, [sub](const std::string& flag) {
          const CLI::Option* o = sub->get_option_no_throw(flag);
          return o != nullptr && o->count() > 0;
        });
      }
      validate_numerics(opt);
    });
    return sub;
  };

  CLI::App* hill = add_common(app.add_subcommand("hill", "Hill determinant ratio f(alpha)"));
  hill->add_option("--alpha", opt.alpha, "perturbation strength");

  CLI::App* trace = add_common(app.add_subcommand("trace", "conditional traces tr F, tr F^2"));
  trace->add_option("--alphas", opt.alphas, "additional f(alpha) samples");

  CLI::App* eigs = add_common(app.add_subcommand("eigs", "boundary-problem eigenvalues"));
  eigs->add_option("--window", opt.window, "search window lo hi")->expected(2);

  CLI::App* galerkin =
      add_common(app.add_subcommand("galerkin", "spectral truncation determinant"));
  galerkin->add_option("--N", opt.truncation, "truncation level");
  galerkin->add_option("--N-sequence", opt.truncation_sequence, "sequence of truncation levels");

  CLI::App* parity = add_common(
      app.add_subcommand("parity", "determinant sign vs relative Morse index"));
  parity->add_option("--grid", opt.grid, "crossing scan grid");

  CLI::App* decompose =
      add_common(app.add_subcommand("decompose", "brake-symmetry splitting residuals"));
  decompose->add_option("--s", opt.s_condition, "periodic condition: one|minus-one");

  CLI::App* scan = add_common(app.add_subcommand("scan", "certified region scan"));
  scan->add_option("--kind", opt.kind, "family: lagrange|euler");
  scan->add_option("--grid", opt.grid, "parameter grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) {
      app.exit(err);
      return 0;
    }
    std::cerr << "ConfigError: " << err.what() << "\n";
    return 2;
  } catch (const Error& err) {
    std::cerr << err.name() << ": " << err.what() << "\n";
    return err.exit_code();
  }

  try {
    if (command == "hill") return cmd_hill(opt);
    if (command == "trace") return cmd_trace(opt);
    if (command == "eigs") return cmd_eigs(opt);
    if (command == "galerkin") return cmd_galerkin(opt);
    if (command == "parity") return cmd_parity(opt);
    if (command == "decompose") return cmd_decompose(opt);
    if (command == "scan") return cmd_scan(opt);
    throw ConfigError("no command given");
  } catch (const Error& err) {
    std::cerr << err.name() << ": " << err.what() << "\n";
    return err.exit_code();
  } catch (const std::exception& err) {
    std::cerr << "NumericalError: " << err.what() << "\n";
    return 3;
  }
}

}  // namespace hamstab::cli
