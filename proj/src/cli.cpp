#include "entroscale/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "entroscale/density.hpp"
#include "entroscale/entropy.hpp"
#include "entroscale/fock_oracle.hpp"
#include "entroscale/toeplitz.hpp"

namespace entroscale {

namespace {

Json poly_json(const TrigPoly& p) {
  Json j;
  j["cos"] = p.cos_coeffs();
  std::vector<double> s(p.sin_coeffs().begin() + 1, p.sin_coeffs().end());
  j["sin"] = s;
  return j;
}

Json arcs_json(const std::vector<Arc>& arcs) {
  Json j = Json::array();
  for (const Arc& a : arcs) j.push_back(Json::array({a.lo, a.hi}));
  return j;
}

Json partition_json(const MomentumPartition& p) {
  Json j;
  j["pi_L"] = arcs_json(p.pi_L);
  j["pi_R"] = arcs_json(p.pi_R);
  j["pi_0"] = p.pi_0;
  j["excluded"] = p.excluded;
  j["length_L"] = p.length_L();
  j["length_R"] = p.length_R();
  return j;
}

bool is_refused(CaseTag tag) { return tag == CaseTag::Case1 || tag == CaseTag::Case6; }

void require_supported_case(const ChainModel& model) {
  const CaseTag tag = classify(model.hamiltonian);
  if (is_refused(tag))
    throw Error(ErrorCode::WrongCase,
                fmt::format("model is {}; entropy scaling is only defined for Case2..Case5", to_string(tag)));
}

int thread_cap(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ENTROSCALE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

std::vector<Eigen::VectorXcd> random_vectors(int nu, int count) {
  std::mt19937_64 rng(0x5eed + static_cast<unsigned>(nu));
  std::normal_distribution<double> g;
  std::vector<Eigen::VectorXcd> v;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXcd f(2 * nu);
    for (int j = 0; j < 2 * nu; ++j) f(j) = {g(rng), g(rng)};
    v.push_back(f);
  }
  return v;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidModel:
    case ErrorCode::InvalidFermi:
    case ErrorCode::TooLarge:
      return kExitConfig;
    case ErrorCode::WrongCase:
    case ErrorCode::NotSymmetric:
    case ErrorCode::WrongFermi:
      return kExitWrongCase;
    case ErrorCode::AxiomViolation:
    case ErrorCode::OracleMismatch:
      return kExitOracle;
    default:
      return kExitNumerical;
  }
}

Json classify_report(const ChainModel& model) {
  const PauliSymbol s(model.hamiltonian);
  Json j;
  j["case"] = to_string(s.tag);
  Json u;
  for (int a = 0; a < 4; ++a) u[fmt::format("u{}", a)] = poly_json(s.u[static_cast<std::size_t>(a)]);
  j["pauli"] = u;
  j["zeros_abs_u"] = is_zero(s.usq, TrigPoly::kTrimTolerance) ? std::vector<double>{} : root_angles(s.usq);
  if (is_refused(s.tag)) {
    j["supported"] = false;
    j["notice"] = fmt::format("{} is outside Case2..Case5; density, sweep and oracle refuse this model", to_string(s.tag));
  } else {
    j["supported"] = true;
    j["partition"] = partition_json(partition_momentum(model));
  }
  return j;
}

Json density_report(const ChainModel& model) {
  require_supported_case(model);
  const DensityReport rep = s_infinity(model);
  Json j;
  j["case"] = to_string(classify(model.hamiltonian));
  j["fermi"] = fermi_name(model.fermi);
  j["s_infinity"] = rep.s_infinity;
  j["s_L"] = rep.s_L;
  j["s_R"] = rep.s_R;
  j["quadrature_error"] = rep.quadrature_error;
  Json routes;
  const PauliSymbol s(model.hamiltonian);
  if (is_zero(s.u[0], 1e-12)) routes["symmetric"] = s_infinity_symmetric(model);
  if (std::holds_alternative<FermiDirac>(model.fermi)) {
    const TanhReport t = tanh_form(model);
    routes["tanh"] = t.value;
    routes["tanh_lower_bound"] = t.lower_bound;
  }
  j["routes"] = routes.is_null() ? Json::object() : routes;
  j["partition"] = partition_json(rep.partition);
  Json sigma = Json::array();
  for (const Interval& iv : rep.sigma) sigma.push_back(Json::array({iv.lo, iv.hi}));
  j["sigma"] = sigma;
  Json v;
  v["verdict"] = rep.vanishing.vanishing ? "vanishing" : "positive";
  v["samples"] = rep.vanishing.samples;
  Json w = Json::array();
  for (const auto& p : rep.vanishing.witnesses) w.push_back(Json::array({p[0], p[1]}));
  v["witnesses"] = w;
  v["agrees_with_density"] = rep.verdict_agrees;
  j["vanishing"] = v;
  if (!rep.verdict_agrees)
    throw Error(ErrorCode::QuadratureFailure,
                fmt::format("vanishing verdict '{}' contradicts s_infinity = {:.3e}", v["verdict"].get<std::string>(),
                            rep.s_infinity));
  return j;
}

std::vector<SweepRow> sweep(const ChainModel& model, const std::vector<int>& nus, int fft_size, int threads) {
  require_supported_case(model);
  if (nus.empty()) throw Error(ErrorCode::ConfigError, "sweep needs at least one nu");
  for (int nu : nus)
    if (nu < 2) throw Error(ErrorCode::ConfigError, fmt::format("every nu must be at least 2, got {}", nu));

  const double s_inf = s_infinity(model).s_infinity;
  BlockSymbol a_tilde = build_a_tilde(model);
  a_tilde.set_fft_size(fft_size);
  const SkewCoefficients coeffs = skew_coefficients(a_tilde, *std::max_element(nus.begin(), nus.end()) - 1);

  std::vector<SweepRow> rows(nus.size());
  std::vector<std::exception_ptr> errors(nus.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < nus.size(); i = next++) {
      try {
        const EntropyValue e = entropy_from_lambdas(skew_spectrum(coeffs, nus[i]).lambdas);
        rows[i] = {nus[i], e.S, s_inf};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::min<int>(thread_cap(threads), static_cast<int>(nus.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

bool OracleResult::pass() const { return first_failure().empty(); }

std::string OracleResult::first_failure() const {
  for (const OracleCheck& c : checks)
    if (!c.pass()) return c.name;
  return {};
}

OracleResult run_oracle(const ChainModel& model, int nu, int fft_size) {
  if (nu < 2 || nu > 5) throw Error(ErrorCode::TooLarge, fmt::format("oracle window must satisfy 2 <= nu <= 5, got {}", nu));
  require_supported_case(model);
  OracleResult res;
  res.nu = nu;
  auto check = [&res](std::string name, double value, double tol) {
    res.checks.push_back({std::move(name), std::isfinite(value) ? value : std::numeric_limits<double>::infinity(), tol});
  };

  // Main path: real skew section of the a_tilde symbol.
  BlockSymbol a_tilde = build_a_tilde(model);
  a_tilde.set_fft_size(fft_size);
  const SkewCoefficients coeffs = skew_coefficients(a_tilde, nu - 1);
  res.toeplitz_lambdas = skew_spectrum(coeffs, nu).lambdas;

  // Oracle path: position-space Omega from the two-point coefficients.
  BlockSymbol r = build_r_symbol(model);
  r.set_fft_size(fft_size);
  const CorrelationData data = correlation_data(*r.precompute(nu - 1), nu, model.phase);
  const FockRep rep(nu);
  const ReducedDensity rd = reduced_density_matrix(rep, data);
  res.oracle_lambdas = skew_canonical_lambdas(data);

  const auto dim2 = 2 * nu;
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(dim2, dim2);
  check("omega_hermitian", max_abs(data.omega - data.omega.adjoint()), 1e-10);
  check("omega_transpose", max_abs(data.omega.transpose() + data.omega - id2), 1e-10);
  const Eigen::MatrixXcd tb = std::complex<double>(0.0, 1.0) * skew_section(coeffs, nu).cast<std::complex<double>>();
  check("section_equals_2omega_minus_1", max_abs(tb - (2.0 * data.omega - id2)), 1e-9);

  check("density_trace", std::fabs(rd.trace - 1.0), 1e-10);
  check("density_hermitian", rd.hermiticity_defect, 1e-10);
  check("density_positive", std::max(0.0, -rd.spectrum.front()), 1e-10);

  check("lambda_routes", max_gap(res.toeplitz_lambdas, res.oracle_lambdas), 1e-9);
  std::vector<double> product = spectrum_product(res.toeplitz_lambdas);
  std::sort(product.begin(), product.end());
  check("spectrum_product", max_gap(product, rd.spectrum), 1e-8);

  res.entropy_direct = rd.entropy;
  res.entropy_product = shannon_entropy(product);
  res.entropy_lambdas = entropy_from_lambdas(res.toeplitz_lambdas).S;
  check("entropy_routes",
        std::max({std::fabs(res.entropy_direct - res.entropy_product), std::fabs(res.entropy_direct - res.entropy_lambdas),
                  std::fabs(res.entropy_product - res.entropy_lambdas)}),
        1e-8);

  const CheckReport car = car_check(rep, random_vectors(nu, 6), model.phase);
  for (const auto& [name, value] : car.residuals) check(name, value, name == "araki_norm" ? 1e-10 : 1e-12);

  if (nu <= 4) {
    try {
      check("matrix_units", matrix_units(rep, model.phase).max(), 1e-12);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AxiomViolation) throw;
      check("matrix_units", std::numeric_limits<double>::infinity(), 1e-12);
    }
  }

  const Eigen::MatrixXcd kernel = data.pfaffian_kernel();
  const int lead = std::min(dim2, 6);
  const Eigen::MatrixXcd sub = kernel.topLeftCorner(lead, lead);
  check("pfaffian_pairing_sum", std::abs(pfaffian(sub) - pfaffian_pairing_sum(sub)), 1e-10);
  const int lead_det = std::min(dim2, 8);
  const Eigen::MatrixXcd sub_det = kernel.topLeftCorner(lead_det, lead_det);
  const std::complex<double> pf = pfaffian(sub_det);
  const std::complex<double> det = sub_det.determinant();
  check("pfaffian_squared_det", std::abs(pf * pf - det) / std::max(1.0, std::abs(det)), 1e-8);

  if (std::holds_alternative<HalfConstant>(model.fermi)) {
    const double d = static_cast<double>(rep.dim());
    check("maximally_mixed", max_abs(rd.matrix - rep.identity() / d), 1e-12);
    check("factorization", factorization_check(rep, data, model.phase), 1e-10);
  }
  return res;
}

Json oracle_json(const OracleResult& r) {
  Json j;
  j["nu"] = r.nu;
  j["pass"] = r.pass();
  if (!r.pass()) j["first_failure"] = r.first_failure();
  j["toeplitz_lambdas"] = r.toeplitz_lambdas;
  j["oracle_lambdas"] = r.oracle_lambdas;
  Json e;
  e["direct"] = r.entropy_direct;
  e["product_formula"] = r.entropy_product;
  e["lambda_sum"] = r.entropy_lambdas;
  j["entropy"] = e;
  Json checks = Json::array();
  for (const OracleCheck& c : r.checks) {
    Json x;
    x["name"] = c.name;
    x["value"] = c.value;
    x["tolerance"] = c.tolerance;
    x["pass"] = c.pass();
    checks.push_back(x);
  }
  j["checks"] = checks;
  return j;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement entropy scaling of quasifree fermionic chains"};
  app.name("entroscale");
  app.require_subcommand(1, 1);

  std::string config_path, out_path, format;
  std::optional<int> nu_opt;
  std::vector<int> nu_list;
  int fft_size = -1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "model configuration (JSON)")->required();
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--fft-size", fft_size, "FFT grid size override (power of two)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  CLI::App* classify_cmd = app.add_subcommand("classify", "spectral case, Pauli coefficients, momentum partition");
  CLI::App* density_cmd = app.add_subcommand("density", "asymptotic entropy density and the vanishing criterion");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "window entropy S_nu for a list of window sizes");
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "exact Fock-space validation at small nu");
  for (CLI::App* sub : {classify_cmd, density_cmd, sweep_cmd, oracle_cmd}) add_common(sub);
  sweep_cmd->add_option("--nu-list", nu_list, "comma-separated window sizes")->delimiter(',');
  sweep_cmd->add_option("--nu", nu_opt, "single window size");
  oracle_cmd->add_option("--nu", nu_opt, "window size, 2..5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const RunConfig cfg = load_config(config_path);
    const int fft = fft_size >= 0 ? fft_size : cfg.fft_size;
    if (fft != 0 && (fft < 16 || (fft & (fft - 1)) != 0))
      throw Error(ErrorCode::ConfigError, fmt::format("fft size must be a power of two >= 16, got {}", fft));

    std::string text;
    int code = kExitOk;
    if (classify_cmd->parsed()) {
      text = to_json_text(classify_report(cfg.model));
    } else if (density_cmd->parsed()) {
      text = to_json_text(density_report(cfg.model));
    } else if (sweep_cmd->parsed()) {
      std::vector<int> nus = nu_list;
      if (nus.empty() && nu_opt) nus = {*nu_opt};
      if (nus.empty()) nus = cfg.nu_list;
      if (nus.empty() && cfg.nu) nus = {*cfg.nu};
      if (nus.empty()) throw Error(ErrorCode::ConfigError, "sweep needs --nu-list, --nu or nu_list in the config");
      const std::vector<SweepRow> rows = sweep(cfg.model, nus, fft);
      if (format == "json") {
        Json j = Json::array();
        for (const SweepRow& r : rows) {
          Json x;
          x["nu"] = r.nu;
          x["S_nu"] = r.S;
          x["S_nu/nu"] = r.per_site();
          x["s_infinity"] = r.s_infinity;
          x["gap"] = r.gap();
          x["S_nu_bits"] = r.bits();
          j.push_back(x);
        }
        text = to_json_text(j);
      } else {
        text = to_csv(rows);
      }
    } else {
      const int nu = nu_opt ? *nu_opt : cfg.nu.value_or(3);
      if (nu < 2 || nu > 5) {
        err << fmt::format("usage error: oracle window must satisfy 2 <= nu <= 5, got {}\n", nu);
        return kExitConfig;
      }
      const OracleResult r = run_oracle(cfg.model, nu, fft);
      text = to_json_text(oracle_json(r));
      if (!r.pass()) {
        err << fmt::format("oracle failure: {}\n", r.first_failure());
        code = kExitOracle;
      }
    }

    if (out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw Error(ErrorCode::ConfigError, fmt::format("cannot write '{}'", out_path));
      f << text;
    }
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace entroscale
