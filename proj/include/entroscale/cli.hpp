#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "entroscale/config.hpp"
#include "entroscale/error.hpp"
#include "entroscale/report.hpp"

namespace entroscale {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitWrongCase = 3,
  kExitNumerical = 4,
  kExitOracle = 5,
};

int exit_code_for(ErrorCode code);

Json classify_report(const ChainModel& model);
Json density_report(const ChainModel& model);

// One row per nu, in input order. All rows share a single coefficient table up to
// lag max(nu) - 1. threads <= 0 reads ENTROSCALE_THREADS, else hardware concurrency.
std::vector<SweepRow> sweep(const ChainModel& model, const std::vector<int>& nus, int fft_size = 0, int threads = 0);

struct OracleCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass() const { return value <= tolerance; }
};

struct OracleResult {
  int nu = 0;
  std::vector<double> toeplitz_lambdas;
  std::vector<double> oracle_lambdas;
  double entropy_direct = 0.0;   // -tr R log R
  double entropy_product = 0.0;  // Shannon sum over the product spectrum
  double entropy_lambdas = 0.0;  // sum eta(lambda)
  std::vector<OracleCheck> checks;

  bool pass() const;
  // Empty when every check passes.
  std::string first_failure() const;
};

// 2 <= nu <= 5; matrix-unit axioms are audited for nu <= 4.
OracleResult run_oracle(const ChainModel& model, int nu, int fft_size = 0);
Json oracle_json(const OracleResult& r);

// Full command line: entroscale classify|density|sweep|oracle --config <path> ...
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace entroscale
