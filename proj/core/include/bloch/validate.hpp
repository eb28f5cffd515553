#pragma once

#include <string>
#include <vector>

namespace bloch {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Validation checks behind `bloch validate` and the acceptance suite.
// Each check embeds its own reference values or an independent oracle
// (closed forms, quadrature, depolarization integrals) and runs at desk scale.

CheckResult check_exceptional_classification();
CheckResult check_sphere_polarizability(unsigned threads = 0);
// lambda_perturbation != 0 is a negative-control hook: it biases the expected
// eigenvalues and must make the check fail.
CheckResult check_order_two_eigensystem(double lambda_perturbation = 0.0);
CheckResult check_order_four_eigensystem();
CheckResult check_maxwell_reduction();
CheckResult check_bessel_identities();
CheckResult check_surface_integrals();
CheckResult check_zero_mean_density(unsigned threads = 0);
CheckResult check_cluster_quasiperiodicity();
CheckResult check_m0_symmetry_bem(unsigned threads = 0);
CheckResult check_regime_consistency();

std::vector<CheckResult> run_acceptance_checks(unsigned threads = 0);

}  // namespace bloch
