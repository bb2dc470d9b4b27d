#pragma once

#include <string>

namespace dacspec::eos {

/// Vinet equation-of-state parameters for diamond. b0_prime is a mandatory
/// explicit field in every persisted configuration so the choice is always
/// visible.
struct EosParams {
    double a0_angstrom = 0.0;   // zero-pressure lattice constant
    double b0_gpa = 0.0;        // bulk modulus
    double b0_prime = 0.0;      // pressure derivative of the bulk modulus
    std::string label;
};

void validate(const EosParams& p);

// Shipped parameter sets. b0_prime = 3.0 for both (fitted diamond value).
EosParams theory_params();      // a0 = 3.554 A, B0 = 460 GPa
EosParams experiment_params();  // a0 = 3.555 A, B0 = 446 GPa

struct LatticeState {
    double x = 1.0;         // lattice parameter ratio a/a0
    double pressure = 0.0;  // GPa
};

// P(x) = 3*B0 * (1-x)/x^2 * exp[(3/2)(B0'-1)(1-x)].
// Valid for x in [0.7, 1.05]; hard error outside.
double vinet_pressure(double x, const EosParams& params);

// Unique x in [0.7, 1.05] with vinet_pressure(x) = p, for p in [0, 600] GPa.
// Small negative numerical pressures within -1e-6 GPa are treated as 0.
double lattice_ratio_from_pressure(double p, const EosParams& params);

// Key-value parameter file with mandatory a0_angstrom, b0_gpa, b0_prime.
EosParams read_eos_params(const std::string& path);
void write_eos_params(const std::string& path, const EosParams& p);

}  // namespace dacspec::eos
