#include "dacspec/eos.hpp"

#include <cmath>

#include "dacspec/brent.hpp"
#include "dacspec/error.hpp"
#include "dacspec/kvdoc.hpp"

namespace dacspec::eos {

namespace {
constexpr double kXMin = 0.7;
constexpr double kXMax = 1.05;
constexpr double kPMax = 600.0;
}  // namespace

void validate(const EosParams& p) {
    if (!(p.a0_angstrom > 0.0)) throw Error(errc::invalid_argument, "a0 must be > 0");
    if (!(p.b0_gpa > 0.0)) throw Error(errc::invalid_argument, "b0 must be > 0");
    if (!(p.b0_prime > 1.0)) throw Error(errc::invalid_argument, "b0_prime must be > 1");
}

EosParams theory_params() { return {3.554, 460.0, 3.0, "theory"}; }
EosParams experiment_params() { return {3.555, 446.0, 3.0, "experiment"}; }

double vinet_pressure(double x, const EosParams& params) {
    validate(params);
    if (!(x >= kXMin && x <= kXMax))
        throw Error(errc::out_of_range, "lattice ratio outside validity window [0.7, 1.05]");
    const double eta = 1.5 * (params.b0_prime - 1.0);
    return 3.0 * params.b0_gpa * (1.0 - x) / (x * x) * std::exp(eta * (1.0 - x));
}

double lattice_ratio_from_pressure(double p, const EosParams& params) {
    validate(params);
    if (p < 0.0) {
        if (p >= -1e-6) p = 0.0;  // numerical noise from upstream subtraction
        else throw Error(errc::out_of_range, "negative pressure");
    }
    if (p > kPMax) throw Error(errc::out_of_range, "pressure above 600 GPa");
    if (p == 0.0) return 1.0;
    auto f = [&](double x) { return vinet_pressure(x, params) - p; };
    return brent_root(f, kXMin, 1.0, 1e-15, 1e-12);
}

EosParams read_eos_params(const std::string& path) {
    const KeyValueDoc doc = read_kvdoc(path);
    EosParams p;
    p.a0_angstrom = doc.require_number("a0_angstrom");
    p.b0_gpa = doc.require_number("b0_gpa");
    p.b0_prime = doc.require_number("b0_prime");
    p.label = doc.get("label").value_or("");
    validate(p);
    return p;
}

void write_eos_params(const std::string& path, const EosParams& p) {
    validate(p);
    KeyValueDoc doc;
    doc.set_number("a0_angstrom", p.a0_angstrom);
    doc.set_number("b0_gpa", p.b0_gpa);
    doc.set_number("b0_prime", p.b0_prime);
    doc.set("label", p.label);
    write_kvdoc(path, doc);
}

}  // namespace dacspec::eos
