#pragma once

#include <span>
#include <string>
#include <vector>

#include "lti/errors.hpp"

namespace lti {

enum class KernelFamily {
    heaviside,
    exponential_mixture,
    warped_mixture,
    translation_invariant,
};

enum class WarpShape { min, cubic_spline };
enum class TiShape { cosine_mixture, gaussian };

struct KernelAtom {
    double mass = 1.0;
    double omega = 1.0;
};

// Closed algebraic description of one kernel K(t1,t2) = H(t1-D)H(t2-D) Ktilde(t1-D, t2-D):
//   heaviside:             Ktilde = 1
//   exponential_mixture:   Ktilde = sum_j mass_j e^{-omega_j (s1+s2)}
//   warped_mixture:        Ktilde = (s1 s2)^k sum_j mass_j G(e^{-omega_j s1}, e^{-omega_j s2})
//                          with G = min (TC family) or the cubic spline kernel
//   translation_invariant: Ktilde = sum_j mass_j cos(omega_j (s1-s2))  or
//                          sum_j mass_j e^{-omega_j (s1-s2)^2}  (diagnostics only)
struct KernelSpec {
    KernelFamily family = KernelFamily::exponential_mixture;
    std::vector<KernelAtom> atoms;
    int warp_exponent = 0;               // warped_mixture only
    WarpShape base_shape = WarpShape::min;
    TiShape ti_shape = TiShape::gaussian;
    double delay = 0.0;

    void validate() const;

    // Textual form: family=<name>; atoms=<mass:omega,...>; k=<int>;
    // G=<min|cubicspline>; f=<cos|gauss>; D=<real>.  Case-insensitive keys,
    // unknown keys rejected.
    static KernelSpec parse(const std::string& text);
    std::string to_string() const;
};

// Full kernel value, exactly 0 whenever min(t1, t2) < delay (H(0) = 1).
double kernel_eval(const KernelSpec& spec, double t1, double t2);

// The nonnegative-time factor Ktilde(s1, s2), without Heaviside masking or
// the delay shift; used by the degree/smoothness probes.
double kernel_section(const KernelSpec& spec, double s1, double s2);

// G(s1,s2) = s1 s2 min/2 - min^3/6 on [0,1]^2.
double cubic_spline_G(double s1, double s2);

// One step of the double-integral recursion on the exponential kernel:
// ∫_0^{t1}∫_0^{t2} e^{-omega(a+b)} da db = (1-e^{-omega t1})(1-e^{-omega t2})/omega^2.
double integrate_exponential_kernel_once(double omega, double t1, double t2);

// Compose with the shift K_D(t1,t2) = K(t1-D, t2-D).
KernelSpec apply_delay(KernelSpec spec, double extra_delay);

// sum_ij c_i c_j K(t_i, t_j)
double psd_quadratic_form(const KernelSpec& spec, std::span<const double> points,
                          std::span<const double> coeffs);

}  // namespace lti
