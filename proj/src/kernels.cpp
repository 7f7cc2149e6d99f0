#include "lti/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "lti/numerics.hpp"

namespace lti {

void KernelSpec::validate() const {
    if (!(delay >= 0.0)) throw std::invalid_argument("delay must be >= 0");
    if (warp_exponent < 0) throw std::invalid_argument("warp exponent must be >= 0");
    if (family == KernelFamily::heaviside) return;
    if (atoms.empty()) throw std::invalid_argument("kernel needs at least one atom");
    bool any_positive = false;
    for (const auto& a : atoms) {
        if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
            throw std::invalid_argument("atom masses must be nonnegative");
        if (!(a.omega >= 0.0) || !std::isfinite(a.omega))
            throw std::invalid_argument("atom rates must be nonnegative");
        if (a.mass > 0.0) any_positive = true;
        // a warped-mixture atom at omega = 0 never decays and the family's
        // stability guarantee would be silently lost
        if (family == KernelFamily::warped_mixture && !(a.omega > 0.0))
            throw std::invalid_argument("warped-mixture rates must be positive");
    }
    if (!any_positive)
        throw std::invalid_argument("at least one atom mass must be positive");
}

double cubic_spline_G(double s1, double s2) {
    double m = std::min(s1, s2);
    return s1 * s2 * m / 2.0 - m * m * m / 6.0;
}

double kernel_section(const KernelSpec& spec, double s1, double s2) {
    switch (spec.family) {
        case KernelFamily::heaviside:
            return 1.0;
        case KernelFamily::exponential_mixture: {
            double v = 0.0;
            for (const auto& a : spec.atoms)
                v += a.mass * std::exp(-a.omega * (s1 + s2));
            return v;
        }
        case KernelFamily::warped_mixture: {
            double mix = 0.0;
            for (const auto& a : spec.atoms) {
                double e1 = std::exp(-a.omega * s1);
                double e2 = std::exp(-a.omega * s2);
                mix += a.mass * (spec.base_shape == WarpShape::min
                                     ? std::min(e1, e2)
                                     : cubic_spline_G(e1, e2));
            }
            return pow_int(s1 * s2, spec.warp_exponent) * mix;
        }
        case KernelFamily::translation_invariant: {
            double d = s1 - s2;
            double v = 0.0;
            for (const auto& a : spec.atoms)
                v += a.mass * (spec.ti_shape == TiShape::cosine_mixture
                                   ? std::cos(a.omega * d)
                                   : std::exp(-a.omega * d * d));
            return v;
        }
    }
    return 0.0;
}

double kernel_eval(const KernelSpec& spec, double t1, double t2) {
    double s1 = t1 - spec.delay;
    double s2 = t2 - spec.delay;
    if (s1 < 0.0 || s2 < 0.0) return 0.0;
    return kernel_section(spec, s1, s2);
}

double integrate_exponential_kernel_once(double omega, double t1, double t2) {
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
    if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
    return -std::expm1(-omega * t1) * -std::expm1(-omega * t2) / (omega * omega);
}

KernelSpec apply_delay(KernelSpec spec, double extra_delay) {
    if (!(extra_delay >= 0.0)) throw std::invalid_argument("delay must be >= 0");
    spec.delay += extra_delay;
    return spec;
}

double psd_quadratic_form(const KernelSpec& spec, std::span<const double> points,
                          std::span<const double> coeffs) {
    if (points.size() != coeffs.size())
        throw std::invalid_argument("points and coeffs must have equal length");
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j)
            total += coeffs[i] * coeffs[j] * kernel_eval(spec, points[i], points[j]);
    return total;
}

namespace {

std::string lower_trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c); };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_real(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("invalid " + what + ": '" + s + "'");
    }
    if (pos != s.size()) throw ParseError("invalid " + what + ": '" + s + "'");
    return v;
}

}  // namespace

KernelSpec KernelSpec::parse(const std::string& text) {
    KernelSpec spec;
    spec.atoms.clear();
    bool family_set = false;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ';')) {
        if (lower_trim(field).empty()) continue;
        auto eq = field.find('=');
        if (eq == std::string::npos)
            throw ParseError("kernel spec field missing '=': '" + field + "'");
        std::string key = lower_trim(field.substr(0, eq));
        std::string val = lower_trim(field.substr(eq + 1));
        if (key == "family") {
            family_set = true;
            if (val == "heaviside") spec.family = KernelFamily::heaviside;
            else if (val == "exponentialmixture" || val == "exponential")
                spec.family = KernelFamily::exponential_mixture;
            else if (val == "warpedmixture" || val == "warped")
                spec.family = KernelFamily::warped_mixture;
            else if (val == "translationinvariant" || val == "ti")
                spec.family = KernelFamily::translation_invariant;
            else throw ParseError("unknown kernel family: '" + val + "'");
        } else if (key == "atoms") {
            std::stringstream as(val);
            std::string atom;
            while (std::getline(as, atom, ',')) {
                auto colon = atom.find(':');
                if (colon == std::string::npos)
                    throw ParseError("atom missing ':': '" + atom + "'");
                KernelAtom a;
                a.mass = parse_real(lower_trim(atom.substr(0, colon)), "atom mass");
                a.omega = parse_real(lower_trim(atom.substr(colon + 1)), "atom rate");
                spec.atoms.push_back(a);
            }
        } else if (key == "k") {
            spec.warp_exponent = static_cast<int>(parse_real(val, "warp exponent"));
        } else if (key == "g") {
            if (val == "min") spec.base_shape = WarpShape::min;
            else if (val == "cubicspline") spec.base_shape = WarpShape::cubic_spline;
            else throw ParseError("unknown base shape: '" + val + "'");
        } else if (key == "f") {
            if (val == "cos") spec.ti_shape = TiShape::cosine_mixture;
            else if (val == "gauss") spec.ti_shape = TiShape::gaussian;
            else throw ParseError("unknown translation-invariant shape: '" + val + "'");
        } else if (key == "d") {
            spec.delay = parse_real(val, "delay");
        } else {
            throw ParseError("unknown kernel spec key: '" + key + "'");
        }
    }
    if (!family_set) throw ParseError("kernel spec missing 'family'");
    spec.validate();
    return spec;
}

std::string KernelSpec::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << "family=";
    switch (family) {
        case KernelFamily::heaviside: os << "heaviside"; break;
        case KernelFamily::exponential_mixture: os << "exponentialmixture"; break;
        case KernelFamily::warped_mixture: os << "warpedmixture"; break;
        case KernelFamily::translation_invariant: os << "translationinvariant"; break;
    }
    if (!atoms.empty()) {
        os << "; atoms=";
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (i) os << ",";
            os << atoms[i].mass << ":" << atoms[i].omega;
        }
    }
    if (family == KernelFamily::warped_mixture) {
        os << "; k=" << warp_exponent;
        os << "; G=" << (base_shape == WarpShape::min ? "min" : "cubicspline");
    }
    if (family == KernelFamily::translation_invariant)
        os << "; f=" << (ti_shape == TiShape::cosine_mixture ? "cos" : "gauss");
    if (delay != 0.0) os << "; D=" << delay;
    return os.str();
}

}  // namespace lti
