#include "gbmlab/coefficients.hpp"

#include <cmath>
#include <sstream>

#include "gbmlab/rng.hpp"

namespace gbmlab {

namespace {

constexpr double kInvE = 0.36787944117144233;

double uniform01(std::uint64_t seed, std::uint64_t idx, std::uint32_t lane) {
    const auto r = Philox4x32::generate(
        {static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32), lane, 0xc0ffeeu},
        {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    const std::uint64_t a = r[0] | (static_cast<std::uint64_t>(r[1]) << 32);
    return static_cast<double>(a >> 11) * (1.0 / 9007199254740992.0);
}

std::string point_string(double t, const Vecd& x) {
    std::ostringstream os;
    os << "(t=" << t << ", x=[";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << "])";
    return os.str();
}

Vecd checked(Vecd v, const char* which, double t, const Vecd& x) {
    for (double e : v)
        if (!std::isfinite(e))
            throw NumericalError(std::string(which) + " returned a non-finite value at " +
                                 point_string(t, x));
    return v;
}

// increasing branch of r·ln(1/r), frozen at its peak value beyond e^{-1}
double rlogr_clipped(double r) {
    const double a = std::fabs(r);
    if (a >= kInvE) return kInvE;
    if (a == 0.0) return 0.0;
    return a * std::log(1.0 / a);
}

struct CatalogCall {
    std::string name;
    std::vector<double> args;
};

CatalogCall parse_call(const std::string& spec) {
    CatalogCall call;
    const auto open = spec.find('(');
    if (open == std::string::npos) {
        call.name = spec;
        return call;
    }
    require(!spec.empty() && spec.back() == ')', "malformed catalog call: " + spec);
    call.name = spec.substr(0, open);
    std::string inside = spec.substr(open + 1, spec.size() - open - 2);
    std::istringstream is(inside);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
                ++used;
            require(used == tok.size(), "bad numeric argument");
            call.args.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError("bad numeric argument '" + tok + "' in catalog call " + spec);
        }
    }
    return call;
}

void need_args(const CatalogCall& call, std::size_t count) {
    if (call.args.size() != count) {
        std::ostringstream os;
        os << "catalog entry " << call.name << " takes " << count << " argument(s), got "
           << call.args.size();
        throw ValidationError(os.str());
    }
}

}  // namespace

void validate_coefficients(const CoefficientSet& coeffs) {
    require(coeffs.n >= 1 && coeffs.d >= 1, "coefficient set needs n, d >= 1");
    require(static_cast<bool>(coeffs.b) && static_cast<bool>(coeffs.h) &&
                static_cast<bool>(coeffs.sigma),
            "coefficient set needs b, h, sigma evaluators");
    require(coeffs.beta1 >= 0.0 && coeffs.beta2 >= 0.0 && coeffs.beta >= 0.0,
            "growth and modulus scales must be >= 0");
    if (coeffs.regime == ModulusRegime::h1h2) {
        require(coeffs.rho.has_value(), "regime h1h2 requires a modulus rho");
    } else {
        require(coeffs.rho1.has_value() && coeffs.rho2.has_value() && coeffs.rho3.has_value(),
                "regime h1ph2p requires rho1, rho2 and the derived rho3");
    }
}

Vecd eval_b(const CoefficientSet& coeffs, double t, const Vecd& x) {
    return checked(coeffs.b(t, x), "b", t, x);
}

Vecd eval_h(const CoefficientSet& coeffs, double t, const Vecd& x, std::size_t i, std::size_t j) {
    return checked(coeffs.h(t, x, i, j), "h", t, x);
}

Vecd eval_sigma(const CoefficientSet& coeffs, double t, const Vecd& x, std::size_t j) {
    return checked(coeffs.sigma(t, x, j), "sigma", t, x);
}

CoefficientSet truncate_coefficients(const CoefficientSet& coeffs, double n_cap) {
    require(n_cap > 0.0 && std::isfinite(n_cap), "truncation cap must be positive");
    auto clip = [n_cap](Vecd v) {
        const double norm = norm2(v);
        if (norm >= n_cap)
            for (double& e : v) e *= n_cap / norm;
        return v;
    };
    CoefficientSet out = coeffs;
    out.b = [clip, inner = coeffs.b](double t, const Vecd& x) { return clip(inner(t, x)); };
    out.h = [clip, inner = coeffs.h](double t, const Vecd& x, std::size_t i, std::size_t j) {
        return clip(inner(t, x, i, j));
    };
    out.sigma = [clip, inner = coeffs.sigma](double t, const Vecd& x, std::size_t j) {
        return clip(inner(t, x, j));
    };
    if (!out.tag.empty()) out.tag += "|capped";
    return out;
}

void spot_check_growth(const CoefficientSet& coeffs, double horizon, double x_radius,
                       std::size_t samples, std::uint64_t seed) {
    validate_coefficients(coeffs);
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = horizon * uniform01(seed, s, 0);
        Vecd x(coeffs.n);
        for (std::size_t i = 0; i < coeffs.n; ++i)
            x[i] = x_radius * (2.0 * uniform01(seed, s, 1 + static_cast<std::uint32_t>(i)) - 1.0);
        double lhs = dot(eval_b(coeffs, t, x), eval_b(coeffs, t, x));
        for (std::size_t i = 0; i < coeffs.d; ++i)
            for (std::size_t j = 0; j < coeffs.d; ++j) {
                const Vecd hij = eval_h(coeffs, t, x, i, j);
                lhs += dot(hij, hij);
            }
        for (std::size_t j = 0; j < coeffs.d; ++j) {
            const Vecd sj = eval_sigma(coeffs, t, x, j);
            lhs += dot(sj, sj);
        }
        const double rhs = coeffs.beta1 * coeffs.beta1 + coeffs.beta2 * coeffs.beta2 * dot(x, x);
        if (lhs > rhs * (1.0 + 1e-9) + 1e-12)
            throw ValidationError("declared growth bound fails at " + point_string(t, x));
    }
}

void spot_check_modulus(const CoefficientSet& coeffs, double horizon, double x_radius,
                        std::size_t samples, std::uint64_t seed) {
    validate_coefficients(coeffs);
    // continuity declarations are local statements: probe within the modulus
    // validity domain
    double delta_max;
    if (coeffs.regime == ModulusRegime::h1h2)
        delta_max = std::sqrt(coeffs.rho->valid_max());
    else
        delta_max = std::min(coeffs.rho1->valid_max(), std::sqrt(coeffs.rho2->valid_max()));

    for (std::size_t s = 0; s < samples; ++s) {
        const double t = horizon * uniform01(seed, s, 10);
        Vecd x1(coeffs.n), x2(coeffs.n);
        Vecd dir(coeffs.n);
        double dn = 0.0;
        for (std::size_t i = 0; i < coeffs.n; ++i) {
            x1[i] = x_radius * (2.0 * uniform01(seed, s, 11 + static_cast<std::uint32_t>(i)) - 1.0);
            dir[i] = 2.0 * uniform01(seed, s, 40 + static_cast<std::uint32_t>(i)) - 1.0;
            dn += dir[i] * dir[i];
        }
        dn = std::sqrt(dn);
        if (dn == 0.0) dir[0] = dn = 1.0;
        // log-uniform pair separation in [1e-8, delta_max]
        const double mag =
            std::exp(std::log(1e-8) +
                     (std::log(delta_max) - std::log(1e-8)) * uniform01(seed, s, 70));
        for (std::size_t i = 0; i < coeffs.n; ++i) x2[i] = x1[i] + dir[i] / dn * mag;

        const Vecd b1 = eval_b(coeffs, t, x1), b2 = eval_b(coeffs, t, x2);
        Vecd db(coeffs.n);
        for (std::size_t i = 0; i < coeffs.n; ++i) db[i] = b1[i] - b2[i];

        if (coeffs.regime == ModulusRegime::h1h2) {
            double lhs = dot(db, db);
            for (std::size_t i = 0; i < coeffs.d; ++i)
                for (std::size_t j = 0; j < coeffs.d; ++j) {
                    const Vecd h1 = eval_h(coeffs, t, x1, i, j), h2 = eval_h(coeffs, t, x2, i, j);
                    for (std::size_t v = 0; v < coeffs.n; ++v)
                        lhs += (h1[v] - h2[v]) * (h1[v] - h2[v]);
                }
            for (std::size_t j = 0; j < coeffs.d; ++j) {
                const Vecd s1 = eval_sigma(coeffs, t, x1, j), s2 = eval_sigma(coeffs, t, x2, j);
                for (std::size_t v = 0; v < coeffs.n; ++v)
                    lhs += (s1[v] - s2[v]) * (s1[v] - s2[v]);
            }
            const double rhs = coeffs.beta * coeffs.beta * (*coeffs.rho)(mag * mag);
            if (lhs > rhs * (1.0 + 1e-9) + 1e-15)
                throw ValidationError("declared (squared) continuity bound fails at " +
                                      point_string(t, x1));
        } else {
            const double rho1_val = (*coeffs.rho1)(mag);
            if (norm2(db) > coeffs.beta * rho1_val * (1.0 + 1e-9) + 1e-15)
                throw ValidationError("declared drift continuity bound fails at " +
                                      point_string(t, x1));
            for (std::size_t i = 0; i < coeffs.d; ++i)
                for (std::size_t j = 0; j < coeffs.d; ++j) {
                    const Vecd h1 = eval_h(coeffs, t, x1, i, j), h2 = eval_h(coeffs, t, x2, i, j);
                    Vecd dh(coeffs.n);
                    for (std::size_t v = 0; v < coeffs.n; ++v) dh[v] = h1[v] - h2[v];
                    if (norm2(dh) > coeffs.beta * rho1_val * (1.0 + 1e-9) + 1e-15)
                        throw ValidationError("declared h continuity bound fails at " +
                                              point_string(t, x1));
                }
            const double rho2_val = (*coeffs.rho2)(mag * mag);
            for (std::size_t j = 0; j < coeffs.d; ++j) {
                const Vecd s1 = eval_sigma(coeffs, t, x1, j), s2 = eval_sigma(coeffs, t, x2, j);
                Vecd ds(coeffs.n);
                for (std::size_t v = 0; v < coeffs.n; ++v) ds[v] = s1[v] - s2[v];
                if (dot(ds, ds) > coeffs.beta * rho2_val * (1.0 + 1e-9) + 1e-15)
                    throw ValidationError("declared sigma continuity bound fails at " +
                                          point_string(t, x1));
            }
        }
    }
}

Modulus derive_rho3(const Modulus& rho2) {
    const double valid = std::sqrt(rho2.valid_max());
    const double eval = std::sqrt(rho2.eval_max());
    auto fn = [rho2](double r) { return rho2(r * r) / r; };
    return Modulus("rho3[" + rho2.name() + "]", fn, valid, eval, false, false,
                   std::sqrt(rho2.probe_floor()));
}

CoefficientSet make_coefficients_1d(const std::string& drift_spec, const std::string& sigma_spec) {
    const CatalogCall drift = parse_call(drift_spec);
    const CatalogCall sig = parse_call(sigma_spec);

    CoefficientSet out;
    out.n = 1;
    out.d = 1;
    out.tag = drift_spec + "+" + sigma_spec;
    out.h = [](double, const Vecd&, std::size_t, std::size_t) { return Vecd{0.0}; };

    double drift_lip = 0.0, drift_const = 0.0, drift_bound = 0.0;
    bool drift_rlogr = false;
    double rlogr_scale = 0.0;
    if (drift.name == "zero") {
        need_args(drift, 0);
        out.b = [](double, const Vecd&) { return Vecd{0.0}; };
    } else if (drift.name == "linear_drift") {
        need_args(drift, 1);
        const double k = drift.args[0];
        out.b = [k](double, const Vecd& x) { return Vecd{k * x[0]}; };
        drift_lip = std::fabs(k);
    } else if (drift.name == "affine_drift") {
        need_args(drift, 2);
        const double k = drift.args[0], c = drift.args[1];
        out.b = [k, c](double, const Vecd& x) { return Vecd{k * x[0] + c}; };
        drift_lip = std::fabs(k);
        drift_const = std::fabs(c);
    } else if (drift.name == "rlogr_drift") {
        need_args(drift, 1);
        const double scale = drift.args[0];
        out.b = [scale](double, const Vecd& x) {
            const double s = x[0] < 0.0 ? -1.0 : 1.0;
            return Vecd{scale * s * rlogr_clipped(x[0])};
        };
        drift_rlogr = true;
        rlogr_scale = std::fabs(scale);
        drift_bound = rlogr_scale * kInvE;
    } else {
        throw ValidationError("unknown drift catalog entry: " + drift.name);
    }

    double sigma_lip = 0.0, sigma_const = 0.0;
    if (sig.name == "zero") {
        need_args(sig, 0);
        out.sigma = [](double, const Vecd&, std::size_t) { return Vecd{0.0}; };
    } else if (sig.name == "constant_sigma") {
        need_args(sig, 1);
        const double s = sig.args[0];
        out.sigma = [s](double, const Vecd&, std::size_t) { return Vecd{s}; };
        sigma_const = std::fabs(s);
    } else if (sig.name == "lipschitz_sigma") {
        need_args(sig, 2);
        const double k = sig.args[0], c = sig.args[1];
        out.sigma = [k, c](double, const Vecd& x, std::size_t) { return Vecd{k * x[0] + c}; };
        sigma_lip = std::fabs(k);
        sigma_const = std::fabs(c);
    } else {
        throw ValidationError("unknown sigma catalog entry: " + sig.name);
    }

    // |f(x)| ≤ lip|x| + const per block; (a+b)² ≤ 2a² + 2b²
    const double const_part = drift_const + drift_bound;
    out.beta1 = std::sqrt(2.0 * (const_part * const_part + sigma_const * sigma_const));
    out.beta2 = std::sqrt(2.0 * (drift_lip * drift_lip + sigma_lip * sigma_lip));

    if (drift_rlogr) {
        out.regime = ModulusRegime::h1ph2p;
        out.rho1 = Modulus::rlogr();
        out.rho2 = Modulus::linear(1.0);
        out.rho3 = derive_rho3(*out.rho2);
        // crossing the origin costs a factor 1 + ln2 on the rlogr branch
        out.beta = std::max(2.0 * rlogr_scale, sigma_lip * sigma_lip);
        if (out.beta == 0.0) out.beta = 1.0;
    } else {
        out.regime = ModulusRegime::h1h2;
        out.rho = Modulus::linear(1.0);
        out.beta = std::sqrt(drift_lip * drift_lip + sigma_lip * sigma_lip);
        if (out.beta == 0.0) out.beta = 1.0;
    }
    return out;
}

}  // namespace gbmlab
