#pragma once

// Thermodynamic state domain, the constitutive-function interface and the
// built-in fluid models.

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cathyp/errors.hpp"

namespace cathyp {

/// A point (rho, theta) of the thermodynamic domain. Membership (rho > 0,
/// theta > 0) is checked by check_domain, not by construction, so that
/// out-of-domain inputs can be represented and reported.
struct ThermoPoint {
    double rho = 1.0;
    double theta = 1.0;
};

inline void check_domain(const ThermoPoint& pt) {
    if (!(std::isfinite(pt.rho) && pt.rho > 0.0)) {
        throw DomainError("rho must be finite and > 0, got " + std::to_string(pt.rho));
    }
    if (!(std::isfinite(pt.theta) && pt.theta > 0.0)) {
        throw DomainError("theta must be finite and > 0, got " + std::to_string(pt.theta));
    }
}

using ScalarField = std::function<double(const ThermoPoint&)>;

inline ScalarField constant_field(double value) {
    return [value](const ThermoPoint&) { return value; };
}

/// Numeric (lambda, nu) at one thermodynamic point.
struct LambdaNu {
    double lambda = 1.0;
    double nu = -1.0;

    double gamma() const { return lambda + nu; }
    double lambda_plus() const { return 0.5 * lambda + 0.5; }
    double lambda_minus() const { return 0.5 * lambda - 0.5; }

    friend bool operator==(const LambdaNu&, const LambdaNu&) = default;
};

/// The objectivity scalars as functions of (rho, theta).
struct ObjectivityPair {
    ScalarField lambda;
    ScalarField nu;

    LambdaNu at(const ThermoPoint& pt) const { return {lambda(pt), nu(pt)}; }

    static ObjectivityPair constant(double lambda, double nu) {
        return {constant_field(lambda), constant_field(nu)};
    }
    static ObjectivityPair constant(LambdaNu ln) { return constant(ln.lambda, ln.nu); }
};

/// Named constant selectors: "christov" = (-1, 1), "jordan-compatible" = (1, -1).
inline LambdaNu named_lambda_nu(const std::string& name) {
    if (name == "christov") return {-1.0, 1.0};
    if (name == "jordan-compatible") return {1.0, -1.0};
    throw UnknownModel("unknown (lambda, nu) selector '" + name + "'");
}

/// Every scalar the quasilinear system needs at one point.
struct ConstitutiveEvaluation {
    double p = 0.0;
    double p_rho = 0.0;
    double p_theta = 0.0;
    double e_theta = 0.0;
    double kappa = 0.0;
    double tau = 0.0;
    double lambda = 0.0;
    double nu = 0.0;

    LambdaNu lambda_nu() const { return {lambda, nu}; }
};

/// Immutable bundle of constitutive functions. tau is a positive constant.
struct ConstitutiveModel {
    std::string name;
    std::map<std::string, double> parameters;
    ScalarField pressure;
    ScalarField dp_drho;
    ScalarField dp_dtheta;
    ScalarField de_dtheta;
    ScalarField conductivity;
    double tau = 1.0;
    ObjectivityPair objectivity = ObjectivityPair::constant(1.0, -1.0);

    ConstitutiveModel with_lambda_nu(ObjectivityPair pair) const {
        ConstitutiveModel copy = *this;
        copy.objectivity = std::move(pair);
        return copy;
    }
    ConstitutiveModel with_lambda_nu(LambdaNu ln) const {
        return with_lambda_nu(ObjectivityPair::constant(ln));
    }
};

/// Evaluates every constitutive scalar at `pt` and enforces the positivity
/// conditions p, p_rho, p_theta, e_theta, kappa, tau > 0.
inline ConstitutiveEvaluation evaluate(const ConstitutiveModel& model, const ThermoPoint& pt) {
    check_domain(pt);
    ConstitutiveEvaluation ev;
    ev.p = model.pressure(pt);
    ev.p_rho = model.dp_drho(pt);
    ev.p_theta = model.dp_dtheta(pt);
    ev.e_theta = model.de_dtheta(pt);
    ev.kappa = model.conductivity(pt);
    ev.tau = model.tau;
    ev.lambda = model.objectivity.lambda(pt);
    ev.nu = model.objectivity.nu(pt);

    const std::pair<const char*, double> positive[] = {
        {"p", ev.p},         {"p_rho", ev.p_rho}, {"p_theta", ev.p_theta},
        {"e_theta", ev.e_theta}, {"kappa", ev.kappa}, {"tau", ev.tau},
    };
    for (const auto& [label, value] : positive) {
        if (!(std::isfinite(value) && value > 0.0)) {
            throw ConstitutiveViolation(std::string(label) + " must be > 0 at (rho=" +
                                        std::to_string(pt.rho) + ", theta=" +
                                        std::to_string(pt.theta) + "), got " +
                                        std::to_string(value));
        }
    }
    if (!std::isfinite(ev.lambda) || !std::isfinite(ev.nu)) {
        throw ConstitutiveViolation("lambda and nu must be finite");
    }
    return ev;
}

// ---------------------------------------------------------------------------
// Built-in models

using ModelParameters = std::map<std::string, double>;

namespace detail {

inline double take(const ModelParameters& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

inline void reject_unknown_keys(const std::string& model, const ModelParameters& params,
                                const std::vector<std::string>& known) {
    for (const auto& [key, value] : params) {
        bool found = false;
        for (const auto& k : known) found = found || (k == key);
        if (!found) throw InvalidInput("model '" + model + "' has no parameter '" + key + "'");
    }
}

} // namespace detail

/// p = R rho theta + p_inf, e = c_v theta, constant kappa and tau.
/// With p_inf = 0 this is the ideal gas.
inline ConstitutiveModel stiffened_gas(double R, double cv, double kappa, double tau, double p_inf) {
    if (!(R > 0.0 && cv > 0.0 && kappa > 0.0 && tau > 0.0 && p_inf >= 0.0)) {
        throw InvalidInput("stiffened gas needs R, c_v, kappa, tau > 0 and p_inf >= 0");
    }
    ConstitutiveModel m;
    m.name = p_inf == 0.0 ? "ideal-gas" : "stiffened-gas";
    m.parameters = {{"R", R}, {"cv", cv}, {"kappa", kappa}, {"tau", tau}};
    if (p_inf != 0.0) m.parameters["p_inf"] = p_inf;
    m.pressure = [R, p_inf](const ThermoPoint& s) { return R * s.rho * s.theta + p_inf; };
    m.dp_drho = [R](const ThermoPoint& s) { return R * s.theta; };
    m.dp_dtheta = [R](const ThermoPoint& s) { return R * s.rho; };
    m.de_dtheta = constant_field(cv);
    m.conductivity = constant_field(kappa);
    m.tau = tau;
    return m;
}

inline ConstitutiveModel ideal_gas(double R = 1.0, double cv = 1.0, double kappa = 1.0,
                                   double tau = 1.0) {
    return stiffened_gas(R, cv, kappa, tau, 0.0);
}

/// Names accepted by make_model.
inline std::vector<std::string> builtin_models() { return {"ideal-gas", "stiffened-gas"}; }

/// Builds a catalog model by name. Recognized keys: R, cv, kappa, tau
/// (default 1) and, for "stiffened-gas", p_inf (default 1). Optional keys
/// lambda and nu set a constant objectivity pair (default (1, -1)).
inline ConstitutiveModel make_model(const std::string& name, const ModelParameters& params = {}) {
    using detail::take;
    ConstitutiveModel m;
    if (name == "ideal-gas") {
        detail::reject_unknown_keys(name, params, {"R", "cv", "kappa", "tau", "lambda", "nu"});
        m = ideal_gas(take(params, "R", 1.0), take(params, "cv", 1.0), take(params, "kappa", 1.0),
                      take(params, "tau", 1.0));
    } else if (name == "stiffened-gas") {
        detail::reject_unknown_keys(name, params,
                                    {"R", "cv", "kappa", "tau", "p_inf", "lambda", "nu"});
        m = stiffened_gas(take(params, "R", 1.0), take(params, "cv", 1.0),
                          take(params, "kappa", 1.0), take(params, "tau", 1.0),
                          take(params, "p_inf", 1.0));
        m.name = "stiffened-gas";
    } else {
        throw UnknownModel("unknown constitutive model '" + name + "'");
    }
    return m.with_lambda_nu(LambdaNu{take(params, "lambda", 1.0), take(params, "nu", -1.0)});
}

} // namespace cathyp
