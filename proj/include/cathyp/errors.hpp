#pragma once

#include <stdexcept>
#include <string>

namespace cathyp {

/// Base of every error raised by the library. Catch this to handle all of them.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (rho, theta) outside the admissible domain rho > 0, theta > 0.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A constitutive quantity that must be positive (p, p_rho, p_theta, e_theta, kappa, tau) is not.
class ConstitutiveViolation : public Error {
public:
    using Error::Error;
};

class UnknownModel : public Error {
public:
    using Error::Error;
};

/// Leading block of a block determinant is numerically singular.
class SingularBlock : public Error {
public:
    using Error::Error;
};

/// lambda + nu vanishes where the complex-root construction needs it nonzero.
class GammaZero : public Error {
public:
    using Error::Error;
};

class SingularA0 : public Error {
public:
    using Error::Error;
};

/// The eta0 eigenbasis construction only exists for (lambda, nu) = (1, -1).
class WrongLambdaNu : public Error {
public:
    using Error::Error;
};

class NotApplicable : public Error {
public:
    using Error::Error;
};

/// Malformed input: shapes, non-unit directions, empty grids, bad config keys.
class InvalidInput : public Error {
public:
    using Error::Error;
};

} // namespace cathyp
