#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace steerkit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Base class for all library errors; subclasses name the violated contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotHermitianError : public Error { public: using Error::Error; };
class NotPsdError : public Error { public: using Error::Error; };
class ZeroOperatorError : public Error { public: using Error::Error; };
class DimensionMismatchError : public Error { public: using Error::Error; };
class NotAStateError : public Error { public: using Error::Error; };
class NoSignalingViolationError : public Error { public: using Error::Error; };
class RankDeficientSchmidtError : public Error { public: using Error::Error; };
class InvalidDistributionError : public Error { public: using Error::Error; };
class FilterAnnihilatesError : public Error { public: using Error::Error; };
class NotEquivalentError : public Error { public: using Error::Error; };
class SolverFailureError : public Error { public: using Error::Error; };
class TooManyStrategiesError : public Error { public: using Error::Error; };
class InfeasibleWitnessError : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };
class SchemaError : public Error { public: using Error::Error; };

// Numerical tolerances shared across the library. Defaults are tuned for
// dimensions up to ~16 where conditioning stays mild; every knob can be
// overridden per call.
struct Tolerances {
    double herm_tol = 1e-10;      // relative Frobenius, Hermiticity check
    double psd_tol = 1e-9;        // absolute floor on eigenvalues
    double spec_tol = 1e-9;       // relative Frobenius, reconstruction residuals
    double rank_tol = 1e-8;       // relative to lambda_max, numerical rank cutoff
    double ns_tol = 1e-8;         // Frobenius, no-signaling / normalization
    double equiv_tol = 1e-7;      // per-operator Frobenius, class-equivalence residual
    double solver_tol = 1e-7;     // duality-gap requirement on robustness values
    double membership_tol = 1e-6; // robustness value below which membership holds
    double p_floor = 1e-12;       // success probability below which a filter annihilates
    int retry_max = 8;            // randomized alignment retries
    int strategy_cap = 4096;      // cap on k^m deterministic strategies
};

inline double frobenius_norm(const CMatrix& m) { return m.norm(); }

inline bool all_finite(const CMatrix& m) {
    return m.allFinite();
}

}  // namespace steerkit
