// core.hpp: shared numeric aliases and the library error type

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace lindtherm {

using cplx = std::complex<double>;
using MatrixXd = Eigen::MatrixXd;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXd = Eigen::VectorXd;
using VectorXcd = Eigen::VectorXcd;

enum class ErrorKind {
    DegenerateSpectrum,
    NonHermitian,
    DimensionMismatch,
    NonPositiveField,
    NonPositiveBeta,
    ErgodicityViolation,
    InvalidDensityMatrix,
    NegativeTime,
    DimensionCap,
    EmptyEnsemble,
    CapExceeded,
    NoDissipativeEigenvalue,
    ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonPositiveField: return "NonPositiveField";
    case ErrorKind::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorKind::ErgodicityViolation: return "ErgodicityViolation";
    case ErrorKind::InvalidDensityMatrix: return "InvalidDensityMatrix";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::DimensionCap: return "DimensionCap";
    case ErrorKind::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NoDissipativeEigenvalue: return "NoDissipativeEigenvalue";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

} // namespace lindtherm
