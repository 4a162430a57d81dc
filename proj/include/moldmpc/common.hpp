#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace moldmpc
{

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

constexpr double kKelvinOffset = 273.15;

inline double to_kelvin(double celsius) { return celsius + kKelvinOffset; }
inline double to_celsius(double kelvin) { return kelvin - kKelvinOffset; }

// Error families. Everything derives from std::runtime_error so the CLI can
// report any failure with a single handler.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class IdentificationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace moldmpc
