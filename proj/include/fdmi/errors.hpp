#pragma once

#include <stdexcept>
#include <string>

namespace fdmi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value type was constructed with a violated invariant. `rule()` names it.
class InvariantError : public Error {
public:
    InvariantError(std::string rule, const std::string& detail)
        : Error(rule + ": " + detail), rule_(std::move(rule)) {}

    const std::string& rule() const noexcept { return rule_; }

private:
    std::string rule_;
};

/// An operation received an argument outside its domain.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Coil geometry that a formula cannot handle (bundle thicker than loop,
/// coincident dipoles, intersecting filaments).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Scenario or network configuration error. `path()` points into the
/// configuration document when one is involved.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& detail)
        : Error(path.empty() ? detail : path + ": " + detail), path_(std::move(path)) {}
    explicit ConfigError(const std::string& detail) : ConfigError(std::string{}, detail) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Linear solve failed or produced non-finite values.
class NumericalError : public Error {
public:
    NumericalError(double frequency_hz, const std::string& detail)
        : Error(detail), frequency_hz_(frequency_hz) {}

    double frequency_hz() const noexcept { return frequency_hz_; }

private:
    double frequency_hz_;
};

class IoError : public Error {
public:
    IoError(std::string path, const std::string& detail)
        : Error(path + ": " + detail), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

namespace detail {

inline void require(bool ok, const char* rule, const std::string& detail) {
    if (!ok) throw InvariantError(rule, detail);
}

inline void require_param(bool ok, const std::string& detail) {
    if (!ok) throw ParameterError(detail);
}

} // namespace detail
} // namespace fdmi
