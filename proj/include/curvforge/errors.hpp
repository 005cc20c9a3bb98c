#pragma once

#include <stdexcept>
#include <string>

namespace curvforge {

/// Invalid parameters, presets or config files.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A root position that lies outside the bound or inside an obstacle.
class RootRejected : public ConfigError {
public:
    RootRejected(std::size_t index, const std::string& what)
        : ConfigError(what), index_(index) {}

    std::size_t root_index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Two rasters that must share dimensions do not.
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A metric or transform whose input does not admit a defined value
/// (e.g. surface distance against an empty mask).
class UndefinedMetric : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// File system and codec failures.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bank/eval inputs that cannot be matched up (missing ids, unmatched stems).
class PairingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace curvforge
