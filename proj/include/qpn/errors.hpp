#pragma once

#include <stdexcept>
#include <string>

namespace qpn {

/// Invalid user-supplied configuration or parameters.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Lattice vectors do not span a 3-D cell.
class InvalidLatticeError : public ConfigError {
   public:
    using ConfigError::ConfigError;
};

/// Requested realization would exceed the configured dopant budget.
class CapacityError : public std::runtime_error {
   public:
    CapacityError(const std::string& what, double expected_dopants)
        : std::runtime_error(what), expected_dopants_(expected_dopants) {}
    double expected_dopants() const { return expected_dopants_; }

   private:
    double expected_dopants_;
};

/// Pairwise formula evaluated at zero separation.
class SingularityError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// An operation's precondition was violated by the caller.
class ContractError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace qpn
