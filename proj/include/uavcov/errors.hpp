#pragma once

#include <stdexcept>
#include <string>

namespace uavcov {

/// Invalid scenario parameter. `field()` is the offending config key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field))
  {
  }

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// A numerical kernel failed to meet its tolerance or produced an
/// out-of-range value.
class NumericsError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace uavcov
