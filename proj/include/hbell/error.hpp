#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hbell {

/// Error raised by any computational module. The message is prefixed with
/// the module name ("fock-core: ...") so CLI users can tell where it came from.
class Error : public std::runtime_error {
public:
    Error(std::string_view module, std::string_view message)
        : std::runtime_error(std::string(module) + ": " + std::string(message)), module_(module) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

}  // namespace hbell
