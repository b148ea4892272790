#pragma once

#include <stdexcept>
#include <string>

namespace zensim {

// Failures of a numerical procedure (non-convergence, unphysical input to a formula).
// Tagged with the module that raised them.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(module) {}
    const std::string& module() const { return module_; }

private:
    std::string module_;
};

} // namespace zensim
