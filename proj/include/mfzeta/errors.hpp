#pragma once

#include <stdexcept>
#include <string>

namespace mfzeta {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Two regularity values could not be separated at the top of the precision ladder.
class RegularityAmbiguity : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Series evaluation requested at or left of the abscissa of convergence.
class DivergenceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mfzeta
