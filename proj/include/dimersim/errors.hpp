#pragma once

#include <stdexcept>
#include <string>

namespace dimersim {

// Base error carrying a short machine-parsable category ("material",
// "config", "integration", ...).  The CLI prints "error: <category>: what".
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

struct MaterialError : Error {
    explicit MaterialError(const std::string& m) : Error("material", m) {}
};

struct SingularityError : Error {
    explicit SingularityError(const std::string& m) : Error("singularity", m) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error("config", m) {}
};

struct IntegrationError : Error {
    explicit IntegrationError(const std::string& m) : Error("integration", m) {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& m) : Error("schema", m) {}
};

struct IoError : Error {
    explicit IoError(const std::string& m) : Error("io", m) {}
};

}  // namespace dimersim
