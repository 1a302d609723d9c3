#pragma once

#include <stdexcept>
#include <string>

namespace scss {

// A configuration or scenario value violates a documented constraint.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& constraint)
        : std::runtime_error(field + ": " + constraint), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what) {}
};

}  // namespace scss
