#pragma once

#include <functional>
#include <memory>
#include <string>

namespace sdeproj {

// Compiles a one-variable arithmetic expression in x into a callable.
// Supported: numbers, x, pi, e, + - * / ^, parentheses, and the functions
// sin cos tan exp log sqrt abs tanh sinh cosh atan. Throws a config error
// with the offending position on malformed input.
std::function<double(double)> compile_expression(const std::string& text);

}  // namespace sdeproj
