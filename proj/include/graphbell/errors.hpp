#pragma once
// Error taxonomy shared by the library and the CLI exit-code mapping:
//   InputError      -> exit 2 (bad graph/expression/flags)
//   ConstraintError -> exit 3 (valid input, unsatisfiable constraints)
//   BudgetError     -> exit 4 (work refused because it exceeds the budget)
//   InternalCheckError -> exit 5 (a self-consistency check failed)

#include <stdexcept>
#include <string>

namespace graphbell {

class InputError : public std::runtime_error {
  public:
    InputError(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;  // e.g. NON_PRIME, LOOP_EDGE, DISCONNECTED, PARSE
};

class ConstraintError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InternalCheckError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace graphbell
