#ifndef MUTLIN_ERRORS_HPP_
#define MUTLIN_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mutlin {

// Syntax error in one of the concrete grammars. `position` is a byte offset
// into the input text.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Arithmetic on formula constants left the 64-bit range.
class overflow_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The solver exceeded its configured node/iteration ceiling. This is an
// error, never a verdict.
class budget_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A formula was handed to a component whose Fischer-Ladner closure does not
// contain it.
class closure_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class eval_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mutlin

#endif  // MUTLIN_ERRORS_HPP_
