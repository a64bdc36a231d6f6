#include "kerrmzi/errors.hpp"

#include <sstream>
#include <utility>

namespace kerrmzi {
namespace {

std::string join(const std::vector<FieldError>& errors) {
  std::ostringstream os;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (i) os << "; ";
    os << errors[i].field << ": " << errors[i].message;
  }
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<FieldError> errors)
    : std::invalid_argument(join(errors)), errors_(std::move(errors)) {}

ConfigError::ConfigError(std::string key, int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", key '" + key + "': " + what),
      key_(std::move(key)),
      line_(line) {}

TruncationError::TruncationError(std::string stage, double leaked, double budget)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "truncation budget exceeded at stage '" << stage << "': leaked " << leaked
           << " > budget " << budget;
        return os.str();
      }()),
      stage_(std::move(stage)),
      leaked_(leaked) {}

}  // namespace kerrmzi
