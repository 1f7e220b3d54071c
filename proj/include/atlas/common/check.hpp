#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace atlas {

// Thrown on violated preconditions and broken map invariants.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

// Thrown on file format problems: bad magic, checksum failure, truncation.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

namespace internal {
[[noreturn]] inline void check_failed(
    const char* expr, const char* file, int line, const std::string& msg) {
  std::ostringstream os;
  os << file << ":" << line << ": check failed: " << expr;
  if (!msg.empty()) {
    os << " (" << msg << ")";
  }
  throw InvariantError(os.str());
}
}  // namespace internal

}  // namespace atlas

#define ATLAS_CHECK(expr)                                            \
  do {                                                               \
    if (!(expr)) {                                                   \
      ::atlas::internal::check_failed(#expr, __FILE__, __LINE__, ""); \
    }                                                                \
  } while (false)

#define ATLAS_CHECK_MSG(expr, msg)                                   \
  do {                                                               \
    if (!(expr)) {                                                   \
      std::ostringstream os_;                                        \
      os_ << msg;                                                    \
      ::atlas::internal::check_failed(#expr, __FILE__, __LINE__,      \
                                      os_.str());                    \
    }                                                                \
  } while (false)
