#pragma once

#include <stdexcept>
#include <string>

namespace permwalk {

// Error categories shared with the C API status codes.
enum class errc {
  invalid_argument = 1,
  length_mismatch = 2,
  index_out_of_range = 3,
  nonfinite_value = 4,
  degenerate_statistic = 5,
  limit_exceeded = 6,
  insufficient_samples = 7,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void throw_error(errc code, const std::string& what)
{
  throw error(code, what);
}

}  // namespace permwalk
