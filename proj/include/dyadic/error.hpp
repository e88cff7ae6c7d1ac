#pragma once

#include <stdexcept>
#include <string>

namespace dyadic {

enum class errc {
  invalid_argument,
  grid_mismatch,
  nyquist_violation,
  safe_band_violation,
  wrap_violation,
  out_of_range,
  band_collision,
  infeasible,
  not_converged,
  unsupported,
  io,
};

inline const char* to_string(errc c) {
  switch (c) {
    case errc::invalid_argument: return "invalid argument";
    case errc::grid_mismatch: return "grid mismatch";
    case errc::nyquist_violation: return "nyquist violation";
    case errc::safe_band_violation: return "safe band violation";
    case errc::wrap_violation: return "wrap-around violation";
    case errc::out_of_range: return "out of range";
    case errc::band_collision: return "band collision";
    case errc::infeasible: return "infeasible";
    case errc::not_converged: return "not converged";
    case errc::unsupported: return "unsupported";
    case errc::io: return "i/o error";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace dyadic
