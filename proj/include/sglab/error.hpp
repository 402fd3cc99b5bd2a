#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sglab {

enum class Errc {
  config,
  syntax,
  domain,
  tail_not_certifiable,
  precision_limit,
  image_envelope,
  no_domination,
  outside_disc,
  increase_n,
  inapplicable,
  budget_exhausted,
  beyond_horizon,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(what), code_(code), position_(position) {}

  Errc code() const noexcept { return code_; }
  // Character offset for syntax errors.
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  Errc code_;
  std::optional<std::size_t> position_;
};

// Three-way outcome shared by every certify/refute style check.
enum class Status { certified, refuted, inconclusive };

const char* to_string(Status s);

}  // namespace sglab
