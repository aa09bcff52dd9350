#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace dsub {

enum class Errc {
  parse,
  unknown_identifier,
  arity_mismatch,
  domain,
  division_by_zero,
  dimension_mismatch,
  grid_mismatch,
  invalid_argument,
  kink,
  witness_not_found,
};

const char* to_string(Errc code) noexcept;

/// Every failure raised by the library. Parse failures carry the byte offset
/// into the source text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(what), code_(code), position_(position) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  Errc code_;
  std::optional<std::size_t> position_;
};

}  // namespace dsub
