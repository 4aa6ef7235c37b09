#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairpart {

using AgentId = int;
using PartIndex = int;
using Weight = std::int64_t;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input. The message names the violated clause.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A method was asked to run on an instance outside its class.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// An enumeration or table size cap was hit.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

enum class FairnessNotion { EF, EFX0, EFX, EF1, PROP, MMS };

inline constexpr std::array<FairnessNotion, 6> kAllNotions = {
    FairnessNotion::EF,  FairnessNotion::EFX0, FairnessNotion::EFX,
    FairnessNotion::EF1, FairnessNotion::PROP, FairnessNotion::MMS};

constexpr std::string_view to_string(FairnessNotion notion) {
  switch (notion) {
    case FairnessNotion::EF: return "EF";
    case FairnessNotion::EFX0: return "EFX0";
    case FairnessNotion::EFX: return "EFX";
    case FairnessNotion::EF1: return "EF1";
    case FairnessNotion::PROP: return "PROP";
    case FairnessNotion::MMS: return "MMS";
  }
  return "?";
}

inline std::optional<FairnessNotion> parse_notion(std::string_view text) {
  for (FairnessNotion notion : kAllNotions) {
    if (to_string(notion) == text) return notion;
  }
  return std::nullopt;
}

constexpr bool is_envy_notion(FairnessNotion notion) {
  return notion != FairnessNotion::PROP && notion != FairnessNotion::MMS;
}

}  // namespace fairpart
