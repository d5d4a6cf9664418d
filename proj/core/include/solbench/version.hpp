#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace solbench {

struct Version {
  int major = 0;
  int minor = 0;
  int patch = 0;

  auto operator<=>(const Version&) const = default;

  /// Accepts `0.8.26`, `v0.8.26`, `0.8.26+commit.abc`, and partial `0.8`.
  static std::optional<Version> parse(std::string_view text);
  std::string str() const;
};

/// A solidity pragma version expression: comparator sets (`^0.8.0`,
/// `>=0.4.22 <0.6.0`, `0.5.17`, `~0.6.2`) joined by `||`.
class VersionConstraint {
 public:
  static std::optional<VersionConstraint> parse(std::string_view text);

  bool satisfied_by(const Version& v) const;

 private:
  enum class Op { Eq, Lt, Le, Gt, Ge };
  struct Comparator {
    Op op;
    Version version;
  };
  std::vector<std::vector<Comparator>> alternatives_;
};

/// True when `v` satisfies every pragma constraint; unparseable pragmas are
/// ignored and an empty list admits everything.
bool pragmas_admit(const std::vector<std::string>& pragmas, const Version& v);

/// True when the pragmas rule out every 0.8+ compiler (no checked arithmetic).
bool pragmas_predate_checked_arithmetic(const std::vector<std::string>& pragmas);

}  // namespace solbench
