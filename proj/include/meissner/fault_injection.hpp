#pragma once

#include <optional>
#include <string_view>

// Test hooks used by `validate --inject-fault` to confirm that the oracle
// suite notices deliberate mistakes in the closed forms. Never set in
// normal operation.
namespace meissner::fault {

enum class Fault {
  none,
  c1_sign,      // flips the sign of the exterior dipole coefficient
  drop_ratio,   // drops the penetration-depth term from C1
  kick_sign,    // wrong sign on the final recombination kick
  lambda_sign,  // sign error on the (lambda/r) I1 term of the interior field
};

void set(Fault f) noexcept;
Fault active() noexcept;
inline bool is_active(Fault f) noexcept { return active() == f; }

std::optional<Fault> parse(std::string_view name);
std::string_view name(Fault f);

/// Restores the previous fault on scope exit.
class ScopedFault {
 public:
  explicit ScopedFault(Fault f) noexcept : previous_(active()) { set(f); }
  ~ScopedFault() { set(previous_); }
  ScopedFault(const ScopedFault&) = delete;
  ScopedFault& operator=(const ScopedFault&) = delete;

 private:
  Fault previous_;
};

}  // namespace meissner::fault
