#include "meissner/fault_injection.hpp"

#include <array>
#include <atomic>
#include <utility>

namespace meissner::fault {
namespace {

std::atomic<Fault> current{Fault::none};

constexpr std::array<std::pair<Fault, std::string_view>, 5> names{{
    {Fault::none, "none"},
    {Fault::c1_sign, "c1_sign"},
    {Fault::drop_ratio, "drop_ratio"},
    {Fault::kick_sign, "kick_sign"},
    {Fault::lambda_sign, "lambda_sign"},
}};

}  // namespace

void set(Fault f) noexcept { current.store(f, std::memory_order_relaxed); }
Fault active() noexcept { return current.load(std::memory_order_relaxed); }

std::optional<Fault> parse(std::string_view n) {
  for (const auto& [f, s] : names)
    if (s == n) return f;
  return std::nullopt;
}

std::string_view name(Fault f) {
  for (const auto& [g, s] : names)
    if (g == f) return s;
  return "unknown";
}

}  // namespace meissner::fault
