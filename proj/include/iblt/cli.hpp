#pragma once

#include <iosfwd>

namespace iblt {

/// Process exit codes of the iblt tool.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kListingFailed = 1;
inline constexpr int kCounterexample = 2;
inline constexpr int kBudgetRefused = 3;
inline constexpr int kUsage = 64;
}  // namespace exit_code

/// Runs `iblt build|apply|list|verify|bounds|bench ...`. `in` feeds the apply
/// ops stream when no --ops file is given.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace iblt
