#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace specssa::cli {

/// Exit statuses. Domain errors map to kDomainBase + ErrorCode.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitParse = 4;
inline constexpr int kExitDomainBase = 10;
inline constexpr int kExitInternal = 70;

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace specssa::cli
