#pragma once

#include <string_view>

namespace ipcw {

inline constexpr std::string_view kVersion = "0.1.0";

//! RNG algorithm identifier pinned into every output file so runs are
//! reproducible across machines.
inline constexpr std::string_view kRngName = "xoshiro256ss-1.0/splitmix64";

}  // namespace ipcw
