#pragma once

namespace halfsphere {

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace halfsphere
