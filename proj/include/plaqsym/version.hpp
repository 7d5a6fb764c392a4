#pragma once

namespace plaqsym {
inline constexpr const char* kVersion = "0.1.0";
}
