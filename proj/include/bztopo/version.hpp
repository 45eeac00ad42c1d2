#pragma once

namespace bztopo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bztopo
