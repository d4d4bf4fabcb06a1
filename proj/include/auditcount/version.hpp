#pragma once

namespace auditcount {

inline constexpr const char* kVersion = "auditcount 0.1.0";

}  // namespace auditcount
