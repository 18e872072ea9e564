#pragma once

namespace practiq {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kPipelineVersion = "practiq-0.1.0";
inline constexpr int kConversationFormatVersion = 1;

}  // namespace practiq
