#pragma once

#include <stdexcept>
#include <string>

namespace alsc {

// Class index order is fixed globally so transferred output layers line up
// across tasks.
inline constexpr int kNumClasses = 3;
inline constexpr int kPositive = 0;
inline constexpr int kNegative = 1;
inline constexpr int kNeutral = 2;

// Reserved vocabulary slots.
inline constexpr int kPadIndex = 0;
inline constexpr int kUnkIndex = 1;

inline constexpr const char* kClassOrder = "positive,negative,neutral";

inline const char* label_name(int label) {
  switch (label) {
    case kPositive: return "positive";
    case kNegative: return "negative";
    case kNeutral: return "neutral";
    default: throw std::invalid_argument("label_name: bad label " + std::to_string(label));
  }
}

inline int parse_label(const std::string& s) {
  if (s == "positive") return kPositive;
  if (s == "negative") return kNegative;
  if (s == "neutral") return kNeutral;
  throw std::invalid_argument("unknown label \"" + s + "\"");
}

}  // namespace alsc
