#pragma once

namespace splitbpe {

inline constexpr const char* kToolkitVersion = "0.1.0";

// On-disk format versions. Bump when a format changes incompatibly.
inline constexpr const char* kFreqTableFormat = "splitbpe-freqtable v1";
inline constexpr const char* kVocabFormat = "splitbpe-vocab v1";
inline constexpr const char* kStreamFormat = "splitbpe-stream v1";
inline constexpr const char* kNgramFormat = "splitbpe-ngram v1";
inline constexpr const char* kReportFormat = "splitbpe-report v1";

}  // namespace splitbpe
