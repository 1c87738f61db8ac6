#pragma once

#include <string>
#include <string_view>

#include "scenefuzz/simulator.hpp"

namespace scenefuzz {

// Plain-text trace round-trip. format_trace is canonical and deterministic,
// so identical traces serialize to identical bytes; parse_trace rejects
// truncated or malformed files with line diagnostics.
std::string format_trace(const RoundTrace& trace);
RoundTrace parse_trace(std::string_view text);
RoundTrace load_trace(const std::string& path);
void save_trace(const std::string& path, const RoundTrace& trace);

}  // namespace scenefuzz
