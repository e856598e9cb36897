#pragma once

namespace qevolve {

/// Verbosity from the QEVOLVE_LOG environment variable:
/// unset/"0" silent, "1"/"info" progress lines, "2"/"debug" per-step detail.
int log_level();

void log_info(const char* fmt, ...);
void log_debug(const char* fmt, ...);

} // namespace qevolve
