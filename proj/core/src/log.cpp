#include "qevolve/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace qevolve {

int log_level()
{
    static const int level = [] {
        const char* env = std::getenv("QEVOLVE_LOG");
        if (!env || !*env)
            return 0;
        if (std::strcmp(env, "debug") == 0 || std::strcmp(env, "2") == 0)
            return 2;
        if (std::strcmp(env, "info") == 0 || std::strcmp(env, "1") == 0)
            return 1;
        return 0;
    }();
    return level;
}

static void vlog(const char* tag, const char* fmt, va_list args)
{
    std::fprintf(stderr, "[qevolve %s] ", tag);
    std::vfprintf(stderr, fmt, args);
    std::fputc('\n', stderr);
}

void log_info(const char* fmt, ...)
{
    if (log_level() < 1)
        return;
    va_list args;
    va_start(args, fmt);
    vlog("info", fmt, args);
    va_end(args);
}

void log_debug(const char* fmt, ...)
{
    if (log_level() < 2)
        return;
    va_list args;
    va_start(args, fmt);
    vlog("debug", fmt, args);
    va_end(args);
}

} // namespace qevolve
