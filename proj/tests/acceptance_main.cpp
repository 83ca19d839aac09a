// Acceptance suite: runs every validation check at its pinned tolerance and
// prints one pass/fail line per criterion. Exit status is the failure count.

#include <chrono>
#include <cstdio>

#include "starkpacket/validation.hpp"

int main()
{
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const auto results = starkpacket::run_validation_checks();

    int failures = 0;
    int index = 0;
    for (const auto& r : results) {
        ++index;
        if (!r.pass) ++failures;
        std::printf("%s  %2d  %s  (measured %.3e, tolerance %.3e)\n", r.pass ? "PASS" : "FAIL", index,
                    r.name.c_str(), r.measured, r.tolerance);
        if (!r.pass) std::printf("      %s\n", r.detail.c_str());
    }
    const double seconds = std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("%d/%d criteria passed in %.1f s\n", index - failures, index, seconds);
    return failures;
}
