// Runs every acceptance criterion on the reference configuration and prints
// one line per criterion. Exit status is nonzero if any criterion fails.

#include <kgbohm/acceptance.hpp>

#include <cstdio>
#include <cstring>

int main(int argc, char** argv)
{
    using namespace kgbohm;
    Level level = Level::full;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0)
            level = Level::quick;

    const RunConfig rc; // k0/sigma = 10, alpha = 0.83, window [-3,3] x [-4,4]
    const auto report = run_acceptance(rc, level, {}, [](const CriterionResult& r) {
        std::printf("criterion %2d %s  %s (%.2f s)\n", r.id, r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.seconds);
        std::fflush(stdout);
    });
    std::printf("\n%s\n", to_json(report).dump(2).c_str());
    int failed = 0;
    for (const auto& c : report.criteria)
        failed += !c.passed;
    std::printf("\n%d of %zu criteria passed\n", static_cast<int>(report.criteria.size()) - failed,
                report.criteria.size());
    return failed == 0 ? 0 : 1;
}
