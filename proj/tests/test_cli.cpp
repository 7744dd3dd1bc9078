#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace halfsphere;

namespace {

int call(std::vector<std::string> args, std::string* out_text = nullptr) {
    args.insert(args.begin(), "halfsphere");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    return code;
}

}  // namespace

TEST_CASE("violations map to exit code 4") {
    RunReport report;
    CHECK(exit_code_for(report) == kExitOk);
    report.invariant_violations.push_back("replication 0, n = 10: missed volume above the upper sandwich bound");
    CHECK(exit_code_for(report) == kExitInvariant);
}

TEST_CASE("in-process invocation") {
    std::string out;
    CHECK(call({"exact", "--d", "3", "--functional", "facets", "--n", "inf"}, &out) == kExitOk);
    CHECK(out.find("facets,3,inf,limit,13.15947") != std::string::npos);
    CHECK(call({"exact", "--d", "7", "--functional", "facets", "--n", "9"}) == kExitUnsupported);
    CHECK(call({"cd", "--d", "2"}) == kExitUsage);
    CHECK(call({"sandwich", "--d", "2", "--n-grid", "10,50", "--reps", "50", "--seed", "3"}, &out) == kExitOk);
    CHECK(out.find("2,10,50,sandwich_violations,0,0,,,,3\n") != std::string::npos);
}
