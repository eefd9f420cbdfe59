#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace calibra::acceptance {

struct Criterion {
    int id;
    std::string key;
    std::string title;
    double limit_seconds;
};

struct Result {
    Criterion criterion;
    bool passed = false;
    std::string expected;
    std::string observed;
    std::string tolerance;
    double seconds = 0;
};

struct Options {
    std::uint64_t seed = 20240611;
    std::vector<std::string> only; // keys or ids; empty runs all
};

const std::vector<Criterion>& criteria();
bool selected(const Criterion& c, const std::vector<std::string>& only);
std::vector<Result> run(const Options& opts);
std::string format_line(const Result& r);

} // namespace calibra::acceptance
