#include "acceptance.hpp"

#include "calibra/error.hpp"

#include <CLI11.hpp>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    calibra::acceptance::Options opts;
    app.add_option("--seed", opts.seed, "random seed");
    app.add_option("--only", opts.only, "criterion keys or ids")->delimiter(',');
    CLI11_PARSE(app, argc, argv);
    try {
        const auto results = calibra::acceptance::run(opts);
        bool all = true;
        for (const auto& r : results) {
            std::cout << calibra::acceptance::format_line(r) << "\n";
            all = all && r.passed;
        }
        return all ? 0 : 1;
    } catch (const calibra::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
