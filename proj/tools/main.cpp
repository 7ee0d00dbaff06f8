#include <iostream>

#include "ssa/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ssa::cli::run(args, std::cout, std::cerr);
}
