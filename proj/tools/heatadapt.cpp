#include <iostream>
#include <string>
#include <vector>

#include "heatadapt/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return heatadapt::cli::main(args, std::cout, std::cerr);
}
