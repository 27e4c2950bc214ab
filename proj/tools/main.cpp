#include <iostream>
#include <vector>

#include "heightlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return heightlab::cli_main(args, std::cout, std::cerr);
}
