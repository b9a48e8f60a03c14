#include "argpca/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return argpca::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
