#include "tdm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tdm::run_cli(args, std::cout, std::cerr);
}
