#include <iostream>
#include <string>
#include <vector>

#include "hcb/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hcb::run_cli(args, std::cout, std::cerr);
}
