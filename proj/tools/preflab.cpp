#include <iostream>
#include <string>
#include <vector>

#include "prefrec/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return prefrec::run_cli(args, std::cout, std::cerr);
}
