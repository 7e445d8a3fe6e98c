#include <iostream>
#include <string>
#include <vector>

#include "netstab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return netstab::run(args, std::cout, std::cerr);
}
