#include <iostream>
#include <string>
#include <vector>

#include "npp/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return npp::cli::run(args, std::cout, std::cerr);
}
