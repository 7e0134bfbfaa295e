#include <iostream>
#include <string>
#include <vector>

#include "cminhash/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cmh::cli_dispatch(args, std::cout, std::cerr);
}
