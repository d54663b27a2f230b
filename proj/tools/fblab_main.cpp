#include <iostream>
#include <string>
#include <vector>

#include "fblab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fblab::dispatch(args, std::cout, std::cerr);
}
