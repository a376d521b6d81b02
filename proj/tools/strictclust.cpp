#include <iostream>
#include <string>
#include <vector>

#include "strictclust/cli.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    const std::vector<std::string> args(argv, argv + argc);
    return strictclust::cli::run_cli(args, std::cin, std::cout, std::cerr);
}
