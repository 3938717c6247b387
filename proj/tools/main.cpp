#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return injurybench::cli::cli_main(argc, argv, std::cout, std::cerr);
}
