#include "alhazen/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return alhazen::cli::run_cli(argc, argv, std::cout, std::cerr);
}
