#include "commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return pulsearea::cli::run_cli(argc, argv, std::cout, std::cerr);
}
