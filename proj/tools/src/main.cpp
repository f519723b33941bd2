#include <iostream>

#include "ratjac_cli/cli.hpp"

int main(int argc, char** argv) {
    return ratjac::cli::main_entry(argc, argv, std::cout, std::cerr);
}
