#include <iostream>

#include "elmpc/cli/cli.hpp"

int main(int argc, char** argv) {
    return elmpc::cli::run(argc, argv, std::cout, std::cerr);
}
